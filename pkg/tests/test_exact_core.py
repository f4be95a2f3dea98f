"""Exact substrate against sympy: polynomials, rational functions, gauged functions,
determinants, Wronskians and Sturm counts."""

import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import assume, given
from hypothesis import strategies as st

from isodbt.exact import (GaugedFunction, GaugeMismatch, Poly, RationalFn, bareiss_det,
                          field_det, poly_arith, poly_gcd, schrodinger_numerator, sturm_count,
                          wronskian)
from oracles import gauged_expr, is_zero_expr, poly_expr, q, sympy_poly, x, z

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
polys = st.lists(small, min_size=0, max_size=6).map(Poly)
nonzero_polys = polys.filter(lambda p: not p.is_zero())


def to_poly(sp_poly) -> Poly:
    coeffs = sp_poly.all_coeffs()[::-1]
    return Poly([Fraction(int(c.p), int(c.q)) for c in coeffs])


# -- polynomials ---------------------------------------------------------------

@given(polys, polys)
def test_ring_operations_match_sympy(a, b):
    A, B = sympy_poly(a), sympy_poly(b)
    assert sympy_poly(a + b) == A + B
    assert sympy_poly(a - b) == A - B
    assert sympy_poly(a * b) == A * B


@given(polys, nonzero_polys)
def test_divmod_matches_sympy(a, b):
    qq, r = divmod(a, b)
    Q, R = sp.div(sympy_poly(a), sympy_poly(b))
    assert sympy_poly(qq) == Q and sympy_poly(r) == R
    assert qq * b + r == a
    assert r.is_zero() or r.degree < b.degree


@given(nonzero_polys, nonzero_polys)
def test_gcd_is_monic_sympy_gcd(a, b):
    g = poly_gcd(a, b)
    assert g == to_poly(sp.gcd(sympy_poly(a), sympy_poly(b)).monic())
    assert g.lc == 1
    assert (a % g).is_zero() and (b % g).is_zero()


@given(polys, polys)
def test_leibniz_rule(a, b):
    assert (a * b).deriv() == a.deriv() * b + a * b.deriv()


@given(polys, small)
def test_exact_evaluation_matches_sympy(a, v):
    assert a(v) == Fraction(str(sympy_poly(a).eval(q(v))))


@given(nonzero_polys)
def test_primitive_has_integer_coprime_coefficients(a):
    p = a.primitive()
    coeffs = p.to_list()
    assert all(c.denominator == 1 for c in coeffs)
    assert math.gcd(*(int(c) for c in coeffs)) == 1
    assert p.lc > 0
    assert (a * (1 / a.lc)) == p * (1 / p.lc)


def test_poly_arith_dispatch():
    a, b = Poly([1, 2]), Poly([-1, 1])
    assert poly_arith(a, b, "add") == Poly([0, 3])
    assert poly_arith(a, b, "divmod") == divmod(a, b)
    with pytest.raises(ValueError):
        poly_arith(a, b, "pow")


def test_zero_division_raises():
    with pytest.raises(ZeroDivisionError):
        divmod(Poly([1]), Poly())
    with pytest.raises(ZeroDivisionError):
        RationalFn(Poly([1]), Poly())


@given(polys, nonzero_polys, polys, nonzero_polys)
def test_rational_functions_reduce_and_match_sympy(a, b, c, d):
    r, s = RationalFn(a, b), RationalFn(c, d)
    expr = poly_expr(a) / poly_expr(b) + poly_expr(c) / poly_expr(d)
    total = r + s
    assert sp.cancel(poly_expr(total.num) / poly_expr(total.den) - expr) == 0
    if not total.is_zero():
        assert poly_gcd(total.num, total.den).degree == 0
        assert total.den.lc == 1


# -- determinants ------------------------------------------------------------

int_mats = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n))


@given(int_mats)
def test_bareiss_matches_sympy_on_integers(m):
    assert bareiss_det(m, 0, 1) == sp.Matrix(m).det()


@given(st.integers(1, 3).flatmap(lambda n: st.lists(
    st.lists(st.lists(st.integers(-3, 3), max_size=3).map(Poly), min_size=n, max_size=n),
    min_size=n, max_size=n)))
def test_bareiss_over_polynomials_matches_sympy(m):
    det = bareiss_det(m, Poly(), Poly.constant(1))
    M = sp.Matrix([[poly_expr(e) for e in row] for row in m])
    assert sp.expand(poly_expr(det) - M.det()) == 0


@given(int_mats, int_mats)
def test_determinant_is_multiplicative(a, b):
    assume(len(a) == len(b))
    prod = (sp.Matrix(a) * sp.Matrix(b)).tolist()
    assert bareiss_det(prod, 0, 1) == bareiss_det(a, 0, 1) * bareiss_det(b, 0, 1)


@given(st.integers(3, 4).flatmap(lambda n: st.lists(
    st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_sylvester_desnanot_jacobi_identity(m):
    # det M det M[1:-1,1:-1] = det M^1_1 det M^n_n - det M^1_n det M^n_1
    n = len(m)

    def minor(rows, cols):
        return bareiss_det([[m[r][c] for c in cols] for r in rows], 0, 1)

    allr = range(n)
    drop = lambda i: [k for k in allr if k != i]
    inner = minor(range(1, n - 1), range(1, n - 1))
    lhs = bareiss_det(m, 0, 1) * inner
    rhs = (minor(drop(0), drop(0)) * minor(drop(n - 1), drop(n - 1))
           - minor(drop(0), drop(n - 1)) * minor(drop(n - 1), drop(0)))
    assert lhs == rhs


def test_field_det_over_rationals():
    m = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(1, 5)]]
    assert field_det(m, Fraction(0), Fraction(1)) == Fraction(1, 10) - Fraction(1, 12)


# -- Sturm -------------------------------------------------------------------

@given(st.lists(st.fractions(min_value=-6, max_value=6, max_denominator=3), min_size=1, max_size=5),
       st.integers(0, 2))
def test_sturm_count_matches_roots_in_half_line(roots, quad):
    p = Poly.constant(1)
    for r in roots:
        p = p * Poly([-r, 1])
    p = p * (Poly([1, 0, 1]) ** quad)  # no real roots added
    expected = len({r for r in roots if r > 0})
    assert sturm_count(p) == expected
    sym = sympy_poly(p)
    assert expected == len([r for r in set(sp.real_roots(sym)) if r > 0])


@given(nonzero_polys)
def test_sturm_count_agrees_with_grid_scan_lower_bound(p):
    grid = np.linspace(1e-3, 20, 4001)
    vals = p.evaluate_float(grid)
    changes = int(np.count_nonzero(np.sign(vals[1:]) * np.sign(vals[:-1]) < 0))
    assert sturm_count(p) >= changes


def test_sturm_interval_endpoint_root_excluded():
    p = Poly([-1, 1]) * Poly([-2, 1])
    assert sturm_count(p, (0, 2)) == 1
    assert sturm_count(p, ("1/2", "5/2")) == 2
    assert sturm_count(p, (-math.inf, math.inf)) == 2
    with pytest.raises(ValueError):
        sturm_count(Poly())


# -- gauged functions --------------------------------------------------------

exps = st.fractions(min_value=-3, max_value=3, max_denominator=2)
omegas = st.sampled_from([Fraction(1), Fraction(2), Fraction(1, 2)])


@st.composite
def gauged(draw, omega=None, exp_coeff=None):
    w = omega if omega is not None else draw(omegas)
    c = exp_coeff if exp_coeff is not None else draw(st.sampled_from([Fraction(-1, 2), 0, Fraction(1, 2)]))
    num = draw(nonzero_polys)
    den = draw(st.lists(small, min_size=1, max_size=3).map(Poly).filter(lambda p: not p.is_zero()))
    return GaugedFunction(draw(exps), c, RationalFn(num, den), w)


@given(st.data())
def test_gauged_derivative_matches_sympy(data):
    f = data.draw(gauged())
    assert is_zero_expr(gauged_expr(f.differentiate()) - sp.diff(gauged_expr(f), x))


@given(st.data())
def test_gauged_product_and_sum(data):
    w = data.draw(omegas)
    c = data.draw(st.sampled_from([Fraction(-1, 2), Fraction(1, 2)]))
    f, g = data.draw(gauged(omega=w, exp_coeff=c)), data.draw(gauged(omega=w, exp_coeff=c))
    assert is_zero_expr(gauged_expr(f * g) - gauged_expr(f) * gauged_expr(g))
    if (f.x_power - g.x_power) % 2 == 0:
        assert is_zero_expr(gauged_expr(f + g) - gauged_expr(f) - gauged_expr(g))
    else:
        with pytest.raises(GaugeMismatch):
            f + g


def test_gauge_mismatch_on_exponentials():
    f = GaugedFunction(0, Fraction(1, 2), Poly([1]), 1)
    g = GaugedFunction(0, Fraction(-1, 2), Poly([1]), 1)
    with pytest.raises(GaugeMismatch):
        f + g


def test_canonical_form_strips_z_powers():
    f = GaugedFunction(1, 0, Poly([0, 0, 3]), 2)  # x z^2 * 3 = 3 x^5 (omega=2: z = x^2)
    assert f.x_power == 5 and f.body.num == Poly([3])


@given(st.data())
def test_wronskian_matches_sympy(data):
    w = data.draw(omegas)
    fs = [GaugedFunction(data.draw(exps), data.draw(st.sampled_from([Fraction(-1, 2), Fraction(1, 2)])),
                         data.draw(nonzero_polys), w) for _ in range(data.draw(st.integers(1, 3)))]
    W = wronskian(fs)
    exprs = [gauged_expr(f) for f in fs]
    assert is_zero_expr(gauged_expr(W) - sp.wronskian(exprs, x))


@given(st.data())
def test_wronskian_scaling(data):
    # W(g f1, g f2) = g^2 W(f1, f2) and W(c f1, f2) = c W(f1, f2)
    w = data.draw(omegas)
    f1, f2, g = (data.draw(gauged(omega=w)) for _ in range(3))
    assert wronskian([g * f1, g * f2]) == g * g * wronskian([f1, f2])
    c = data.draw(small.filter(bool))
    assert wronskian([f1 * c, f2]) == wronskian([f1, f2]) * c


@given(st.data())
def test_wronskian_antisymmetric(data):
    w = data.draw(omegas)
    f1, f2 = data.draw(gauged(omega=w)), data.draw(gauged(omega=w))
    assert wronskian([f2, f1]) == -wronskian([f1, f2])


@given(st.data())
def test_schrodinger_numerator_matches_residual(data):
    w = data.draw(omegas)
    f = data.draw(gauged(omega=w))
    E = data.draw(small)
    # V chosen so that f solves the equation exactly: V = f''/f + E
    V = f.differentiate().differentiate() / f + E
    assert schrodinger_numerator(f, E, V).is_zero()
    assert not schrodinger_numerator(f, E + 1, V).is_zero()


def test_evaluate_matches_closed_form():
    f = GaugedFunction(Fraction(3, 2), Fraction(-1, 2), Poly([1, 2]), 2)
    xs = np.array([0.3, 1.0, 2.5])
    zz = xs ** 2
    np.testing.assert_allclose(f.evaluate(xs), xs ** 1.5 * np.exp(-zz / 2) * (1 + 2 * zz))


def test_sturm_count_with_multiple_root_at_left_endpoint():
    # z^2 (1 + z^2) has no root in (0, inf); the plain sequence gave -1
    assert sturm_count(Poly([0, 0, 1, 0, 1])) == 0
    assert sturm_count(Poly([0, 0, -2, 1]) * Poly([-1, 1]) ** 3) == 2
