"""DBT chains: Crum and iterated potentials, eigenstates by three routes, ELP closed forms."""

from fractions import Fraction
from math import comb

import pytest
import sympy as sp
from hypothesis import assume, given
from hypothesis import strategies as st

from isodbt.chain import (ChainSpec, DegenerateChain, crum_krein_delta, dbt_step,
                          determinant_matrices, eigenstate_determinant, eigenstate_iterated,
                          eigenstate_wronskian, elp_one_step, elp_one_step_uncorrected,
                          extended_potential, transport_chain, weight_function)
from isodbt.exact import GaugedFunction, schrodinger_numerator, wronskian
from isodbt.isotonic import ConstraintViolation, IsotonicParams, physical_state, potential
from oracles import gauged_expr, is_zero_expr, isotonic_expr, q, x

step = st.tuples(st.integers(0, 3), st.sampled_from([1, -1]))


@st.composite
def chains(draw, max_len=3):
    a = draw(st.sampled_from([2, 3, 4, Fraction(7, 2)]))
    omega = draw(st.sampled_from([1, 2, Fraction(1, 2)]))
    steps = draw(st.lists(step, min_size=1, max_size=max_len, unique=True))
    alpha = Fraction(a) - Fraction(1, 2)
    assume(all(i == 1 or alpha > n for n, i in steps))
    return ChainSpec.build(steps, omega, a)


def test_chainspec_parsing_and_validation():
    c = ChainSpec.build(["1+", "2-"], 1, 4)
    assert c.steps == ((1, 1), (2, -1)) and c.q == 0 and c.m == 2
    assert c.label() == "1+,2-"
    assert c.reordered().steps == ((1, 1), (2, -1))
    assert ChainSpec.build(["2-", "1+"], 1, 4).reordered().steps == ((1, 1), (2, -1))
    with pytest.raises(ConstraintViolation):
        ChainSpec.build(["1+", "1+"], 1, 2)
    with pytest.raises(ConstraintViolation):
        ChainSpec.build(["2-"], 1, 2)
    with pytest.raises(ConstraintViolation):
        ChainSpec.build([(0, 3)], 1, 2)
    with pytest.raises(ValueError):
        ChainSpec.build(["x+"], 1, 2)


def test_one_step_potential_against_sympy_crum():
    c = ChainSpec.build(["1+"], 1, 2)
    phi = gauged_expr(c.seeds[0].fn)
    expected = isotonic_expr(1, 2) - 2 * sp.diff(sp.log(phi), x, 2)
    assert is_zero_expr(gauged_expr(extended_potential(c).closed_form) - expected)


def test_two_step_potential_against_sympy_crum():
    c = ChainSpec.build(["1+", "2-"], 1, 4)
    W = sp.wronskian([gauged_expr(s.fn) for s in c.seeds], x)
    expected = isotonic_expr(1, 4) - 2 * sp.diff(sp.log(W), x, 2)
    got = gauged_expr(extended_potential(c).closed_form)
    assert sp.cancel(sp.expand(got - expected)) == 0


def test_plus_sign_in_crum_formula_fails():
    c = ChainSpec.build(["0+"], 1, 2)
    ext = extended_potential(c)
    plus = potential(c.params).as_gauged() - ext.correction
    psi = eigenstate_wronskian(c, 1)
    assert ext.forms_agree
    assert not schrodinger_numerator(psi.fn, psi.energy, plus).is_zero()


@given(chains())
def test_iterated_equals_crum(c):
    ext = extended_potential(c)
    assert ext.forms_agree
    assert ext.closed_form == ext.iterated_form


@given(chains(), st.integers(0, 4))
def test_eigenstates_solve_extended_equation(c, k):
    st_ = eigenstate_wronskian(c, k)
    assert st_.satisfies_schrodinger()
    assert st_.energy == 2 * k * c.omega


@given(chains(max_len=2), st.integers(0, 3))
def test_three_eigenstate_routes_agree(c, k):
    w = eigenstate_wronskian(c, k)
    assert w.is_proportional_to(eigenstate_iterated(c, k))
    assert w.is_proportional_to(eigenstate_determinant(c, k))


@given(chains(), st.integers(0, 3))
def test_degree_bookkeeping(c, k):
    D = extended_potential(c).D
    qp, qm = c.q_plus, c.q_minus
    assert D.degree == sum(n for n, _ in c.steps) - comb(qp, 2) - comb(qm, 2) + qp * qm
    st_ = eigenstate_wronskian(c, k)
    assert st_.denominator == D
    assert st_.numerator_poly.degree == D.degree + k
    assert st_.fn.x_power == c.params.a + c.q


@given(chains())
def test_potential_is_independent_of_step_order(c):
    rev = ChainSpec(tuple(reversed(c.steps)), c.params)
    assert extended_potential(rev).closed_form == extended_potential(c).closed_form


@given(chains())
def test_crum_krein_factorisation(c):
    prod = GaugedFunction.constant(1, c.omega)
    for s in c.seeds:
        prod = prod * s.fn
    assert crum_krein_delta(c) * prod == extended_potential(c).W


@given(chains(max_len=2))
def test_dbt_step_maps_rs_solutions(c):
    # each transported physical RS function solves the Riccati equation of the image
    ext = extended_potential(c).closed_form
    extra = [(physical_state(k, c.params).rs_function(), 2 * k * c.omega) for k in range(3)]
    _, images = transport_chain(c, extra)
    for (w, e) in zip(images, (e for _, e in extra)):
        assert (w.differentiate() - w * w - (e - ext)).is_zero()


def test_dbt_step_rejects_coincident_energies():
    p = IsotonicParams(1, 2)
    w = physical_state(1, p).rs_function()
    with pytest.raises(ValueError):
        dbt_step(w, w, 2, 2)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("sign", ["+", "-"])
@pytest.mark.parametrize("k", range(5))
def test_one_step_numerators_are_exceptional_laguerre(n, sign, k):
    a = 2 if sign == "+" else n + 1
    c = ChainSpec.build([f"{n}{sign}"], 1, a)
    num = eigenstate_wronskian(c, k).numerator_poly
    elp = elp_one_step(sign, n, k, c.params.alpha)
    assert elp.degree == n + k == num.degree
    ratio = num.lc / elp.lc
    assert num == elp * ratio


def test_uncorrected_l2_coefficient_fails():
    c = ChainSpec.build(["1-"], 1, 2)
    num = eigenstate_wronskian(c, 2).numerator_poly
    variant = elp_one_step_uncorrected(1, 2, c.params.alpha)
    assert variant.degree != num.degree or num != variant * (num.lc / variant.lc)


def test_elp_l2_needs_alpha_above_n():
    with pytest.raises(ConstraintViolation):
        elp_one_step("L2", 3, 0, Fraction(5, 2))
    with pytest.raises(ValueError):
        elp_one_step("3", 1, 0, 2)


def test_determinant_matrix_shapes():
    c = ChainSpec.build(["1+", "2-"], 1, 4)
    Psi, Phi = determinant_matrices(c, 3)
    assert len(Psi) == 3 and all(len(r) == 3 for r in Psi)
    assert len(Phi) == 2 and all(len(r) == 2 for r in Phi)


def test_weight_exponent_and_denominator():
    c = ChainSpec.build(["1+", "2-", "3+"], 1, 4)
    w = weight_function(c)
    assert w.exponent == c.params.alpha + c.q
    assert w.denominator == extended_potential(c).D


def test_wronskian_of_equal_seed_functions_is_degenerate():
    p = IsotonicParams(1, 2)
    f = physical_state(1, p)
    assert wronskian([f, f * 3]).is_zero()
    c = ChainSpec.build(["1+"], 1, 2)
    with pytest.raises(ValueError):
        eigenstate_wronskian(c, -1)
    assert issubclass(DegenerateChain, ValueError)
