"""Float oracles: finite-difference spectra, convergence order, Gram matrices and node counts."""

import math

import numpy as np
import pytest

from isodbt.chain import ChainSpec, eigenstate_wronskian, extended_potential
from isodbt.exact import Poly
from isodbt.isotonic import IsotonicParams, physical_state
from isodbt.laguerre import laguerre_poly
from isodbt.numeric import (GridSpec, chain_spectrum, convergence_orders, default_grid,
                            grid_spectrum, node_scan, orthogonality_matrix)


def test_gridspec_validation_and_refinement():
    g = GridSpec(99, 0.5, 10.5)
    assert g.h == pytest.approx(0.1)
    assert g.nodes()[0] == pytest.approx(0.6) and len(g.nodes()) == 99
    assert g.refined().h == pytest.approx(0.05)
    for bad in [(99, 0, 1), (99, 2, 1), (3, 0.1, 1)]:
        with pytest.raises(ValueError):
            GridSpec(*bad)
    with pytest.raises(ValueError):
        GridSpec(99, 0.1, 1, order=3)


def test_base_spectrum():
    rep = chain_spectrum(ChainSpec.build([], 1, 4), 4)
    assert rep.passed(1e-6)
    np.testing.assert_allclose(rep.eigenvalues, [0, 2, 4, 6], atol=1e-6)


@pytest.mark.parametrize("label,a", [("1+", 2), ("2-", 4), ("1+,2-", 4), ("1+,2+", 4)])
def test_extension_is_isospectral(label, a):
    rep = chain_spectrum(ChainSpec.build(label.split(","), 1, a), 4)
    assert rep.passed(1e-6), rep.as_dict()


def test_harmonic_box_matches_sine_levels():
    # V = 0 on [0, pi] with Dirichlet ends: eigenvalues k^2
    g = GridSpec(399, 1e-12, math.pi)
    rep = grid_spectrum(lambda x: np.zeros_like(x), g, 3, [1, 4, 9])
    assert rep.max_abs_delta < 1e-6


@pytest.mark.parametrize("order", [2, 4])
def test_observed_convergence_order(order):
    g = GridSpec(24, 1e-12, math.pi, order)
    orders = convergence_orders(lambda x: np.zeros_like(x), g, 3, [1, 4, 9])
    assert all(abs(o - order) < 0.2 for o in orders), orders


def test_observed_order_on_an_extension():
    c = ChainSpec.build(["1+", "2-"], 1, 4)
    g = default_grid(c.params, 4, n_points=500)
    orders = convergence_orders(extended_potential(c), g, 4, [0, 2, 4, 6])
    assert all(abs(o - 4) < 0.2 for o in orders), orders


def test_spectrum_errors():
    g = GridSpec(10, 0.1, 1.0)
    with pytest.raises(ValueError):
        grid_spectrum(lambda x: np.exp(1000 * x), g, 2)
    with pytest.raises(ValueError):
        grid_spectrum(lambda x: np.full_like(x, np.nan), g, 2)
    with pytest.raises(ValueError):
        grid_spectrum(lambda x: x, GridSpec(10, 0.1, 1), 11)
    with pytest.raises(ValueError):
        grid_spectrum(lambda x: x, GridSpec(10, 0.1, 1), 0)


@pytest.mark.parametrize("label,a", [("", 2), ("1+", 2), ("1+,2-", 4), ("2-", 4)])
def test_gram_matrix_is_diagonal(label, a):
    c = ChainSpec.build(label.split(",") if label else [], 1, a)
    rep = orthogonality_matrix(c, 5)
    assert rep.max_offdiag < 1e-10
    assert np.all(np.diag(rep.matrix) > 0)


def test_gram_matrix_matches_physical_norms():
    # base oscillator: int_0^inf z^alpha e^-z L_j L_k dz = Gamma(k+alpha+1)/k! delta_jk
    c = ChainSpec.build([], 1, 3)
    rep = orthogonality_matrix(c, 3)
    al = c.params.alpha
    for k in range(3):
        scale = float(eigenstate_wronskian(c, k).numerator_poly.lc / laguerre_poly(k, al).lc)
        expected = math.gamma(k + float(al) + 1) / math.factorial(k) * scale ** 2
        assert rep.matrix[k, k] == pytest.approx(expected, rel=1e-10)


def test_orthogonality_refuses_inadmissible_chains():
    c = ChainSpec.build(["0-", "1-"], 1, 2)
    with pytest.raises(ValueError):
        orthogonality_matrix(c, 2)


@pytest.mark.parametrize("label,a", [("", 2), ("1+", 2), ("1+,2-", 4)])
def test_node_count_equals_level(label, a):
    c = ChainSpec.build(label.split(",") if label else [], 1, a)
    grid = np.linspace(1e-3, 12, 20001)
    for k in range(5):
        assert node_scan(eigenstate_wronskian(c, k).fn, grid) == k


def test_node_scan_inputs():
    assert node_scan(Poly([-1, 1]), np.linspace(0, 2, 11)) == 1
    assert node_scan(np.sin, GridSpec(999, 0.1, 10)) == 3
    assert node_scan(physical_state(2, IsotonicParams(1, 2)), GridSpec(999, 0.01, 10)) == 2


def test_default_grid_covers_classical_region():
    p = IsotonicParams(1, 4)
    g = default_grid(p, 4)
    assert g.x_min <= 1e-3 and g.x_max > math.sqrt(4 * 6)


def test_extended_potential_float_matches_exact_evaluation():
    c = ChainSpec.build(["1+"], 1, 2)
    V = extended_potential(c)
    xs = np.array([0.5, 1.0, 2.0])
    np.testing.assert_allclose(V(xs), V.closed_form.evaluate(xs), rtol=1e-12)
