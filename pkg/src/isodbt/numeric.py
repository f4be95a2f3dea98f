"""Floating-point oracles: a half-line eigensolver and a quadrature Gram matrix.

Nothing here feeds back into the exact modules. Exact objects are turned into
floats only when they are evaluated on a grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad_vec
from scipy.linalg import eig_banded

from .chain import ChainSpec, eigenstate_wronskian, extended_potential, weight_function
from .exact import GaugedFunction, Poly
from .isotonic import IsotonicParams, potential

__all__ = [
    "GridSpec", "SpectrumReport", "GramReport", "default_grid", "grid_spectrum",
    "chain_spectrum", "orthogonality_matrix", "node_scan", "convergence_orders",
]

DEFAULT_TOL = 1e-6


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on [x_min, x_max] with Dirichlet conditions at both ends.

    ``n_points`` counts interior nodes; ``order`` is 2 or 4.
    """

    n_points: int
    x_min: float
    x_max: float
    order: int = 4

    def __post_init__(self):
        if not (0 < self.x_min < self.x_max):
            raise ValueError(f"need 0 < x_min < x_max, got {self.x_min}, {self.x_max}")
        if self.n_points < 5:
            raise ValueError("at least 5 interior points are needed")
        if self.order not in (2, 4):
            raise ValueError("finite-difference order must be 2 or 4")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points + 1)

    def nodes(self) -> np.ndarray:
        return self.x_min + self.h * np.arange(1, self.n_points + 1)

    def refined(self, factor: int = 2) -> "GridSpec":
        """Same interval, spacing divided by ``factor``."""
        return GridSpec((self.n_points + 1) * factor - 1, self.x_min, self.x_max, self.order)

    def as_dict(self) -> dict:
        return {"n_points": self.n_points, "x_min": self.x_min, "x_max": self.x_max,
                "order": self.order}


def default_grid(params: IsotonicParams, levels: int, n_points: int = 4000,
                 order: int = 4) -> GridSpec:
    """x_max = 3 sqrt(2 (E_max + |V0|) / omega^2), x_min = min(1e-3, 1/(10 a))."""
    w = float(params.omega)
    e_max = 2 * (levels - 1) * w
    x_max = 3 * math.sqrt(2 * (e_max + abs(float(params.V0))) / w ** 2)
    x_min = min(1e-3, 1 / (10 * float(params.a)))
    return GridSpec(n_points, x_min, x_max, order)


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: tuple
    targets: tuple
    grid: GridSpec
    abs_deltas: tuple = field(default=())
    rel_deltas: tuple = field(default=())

    @property
    def max_abs_delta(self) -> float:
        return max(self.abs_deltas) if self.abs_deltas else float("nan")

    def passed(self, tol: float = DEFAULT_TOL) -> bool:
        return bool(self.abs_deltas) and self.max_abs_delta <= tol

    def as_dict(self) -> dict:
        return {"eigenvalues": list(self.eigenvalues), "targets": list(self.targets),
                "abs_deltas": list(self.abs_deltas), "rel_deltas": list(self.rel_deltas),
                "grid": self.grid.as_dict()}


def _banded_hamiltonian(v: np.ndarray, grid: GridSpec) -> np.ndarray:
    n, h2 = grid.n_points, grid.h ** 2
    if grid.order == 2:
        band = np.zeros((2, n))
        band[0, 1:] = -1 / h2
        band[1] = 2 / h2 + v
        return band
    # -psi'' ~ (psi_{i-2}/12 - 4 psi_{i-1}/3 + 5 psi_i/2 - 4 psi_{i+1}/3 + psi_{i+2}/12) / h^2
    band = np.zeros((3, n))
    band[0, 2:] = 1 / (12 * h2)
    band[1, 1:] = -4 / (3 * h2)
    band[2] = 5 / (2 * h2) + v
    # ghost node beyond each wall by odd reflection, psi(x0 - h) = -psi(x0 + h);
    # exact to O(h^4) because psi and psi'' both vanish at a Dirichlet wall
    band[2, 0] -= 1 / (12 * h2)
    band[2, -1] -= 1 / (12 * h2)
    return band


def grid_spectrum(V: Callable, grid: GridSpec, levels: int,
                  targets: Sequence[float] | None = None) -> SpectrumReport:
    """Lowest ``levels`` eigenvalues of -d^2/dx^2 + V with Dirichlet ends."""
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if levels > grid.n_points:
        raise ValueError("more levels requested than grid points")
    x = grid.nodes()
    with np.errstate(over="raise", invalid="raise", divide="raise"):
        try:
            v = np.asarray(V(x), dtype=float)
        except FloatingPointError as exc:
            raise ValueError(f"potential overflows on the grid (x_min too small?): {exc}") from None
    if not np.all(np.isfinite(v)):
        raise ValueError("potential is not finite on the grid (x_min too small?)")
    band = _banded_hamiltonian(v, grid)
    try:
        ev = eig_banded(band, lower=False, eigvals_only=True, select="i",
                        select_range=(0, levels - 1), check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"banded eigensolver failed: {exc}") from exc
    ev = tuple(float(e) for e in np.sort(ev))
    if targets is None:
        return SpectrumReport(ev, (), grid)
    targets = tuple(float(t) for t in targets[:levels])
    abs_d = tuple(abs(e - t) for e, t in zip(ev, targets))
    rel_d = tuple(d / abs(t) if t else d for d, t in zip(abs_d, targets))
    return SpectrumReport(ev, targets, grid, abs_d, rel_d)


def chain_spectrum(chain: ChainSpec, levels: int, grid: GridSpec | None = None) -> SpectrumReport:
    """Spectrum of V^(chain) (or of V for the empty chain) against E_k = 2 k omega."""
    grid = grid or default_grid(chain.params, levels)
    V = extended_potential(chain) if chain.m else potential(chain.params)
    w = float(chain.omega)
    return grid_spectrum(V, grid, levels, [2 * k * w for k in range(levels)])


def convergence_orders(V: Callable, grid: GridSpec, levels: int, targets: Sequence[float],
                       refinements: int = 2) -> list[float]:
    """Observed order log2(err_N / err_2N) of the worst level, for successive halvings of h."""
    errs = []
    g = grid
    for _ in range(refinements + 1):
        errs.append(grid_spectrum(V, g, levels, targets).max_abs_delta)
        g = g.refined(2)
    return [math.log2(errs[j] / errs[j + 1]) for j in range(refinements)]


@dataclass(frozen=True)
class GramReport:
    matrix: np.ndarray
    relative: np.ndarray
    z_max: float
    exponent: float

    @property
    def max_offdiag(self) -> float:
        r = np.abs(self.relative.copy())
        np.fill_diagonal(r, 0.0)
        return float(r.max()) if r.size > 1 else 0.0

    def as_dict(self) -> dict:
        return {"gram": self.matrix.tolist(), "relative": self.relative.tolist(),
                "max_relative_offdiag": self.max_offdiag, "z_max": self.z_max,
                "weight_exponent": self.exponent}


def _root_bound(p: Poly) -> float:
    """Fujiwara's bound 2 max_k |c_{n-k} / c_n|^(1/k) on the moduli of the roots."""
    n = p.degree
    if n < 1:
        return 0.0
    lc = abs(float(p.lc))
    c = [abs(float(x)) for x in p.coeffs]
    terms = [(c[n - k] / lc) ** (1.0 / k) for k in range(1, n)]
    terms.append((c[0] / (2 * lc)) ** (1.0 / n))
    return 2 * max(terms)


def _choose_z_max(polys: list[Poly], weight, tol: float) -> float:
    """Z beyond which every diagonal integrand f = P^2 z^s e^{-z} / D^2 decays like e^{-z/2}.

    If every root of P and D has modulus below z/2 then |P'/P| <= 2 deg P / z
    and |D'/D| <= 2 deg D / z, so d log f / dz <= (s + 4 deg P + 4 deg D)/z - 1,
    which is <= -1/2 from z = 2 (s + 4 deg P + 4 deg D) on. The tail past Z is
    then at most 2 f(Z); Z grows until that is below 1e-2 * tol times the peak of
    f. Off-diagonal integrands are bounded pointwise by sqrt(f_jj f_kk).
    """
    s = max(float(weight.exponent), 0.0)
    D = weight.denominator
    deg = max(p.degree for p in polys) + max(D.degree, 0)
    z = max(20.0, 2 * (s + 4 * deg), *(2 * _root_bound(p) for p in polys + [D]))
    grid = np.linspace(1e-6, z, 2000)
    peaks = [float(np.max(np.exp(2 * np.log(np.abs(p.evaluate_float(grid)) + 1e-300)
                                  + weight.log_weight(grid)))) for p in polys]
    while True:
        tails = [2 * math.exp(2 * math.log(abs(float(p.evaluate_float(z))) + 1e-300)
                              + float(weight.log_weight(z))) for p in polys]
        if all(t <= 1e-2 * tol * pk for t, pk in zip(tails, peaks)):
            return z
        z *= 1.25


def orthogonality_matrix(chain: ChainSpec, levels: int, tol: float = 1e-12) -> GramReport:
    """Gram matrix of the eigenstate numerators P_0..P_{levels-1} under the chain weight.

    The integral over z in [0, Z_max] is taken in t = sqrt(z), which removes
    the fractional power at the origin: dz = 2 t dt.
    """
    from .admissibility import admissible

    if chain.m and not admissible(chain).admissible:
        raise ValueError(f"chain {chain.label()} is not admissible; the weight is not integrable")
    polys = [eigenstate_wronskian(chain, k).numerator_poly for k in range(levels)]
    weight = weight_function(chain)
    z_max = _choose_z_max(polys, weight, tol)
    iu = np.triu_indices(levels)

    def integrand(t):
        z = t * t
        if z == 0.0:
            return np.zeros(len(iu[0]))
        vals = np.array([p.evaluate_float(z) for p in polys])
        w = math.exp(float(weight.log_weight(z)))
        return 2 * t * w * (vals[iu[0]] * vals[iu[1]])

    res, _ = quad_vec(integrand, 0.0, math.sqrt(z_max), epsabs=0.0, epsrel=tol, limit=4000,
                      points=None)
    G = np.zeros((levels, levels))
    G[iu] = res
    G = G + np.triu(G, 1).T
    d = np.sqrt(np.abs(np.diag(G)))
    rel = G / np.outer(d, d)
    return GramReport(G, rel, z_max, float(weight.exponent))


def node_scan(fn, grid) -> int:
    """Strict sign changes of ``fn`` sampled on ``grid`` (exact zeros are skipped).

    ``fn`` is a GaugedFunction (sampled in x; the gauge is positive on x > 0)
    or a Poly (sampled in z). ``grid`` is a GridSpec or an array of points.
    """
    pts = grid.nodes() if isinstance(grid, GridSpec) else np.asarray(grid, dtype=float)
    if isinstance(fn, GaugedFunction):
        signs = fn.sign(pts)
    elif isinstance(fn, Poly):
        signs = np.sign(fn.evaluate_float(pts))
    else:
        signs = np.sign(np.asarray(fn(pts), dtype=float))
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))
