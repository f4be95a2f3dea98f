"""Single and multistep Darboux-Baecklund transformations of the isotonic oscillator.

A chain is an ordered list of seeds (n_j, i_j), i_j in {+1, -1}. The extended
potential is V - 2 (log W)'' with W the Wronskian of the seed functions, and
the eigenstates are Wronskian ratios. Three independent routes to the
eigenstates are provided (iterated DBT, Wronskian ratio, closed determinants)
so that each can be checked against the others.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .exact import (GaugedFunction, Poly, RationalFn, as_fraction, bareiss_det,
                    field_det, schrodinger_numerator, wronskian)
from .isotonic import (ConstraintViolation, IsotonicParams, RSRecord, SeedState,
                       parse_sign, physical_energy, physical_state, potential,
                       seed_state, sign_symbol)
from .laguerre import laguerre_poly

__all__ = [
    "transported_rs", "ChainSpec", "ExtendedPotential", "ExtendedEigenstate", "WeightFunction",
    "DegenerateChain", "dbt_step", "transport_chain", "extended_potential",
    "eigenstate_iterated", "eigenstate_wronskian", "eigenstate_determinant",
    "determinant_matrices", "elp_one_step", "elp_one_step_uncorrected", "weight_function",
    "crum_krein_delta", "canonical_pair",
]


class DegenerateChain(ValueError):
    """The seed Wronskian vanishes identically (dependent seeds)."""


def _as_step(step) -> tuple[int, int]:
    if isinstance(step, str):
        step = (step[:-1], step[-1])
    n, i = step
    if isinstance(n, str):
        n = n.strip()
        if not n.isdigit():
            raise ValueError(f"seed index {n!r} is not a nonnegative integer")
        n = int(n)
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError(f"seed index must be a nonnegative integer, got {n!r}")
    return int(n), parse_sign(i)


@dataclass(frozen=True)
class ChainSpec:
    """Ordered seeds (n_j, i_j) together with the base parameters."""

    steps: tuple
    params: IsotonicParams

    def __post_init__(self):
        steps = tuple(_as_step(s) for s in self.steps)
        seen = set()
        for n, i in steps:
            if i == 3:
                raise ConstraintViolation("Gamma_3 seeds are excluded from chains")
            if (n, i) in seen:
                raise ConstraintViolation(
                    f"duplicate seed {n}{sign_symbol(i)}: the Wronskian vanishes identically")
            seen.add((n, i))
        object.__setattr__(self, "steps", steps)
        # builds every seed, raising ConstraintViolation for alpha <= n on '-' steps
        object.__setattr__(self, "_seeds", tuple(seed_state(n, i, self.params) for n, i in steps))

    @classmethod
    def build(cls, steps: Iterable, omega=1, a=2) -> "ChainSpec":
        return cls(tuple(steps), IsotonicParams(omega, a))

    @property
    def seeds(self) -> tuple[SeedState, ...]:
        return self._seeds

    @property
    def m(self) -> int:
        return len(self.steps)

    @property
    def q_plus(self) -> int:
        return sum(1 for _, i in self.steps if i == 1)

    @property
    def q_minus(self) -> int:
        return self.m - self.q_plus

    @property
    def q(self) -> int:
        return self.q_plus - self.q_minus

    @property
    def omega(self) -> Fraction:
        return self.params.omega

    def prefix(self, length: int) -> "ChainSpec":
        return ChainSpec(self.steps[:length], self.params)

    def reordered(self) -> "ChainSpec":
        """'+' steps first, each group in its original order."""
        plus = [s for s in self.steps if s[1] == 1]
        minus = [s for s in self.steps if s[1] == -1]
        return ChainSpec(tuple(plus + minus), self.params)

    def with_params(self, params: IsotonicParams) -> "ChainSpec":
        return ChainSpec(self.steps, params)

    def label(self) -> str:
        return ",".join(f"{n}{sign_symbol(i)}" for n, i in self.steps) or "(empty)"

    def __str__(self) -> str:
        return f"[{self.label()}] {self.params}"


def _total(rs) -> GaugedFunction:
    return rs.total if isinstance(rs, RSRecord) else rs


def dbt_step(source_rs, seed_rs, seed_energy, target_energy) -> GaugedFunction:
    """w_lambda -> -w_nu + (E_lambda - E_nu) / (w_nu - w_lambda).

    The result solves the Riccati equation of V + 2 w_nu' at energy E_lambda.
    """
    w_lam, w_nu = _total(source_rs), _total(seed_rs)
    e_nu, e_lam = as_fraction(seed_energy), as_fraction(target_energy)
    if e_nu == e_lam:
        raise ValueError("seed and target energies coincide")
    diff = w_nu - w_lam
    if diff.is_zero():
        raise ZeroDivisionError("source and seed RS functions coincide")
    return -w_nu + (e_lam - e_nu) / diff


@lru_cache(maxsize=2048)
def _transport_steps(chain: ChainSpec) -> tuple[GaugedFunction, ...]:
    return tuple(transport_chain(chain)[0])


def transport_chain(chain: ChainSpec, extra: Sequence[tuple[GaugedFunction, Fraction]] = ()
                    ) -> tuple[list[GaugedFunction], list[GaugedFunction]]:
    """Push every seed RS function (and ``extra`` (rs, energy) pairs) through the chain.

    Returns (step_rs, extra_rs): step_rs[j] is the RS function of seed j after
    the first j transformations, i.e. the function whose derivative step j adds
    to the potential; extra_rs holds the images of ``extra`` after all steps.
    """
    current = [(s.rs, s.energy) for s in chain.seeds]
    tail = [(_total(rs), as_fraction(e)) for rs, e in extra]
    steps = []
    while current:
        (v, e), rest = current[0], current[1:]
        steps.append(v)
        current = [(dbt_step(w, v, e, el), el) for w, el in rest]
        tail = [(dbt_step(w, v, e, el), el) for w, el in tail]
    return steps, [w for w, _ in tail]


def transported_rs(chain: ChainSpec) -> tuple[GaugedFunction, ...]:
    """Memoized step RS functions of ``transport_chain``."""
    return _transport_steps(chain)


def canonical_pair(body: RationalFn) -> tuple[Poly, Poly]:
    """Numerator and denominator scaled to integer primitive form, positive leading terms."""
    return body.num.primitive(), body.den.primitive()


@dataclass(frozen=True)
class ExtendedPotential:
    """V^(chain) = V - 2 (log W)'' with the seed Wronskian W = x^p e^{cz} D(z).

    Each step adds 2 v' with v = -(log phi)', so the Crum sum carries a minus sign.
    """

    chain: ChainSpec
    W: GaugedFunction
    D: Poly
    correction: GaugedFunction
    iterated_correction: GaugedFunction = field(repr=False)

    @property
    def params(self) -> IsotonicParams:
        return self.chain.params

    @cached_property
    def closed_form(self) -> GaugedFunction:
        return potential(self.params).as_gauged() + self.correction

    @cached_property
    def iterated_form(self) -> GaugedFunction:
        return potential(self.params).as_gauged() + self.iterated_correction

    @property
    def forms_agree(self) -> bool:
        return self.correction == self.iterated_correction

    def z_rational(self) -> RationalFn:
        return self.closed_form.as_z_rational()

    def correction_z(self) -> RationalFn:
        return self.correction.as_z_rational()

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return potential(self.params)(x) + self.correction.evaluate(x)


def _seed_wronskian(chain: ChainSpec) -> GaugedFunction:
    if not chain.m:
        return GaugedFunction.constant(1, chain.omega)
    W = wronskian([s.fn for s in chain.seeds])
    if W.is_zero():
        raise DegenerateChain(f"Wronskian of {chain.label()} vanishes identically")
    return W


@lru_cache(maxsize=2048)
def extended_potential(chain: ChainSpec) -> ExtendedPotential:
    """Crum and iterated forms of the extension; results are immutable and memoized."""
    W = _seed_wronskian(chain)
    if not W.body.is_polynomial():
        raise AssertionError("seed Wronskian should have a polynomial body")
    correction = W.log_derivative().differentiate() * -2
    iterated = GaugedFunction.zero(chain.omega)
    for v in _transport_steps(chain):
        iterated = iterated + v.differentiate() * 2
    return ExtendedPotential(chain, W, W.body.num.primitive(), correction, iterated)


@dataclass(frozen=True)
class ExtendedEigenstate:
    """psi_k of V^(chain): x^{a+q} e^{-z/2} numerator(z) / D(z), up to a constant."""

    chain: ChainSpec
    k: int
    fn: GaugedFunction
    numerator_poly: Poly
    denominator: Poly

    @property
    def energy(self) -> Fraction:
        return physical_energy(self.k, self.chain.params)

    def schrodinger_residual(self, V: ExtendedPotential | None = None) -> GaugedFunction:
        V = V or extended_potential(self.chain)
        f = self.fn
        return f.differentiate().differentiate() + (self.energy - V.closed_form) * f

    def satisfies_schrodinger(self, V: ExtendedPotential | None = None) -> bool:
        """Exact check of the residual through the cleared polynomial form."""
        V = V or extended_potential(self.chain)
        return schrodinger_numerator(self.fn, self.energy, V.closed_form).is_zero()

    def is_proportional_to(self, other: "ExtendedEigenstate | GaugedFunction") -> bool:
        g = other.fn if isinstance(other, ExtendedEigenstate) else other
        return self.fn.is_proportional_to(g)


def _canonical_eigenstate(chain: ChainSpec, k: int, fn: GaugedFunction) -> ExtendedEigenstate:
    if fn.is_zero():
        raise DegenerateChain(f"eigenstate {k} of {chain.label()} vanishes identically")
    gauge = chain.params.a + chain.q
    if fn.x_power != gauge or fn.exp_coeff != Fraction(-1, 2):
        raise AssertionError(
            f"eigenstate gauge x^{fn.x_power} e^({fn.exp_coeff} z), expected x^{gauge} e^(-z/2)")
    num, den = canonical_pair(fn.body)
    return ExtendedEigenstate(chain, k, GaugedFunction(gauge, Fraction(-1, 2),
                                                       RationalFn(num, den), chain.omega),
                              num, den)


@lru_cache(maxsize=8192)
def eigenstate_wronskian(chain: ChainSpec, k: int) -> ExtendedEigenstate:
    """W(phi_1, ..., phi_m, psi_k) / W(phi_1, ..., phi_m)."""
    if k < 0:
        raise ValueError("level index must be nonnegative")
    psi = physical_state(k, chain.params)
    if not chain.m:
        return _canonical_eigenstate(chain, k, psi)
    fns = [s.fn for s in chain.seeds]
    return _canonical_eigenstate(chain, k, wronskian(fns + [psi]) / _seed_wronskian(chain))


def eigenstate_iterated(chain: ChainSpec, k: int) -> ExtendedEigenstate:
    """Apply A(v) = d/dx + v step by step, v the transported seed RS function."""
    psi = physical_state(k, chain.params)
    for v in _transport_steps(chain):
        psi = psi.differentiate() + v * psi
    return _canonical_eigenstate(chain, k, psi)


def _rising(x: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for j in range(k):
        out *= x + j
    return out


def determinant_matrices(chain: ChainSpec, k: int) -> tuple[list[list[Poly]], list[list[Poly]]]:
    """The (m+1)x(m+1) matrix Psi_k and the m x m matrix Phi of the closed formulas.

    Columns are the '+' seeds, then the '-' seeds (then psi_k for Psi); rows
    are indexed r = 1.. as in the closed formulas.
    """
    ordered = chain.reordered()
    al = chain.params.alpha
    ns = [n for n, _ in ordered.steps]
    qp, m = ordered.q_plus, ordered.m
    L = laguerre_poly

    def zpow(e: int) -> Poly:
        return Poly.monomial(e) if e else Poly.constant(1)

    def psi_entry(r: int, j: int) -> Poly:
        if j <= qp:
            return L(ns[j - 1], al + r - 1, negate_arg=True)
        if j <= m:
            n = ns[j - 1]
            return zpow(m - r + 1) * L(n, -al - r + 1) * _rising(n - al - r + 2, r - 1)
        c = 1 if (r - 1) % 2 == 0 else -1
        return L(k - r + 1, al + r - 1) * c

    def phi_entry(r: int, j: int) -> Poly:
        n = ns[j - 1]
        if j <= qp:
            return L(n - r + 1, al + r - 1, negate_arg=True)
        return zpow(m - r + 1) * L(n + r - 1, -al - r + 1) * _rising(Fraction(n + 1), r - 1)

    Psi = [[psi_entry(r, j) for j in range(1, m + 2)] for r in range(1, m + 2)]
    Phi = [[phi_entry(r, j) for j in range(1, m + 1)] for r in range(1, m + 1)]
    return Psi, Phi


def eigenstate_determinant(chain: ChainSpec, k: int) -> ExtendedEigenstate:
    """x^{a+q} e^{-z/2} det Psi_k / det Phi, with z^{q_-} divided out of det Phi."""
    if k < 0:
        raise ValueError("level index must be nonnegative")
    Psi, Phi = determinant_matrices(chain, k)
    one, zero = Poly.constant(1), Poly()
    num = bareiss_det(Psi, zero, one)
    den = bareiss_det(Phi, zero, one)
    if den.is_zero():
        raise DegenerateChain(f"det Phi of {chain.label()} vanishes identically")
    qm = chain.q_minus
    if den.valuation() < qm:
        raise AssertionError(f"det Phi not divisible by z^{qm}")
    den = den.shift_down(qm)
    fn = GaugedFunction(chain.params.a + chain.q, Fraction(-1, 2), RationalFn(num, den), chain.omega)
    return _canonical_eigenstate(chain, k, fn)


def elp_one_step(series, n: int, k: int, alpha) -> Poly:
    """L^+_{n,k,alpha} (series '+' / 'L1') or L^-_{n,k,alpha} (series '-' / 'L2').

    L^+ = L_n^a(-z) L_k^{a+1}(z) + L_{n-1}^{a+1}(-z) L_k^a(z)
    L^- = (k - n + a) L_k^a L_n^{-a} - (a - n) L_k^a L_{n-1}^{-a} - (k + a) L_{k-1}^a L_n^{-a}
    """
    i = _series_sign(series)
    al = as_fraction(alpha)
    if n < 0 or k < 0:
        raise ValueError("indices must be nonnegative")
    L = laguerre_poly
    if i == 1:
        return (L(n, al, negate_arg=True) * L(k, al + 1)
                + L(n - 1, al + 1, negate_arg=True) * L(k, al))
    if not al > n:
        raise ConstraintViolation(f"L2 series needs alpha > n; alpha = {al}, n = {n}")
    return (L(k, al) * L(n, -al) * (k - n + al) - L(k, al) * L(n - 1, -al) * (al - n)
            - L(k - 1, al) * L(n, -al) * (k + al))


def elp_one_step_uncorrected(n: int, k: int, alpha) -> Poly:
    """L^- with first coefficient (k + n + alpha), a quoted variant that is not an eigenstate."""
    al = as_fraction(alpha)
    L = laguerre_poly
    return (L(k, al) * L(n, -al) * (k + n + al) - L(k, al) * L(n - 1, -al) * (al - n)
            - L(k - 1, al) * L(n, -al) * (k + al))


def _series_sign(series) -> int:
    table = {"L1": 1, "L2": -1}
    if series in table:
        return table[series]
    i = parse_sign(series)
    if i == 3:
        raise ValueError("the L3 series is not supported")
    return i


@dataclass(frozen=True)
class WeightFunction:
    """z^exponent e^{-z} / denominator(z)^2."""

    exponent: Fraction
    denominator: Poly

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        d = self.denominator.evaluate_float(z)
        return z ** float(self.exponent) * np.exp(-z) / d ** 2

    def log_weight(self, z):
        z = np.asarray(z, dtype=float)
        d = self.denominator.evaluate_float(z)
        return float(self.exponent) * np.log(z) - z - 2 * np.log(np.abs(d))


def weight_function(chain: ChainSpec) -> WeightFunction:
    """Orthogonality weight of the eigenstate numerators, z^{alpha+q} e^{-z} / D^2.

    From |psi_k|^2 dx with psi_k = x^{a+q} e^{-z/2} P_k / D and dx = dz / (omega x):
    x^{2(a+q)-1} is proportional to z^{a+q-1/2} = z^{alpha+q}.
    """
    D = extended_potential(chain).D if chain.m else Poly.constant(1)
    return WeightFunction(chain.params.alpha + chain.q, D)


def crum_krein_delta(chain: ChainSpec) -> GaugedFunction:
    """Delta with W(phi_1..phi_m) = Delta * prod phi_j.

    Using phi'' = (V - E) phi, row operations reduce the Wronskian matrix to
    column j = phi_j * ((-E_j)^s, (-E_j)^s (-w_j)) for rows 2s and 2s+1.
    """
    omega = chain.omega
    m = chain.m
    if not m:
        return GaugedFunction.constant(1, omega)
    cols = []
    for s in chain.seeds:
        col = []
        for r in range(m):
            e = (-s.energy) ** (r // 2)
            col.append(GaugedFunction.constant(e, omega) if r % 2 == 0 else s.rs * (-e))
        cols.append(col)
    matrix = [[cols[j][r] for j in range(m)] for r in range(m)]
    return field_det(matrix, GaugedFunction.zero(omega), GaugedFunction.constant(1, omega),
                     lambda f: f.is_zero())
