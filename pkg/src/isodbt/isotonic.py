"""The isotonic oscillator V = omega^2 x^2/4 + a(a-1)/x^2 + V0 on the half-line.

Physical states, their RS functions, the discrete parameter symmetries and the
regularized (unphysical, nodeless) seed states built from them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import GaugedFunction, Poly, RationalFn, as_fraction
from .laguerre import laguerre_poly

__all__ = [
    "IsotonicParams", "IsotonicPotential", "RSRecord", "SeedState", "SymmetryImage",
    "ConstraintViolation", "parse_sign", "sign_symbol", "potential", "physical_energy",
    "physical_state", "rs_function", "gamma_apply", "seed_energy", "seed_function",
    "seed_state",
]


class ConstraintViolation(ValueError):
    """A seed or chain violates the parameter constraints (e.g. alpha <= n for a '-' seed)."""


def parse_sign(i) -> int:
    """Map '+', '-', '3' (or +1, -1, 3) to +1, -1, 3."""
    table = {"+": 1, "-": -1, "3": 3, 1: 1, -1: -1, 3: 3}
    try:
        return table[i]
    except (KeyError, TypeError):
        raise ValueError(f"unknown symmetry/sign {i!r}; expected '+', '-' or '3'") from None


def sign_symbol(i: int) -> str:
    return {1: "+", -1: "-", 3: "3"}[i]


@dataclass(frozen=True)
class IsotonicParams:
    omega: Fraction
    a: Fraction

    def __post_init__(self):
        omega, a = as_fraction(self.omega), as_fraction(self.a)
        if omega <= 0:
            raise ValueError(f"omega must be positive, got {omega}")
        if a < 1:
            raise ValueError(f"a must be >= 1, got {a}")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "a", a)

    @property
    def alpha(self) -> Fraction:
        return self.a - Fraction(1, 2)

    @property
    def V0(self) -> Fraction:
        return -self.omega * (self.a + Fraction(1, 2))

    def shifted(self, da=1) -> "IsotonicParams":
        return IsotonicParams(self.omega, self.a + as_fraction(da))

    def __str__(self) -> str:
        return f"(omega={self.omega}, a={self.a})"


@dataclass(frozen=True)
class IsotonicPotential:
    """omega^2 x^2/4 + centrifugal/x^2 + constant."""

    params: IsotonicParams

    @property
    def quadratic(self) -> Fraction:
        return self.params.omega ** 2 / 4

    @property
    def centrifugal(self) -> Fraction:
        a = self.params.a
        return a * (a - 1)

    @property
    def constant(self) -> Fraction:
        return self.params.V0

    def z_rational(self) -> RationalFn:
        """The same function written in z = omega x^2/2."""
        w = self.params.omega
        z = Poly.z()
        # omega z/2 + a(a-1) omega/(2z) + V0 = (omega z^2 + 2 V0 z + a(a-1) omega) / (2z)
        num = z * z * w + z * (2 * self.constant) + Poly.constant(self.centrifugal * w)
        return RationalFn(num, z * 2)

    def as_gauged(self) -> GaugedFunction:
        return GaugedFunction.from_z(self.z_rational(), self.params.omega)

    def __call__(self, x):
        import numpy as np
        x = np.asarray(x, dtype=float)
        return float(self.quadratic) * x ** 2 + float(self.centrifugal) / x ** 2 + float(self.constant)


def potential(params: IsotonicParams) -> IsotonicPotential:
    return IsotonicPotential(params)


def physical_energy(n: int, params: IsotonicParams) -> Fraction:
    return 2 * n * params.omega


def physical_state(n: int, params: IsotonicParams) -> GaugedFunction:
    """psi_n = x^a e^{-z/2} L_n^alpha(z)."""
    return GaugedFunction(params.a, Fraction(-1, 2), laguerre_poly(n, params.alpha), params.omega)


@dataclass(frozen=True)
class RSRecord:
    """w = w0 + rational part, each stored as a gauged function of x."""

    w0: GaugedFunction
    rational_part: GaugedFunction

    @property
    def total(self) -> GaugedFunction:
        return self.w0 + self.rational_part


def rs_function(n: int, params: IsotonicParams) -> RSRecord:
    """w_n = omega x/2 - a/x + omega x L_{n-1}^{alpha+1}(z) / L_n^alpha(z)."""
    if n < 0:
        raise ValueError("level index must be nonnegative")
    w, a, al = params.omega, params.a, params.alpha
    z = Poly.z()
    # omega x/2 - a/x = (z - a)/x
    w0 = GaugedFunction(-1, 0, z - a, w)
    if n == 0:
        return RSRecord(w0, GaugedFunction.zero(w))
    # omega x = 2z/x
    rational = GaugedFunction(-1, 0, RationalFn(z * 2 * laguerre_poly(n - 1, al + 1),
                                                laguerre_poly(n, al)), w)
    return RSRecord(w0, rational)


@dataclass(frozen=True)
class SymmetryImage:
    """Image of (omega, a) under a discrete symmetry, and the transformed level energy."""

    kind: int
    omega: Fraction
    a: Fraction
    potential_shift: Fraction
    energy: Fraction


def seed_energy(n: int, i, params: IsotonicParams) -> Fraction:
    i = parse_sign(i)
    w, a = params.omega, params.a
    if i == 3:
        return -2 * w * (n + 1)
    return -2 * w * (a + i * (n + Fraction(1, 2)))


def gamma_apply(i, params: IsotonicParams, n: int) -> SymmetryImage:
    """Gamma_+ : omega -> -omega, Gamma_- : a -> 1 - a, Gamma_3 = both.

    V(x; mapped) = V(x; omega, a) + U, so psi_n at the mapped parameters solves
    the original equation at energy E_n(mapped) - U.
    """
    i = parse_sign(i)
    w, a = params.omega, params.a
    if i == 1:
        image = (-w, a, w * (2 * a + 1))
    elif i == -1:
        image = (w, 1 - a, w * (2 * a - 1))
    else:
        image = (-w, 1 - a, 2 * w)
    omega_i, a_i, shift = image
    energy = 2 * n * omega_i - shift
    return SymmetryImage(i, omega_i, a_i, shift, energy)


def seed_function(n: int, i, params: IsotonicParams) -> GaugedFunction:
    """x^{i alpha + 1/2} e^{i z/2} L_n^{i alpha}(-i z), with no constraint check."""
    i = parse_sign(i)
    if i not in (1, -1):
        raise ValueError("only '+' and '-' seeds have a closed form here")
    al = params.alpha
    body = laguerre_poly(n, i * al, negate_arg=(i == 1))
    return GaugedFunction(i * al + Fraction(1, 2), Fraction(i, 2), body, params.omega)


@dataclass(frozen=True)
class SeedState:
    n: int
    i: int
    energy: Fraction
    fn: GaugedFunction

    @property
    def rs(self) -> GaugedFunction:
        return self.fn.rs_function()


def seed_state(n: int, i, params: IsotonicParams) -> SeedState:
    i = parse_sign(i)
    if n < 0:
        raise ValueError("seed index must be nonnegative")
    if i == 3:
        raise ConstraintViolation("Gamma_3 seeds give only quasi-isospectral extensions and are excluded")
    if i == -1 and not params.alpha > n:
        raise ConstraintViolation(
            f"'-' seed n={n} needs alpha = a - 1/2 > n; alpha = {params.alpha}")
    return SeedState(n, i, seed_energy(n, i, params), seed_function(n, i, params))
