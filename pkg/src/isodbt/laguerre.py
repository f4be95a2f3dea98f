"""Generalized Laguerre polynomials with rational parameter, and the identities used
to simplify eigenstates of the extended potentials."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .exact import Poly, as_fraction

__all__ = [
    "LaguerreSpec", "laguerre_poly", "laguerre_recurrence", "laguerre_value_at_zero",
    "laguerre_shift", "IDENTITY_KINDS",
]


@dataclass(frozen=True)
class LaguerreSpec:
    n: int
    alpha: Fraction
    negate_arg: bool = False

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("Laguerre degree must be nonnegative")
        object.__setattr__(self, "alpha", as_fraction(self.alpha))

    def poly(self) -> Poly:
        return laguerre_poly(self.n, self.alpha, self.negate_arg)


def _pochhammer(x: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for j in range(k):
        out *= x + j
    return out


@lru_cache(maxsize=4096)
def _series(n: int, alpha: Fraction) -> Poly:
    # binom(n + alpha, n - k) = (alpha + k + 1)_{n-k} / (n - k)!
    coeffs = []
    for k in range(n + 1):
        c = _pochhammer(alpha + k + 1, n - k) / (factorial(n - k) * factorial(k))
        coeffs.append(-c if k & 1 else c)
    return Poly(coeffs)


def laguerre_poly(n: int, alpha, negate_arg: bool = False) -> Poly:
    """Exact coefficients of L_n^alpha(z), or of L_n^alpha(-z) with ``negate_arg``.

    Negative degrees give the zero polynomial, the convention that makes
    terms such as L_{n-1}^{alpha+1} vanish for n = 0.
    """
    if n < 0:
        return Poly()
    p = _series(n, as_fraction(alpha))
    return p.negate_var() if negate_arg else p


def laguerre_recurrence(n: int, alpha) -> Poly:
    """L_n^alpha from the three-term recurrence; an independent route to the series."""
    alpha = as_fraction(alpha)
    z = Poly.z()
    prev, cur = Poly(), Poly.constant(1)
    for k in range(n):
        # (k+1) L_{k+1} = (2k + 1 + alpha - z) L_k - (k + alpha) L_{k-1}
        nxt = (cur * (Poly.constant(2 * k + 1 + alpha) - z) - prev * (k + alpha)) * Fraction(1, k + 1)
        prev, cur = cur, nxt
    return cur


def laguerre_value_at_zero(n: int, alpha) -> Fraction:
    """(alpha + 1)_n / n!."""
    return _pochhammer(as_fraction(alpha) + 1, n) / factorial(n)


IDENTITY_KINDS = (
    "sum", "three-term", "derivative", "weighted-derivative",
    "power-derivative", "exp-derivative",
)


def laguerre_shift(kind: str, n: int, alpha) -> Poly:
    """LHS - RHS of a classical Laguerre identity; identically zero when it holds.

    sum                 L_n^a + L_{n-1}^{a+1} - L_n^{a+1}
    three-term          z L_{n-1}^{a+1} - a L_{n-1}^a + n L_n^{a-1}
    derivative          (L_n^a)' + L_{n-1}^{a+1}
    weighted-derivative (z^a e^-z L_n^a)' - (n+1) z^(a-1) e^-z L_{n+1}^(a-1), divided by z^(a-1) e^-z
    power-derivative    (z^a L_n^a)' - (n+a) z^(a-1) L_n^(a-1), divided by z^(a-1)
    exp-derivative      (e^-z L_n^a)' + e^-z L_n^(a+1), divided by e^-z
    """
    a = as_fraction(alpha)
    z = Poly.z()
    L = laguerre_poly
    if kind == "sum":
        return L(n, a) + L(n - 1, a + 1) - L(n, a + 1)
    if kind == "three-term":
        return z * L(n - 1, a + 1) - L(n - 1, a) * a + L(n, a - 1) * n
    if kind == "derivative":
        return L(n, a).deriv() + L(n - 1, a + 1)
    if kind == "weighted-derivative":
        p = L(n, a)
        return p * a - z * p + z * p.deriv() - L(n + 1, a - 1) * (n + 1)
    if kind == "power-derivative":
        p = L(n, a)
        return p * a + z * p.deriv() - L(n, a - 1) * (n + a)
    if kind == "exp-derivative":
        p = L(n, a)
        return p.deriv() - p + L(n, a + 1)
    raise ValueError(f"unknown identity kind {kind!r}; expected one of {IDENTITY_KINDS}")
