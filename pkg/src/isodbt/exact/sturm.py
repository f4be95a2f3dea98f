"""Exact real-root counting with Sturm sequences."""

from __future__ import annotations

import math
from fractions import Fraction

from .polynomial import Poly, as_fraction

__all__ = ["sturm_sequence", "sturm_count", "sign_variations"]


def sturm_sequence(p: Poly) -> list[Poly]:
    """p, p', then negated remainders until the remainder vanishes.

    Members are rescaled to primitive form (positive factors only), which
    leaves every sign pattern unchanged.
    """
    if p.is_zero():
        raise ValueError("Sturm sequence of the zero polynomial")
    seq = [p, p.deriv()]
    while not seq[-1].is_zero():
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        seq.append(r.scale(1 / r.content()))
    if seq[-1].is_zero():
        seq.pop()
    return seq


def _sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def sign_variations(signs) -> int:
    nonzero = [s for s in signs if s]
    return sum(1 for a, b in zip(nonzero, nonzero[1:]) if a != b)


def _signs_at(seq: list[Poly], point) -> list[int]:
    if point == math.inf:
        return [q.sign_at_infinity() for q in seq]
    if point == -math.inf:
        return [q.sign_at_infinity() * (-1) ** q.degree for q in seq]
    return [_sign(q(point)) for q in seq]


def sturm_count(p: Poly, interval=(0, math.inf)) -> int:
    """Number of distinct real roots of p in the open interval (lo, hi).

    Endpoints are exact rationals (or ``"p/q"`` strings) or +/- infinity.
    The sequence is built from the squarefree part of p, for which
    V(lo) - V(hi) counts the roots in (lo, hi] even when lo is a root; a root
    sitting at hi is then removed.
    """
    if p.is_zero():
        raise ValueError("sturm_count of the zero polynomial")
    lo, hi = interval
    lo = lo if lo in (math.inf, -math.inf) else as_fraction(lo)
    hi = hi if hi in (math.inf, -math.inf) else as_fraction(hi)
    if not lo < hi:
        raise ValueError("empty interval")
    if p.degree <= 0:
        return 0
    seq = sturm_sequence(p)
    if seq[-1].degree > 0:
        seq = sturm_sequence(p.exact_div(seq[-1]))
    count = sign_variations(_signs_at(seq, lo)) - sign_variations(_signs_at(seq, hi))
    if hi != math.inf and p(hi) == 0:
        count -= 1
    return count
