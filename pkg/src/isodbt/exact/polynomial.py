"""Dense univariate polynomials over the rationals.

Coefficients are stored ascending (``coeffs[k]`` multiplies ``z**k``) as
GMP rationals (``gmpy2.mpq``), which compare and hash equal to the matching
:class:`fractions.Fraction`; scalars handed back to callers are Fractions.
Instances are immutable and hashable.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable

import numpy as np
from gmpy2 import gcd as _zgcd, lcm as _zlcm, mpq, mpz

__all__ = ["Poly", "poly_gcd", "as_fraction"]


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to an exact Fraction.

    Floats are refused: they would silently smuggle rounding into the exact
    core.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


_ZERO = mpq(0)


def _q(value) -> mpq:
    if type(value) is mpq:
        return value
    f = as_fraction(value)
    return mpq(f.numerator, f.denominator)


def _f(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def _strip(coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _strip([_q(c) for c in coeffs])
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: tuple[Fraction, ...]) -> "Poly":
        obj = cls.__new__(cls)
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def z(cls) -> "Poly":
        return cls((0, 1))

    # -- structure -------------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return _f(self.coeffs[-1]) if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def valuation(self) -> int:
        """Multiplicity of the root z = 0."""
        if not self.coeffs:
            raise ValueError("valuation of the zero polynomial")
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        raise AssertionError  # pragma: no cover

    def trailing_coeff(self) -> Fraction:
        return _f(self.coeffs[self.valuation()])

    def shift_down(self, k: int) -> "Poly":
        """Divide by z**k; the low coefficients must vanish."""
        if k < 0:
            raise ValueError("k must be nonnegative")
        if any(self.coeffs[:k]):
            raise ValueError(f"polynomial is not divisible by z^{k}")
        return Poly._raw(self.coeffs[k:])

    def shift_up(self, k: int) -> "Poly":
        if not self.coeffs or k == 0:
            return self
        return Poly._raw((_ZERO,) * k + self.coeffs)

    def _content_q(self) -> mpq:
        num, den = mpz(0), mpz(1)
        for c in self.coeffs:
            num = _zgcd(num, c.numerator)
            den = _zlcm(den, c.denominator)
        return mpq(num, den)

    def content(self) -> Fraction:
        """Positive rational c with self / c having coprime integer coefficients."""
        if not self.coeffs:
            return Fraction(0)
        return _f(self._content_q())

    def primitive(self) -> "Poly":
        """Integer-coefficient primitive part with positive leading coefficient."""
        if not self.coeffs:
            return self
        c = self._content_q()
        if self.coeffs[-1] < 0:
            c = -c
        if c == 1:
            return self
        inv = 1 / c
        return Poly._raw(tuple(x * inv for x in self.coeffs))

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        if lc == 1:
            return self
        inv = 1 / lc
        return Poly._raw(tuple(x * inv for x in self.coeffs))

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return Poly._raw(_strip(out))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = _q(c)
        if not c:
            return Poly._raw(())
        return Poly._raw(tuple(x * c for x in self.coeffs))

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw(())
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return Poly._raw(_strip(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        if len(rem) - 1 < db:
            return Poly._raw(()), self
        inv = 1 / other.lc
        bq = other.coeffs
        quo = [_ZERO] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if not c:
                continue
            c = c * inv
            quo[k - db] = c
            off = k - db
            for j in range(db + 1):
                rem[off + j] -= c * bq[j]
        return Poly._raw(_strip(quo)), Poly._raw(_strip(rem[:db]))

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    # -- calculus / substitution ----------------------------------------
    def deriv(self) -> "Poly":
        return Poly._raw(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def negate_var(self) -> "Poly":
        """p(-z), by flipping odd coefficients."""
        return Poly._raw(tuple(-c if k & 1 else c for k, c in enumerate(self.coeffs)))

    def scale_var(self, s) -> "Poly":
        """p(s z)."""
        s = _q(s)
        out = []
        f = mpq(1)
        for c in self.coeffs:
            out.append(c * f)
            f *= s
        return Poly._raw(_strip(out))

    def __call__(self, value):
        if isinstance(value, (Fraction, int, mpq)):
            value = _q(value)
            acc = _ZERO
            for c in reversed(self.coeffs):
                acc = acc * value + c
            return _f(acc)
        return self.evaluate_float(value)

    def evaluate_float(self, z):
        """Horner evaluation with coefficients converted to float at this point."""
        z = np.asarray(z, dtype=float)
        acc = np.zeros_like(z)
        for c in reversed(self.coeffs):
            acc = acc * z + float(c)
        return acc

    def sign_at_infinity(self) -> int:
        if not self.coeffs:
            return 0
        return 1 if self.lc > 0 else -1

    def sign_at(self, value) -> int:
        v = self(as_fraction(value))
        return (v > 0) - (v < 0)

    # -- protocol --------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, mpq)):
            return self.coeffs == Poly.constant(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("Poly", self.coeffs))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            elif mono:
                terms.append(f"({c})*{mono}" if c.denominator != 1 else f"{c}*{mono}")
            else:
                terms.append(str(c))
        return " + ".join(terms).replace("+ -", "- ")

    def to_list(self) -> list[Fraction]:
        return [_f(c) for c in self.coeffs]


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd via the Euclidean algorithm (primitive remainders keep sizes down)."""
    if a.is_zero() and b.is_zero():
        return Poly._raw(())
    a, b = a.primitive(), b.primitive()
    while not b.is_zero():
        a, b = b, (a % b).primitive()
    return a.monic()
