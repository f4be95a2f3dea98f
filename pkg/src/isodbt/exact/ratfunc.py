"""Rational functions in z, kept in lowest terms with a monic denominator."""

from __future__ import annotations

from fractions import Fraction

from .polynomial import Poly, _q, poly_gcd

__all__ = ["RationalFn"]


class RationalFn:
    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, reduce: bool = True):
        if not isinstance(num, Poly):
            num = Poly.constant(num)
        if den is None:
            den = Poly.constant(1)
        elif not isinstance(den, Poly):
            den = Poly.constant(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = num, Poly.constant(1)
            return
        if reduce and den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
        lc = den.coeffs[-1]
        if lc != 1:
            inv = 1 / lc
            num, den = num.scale(inv), den.scale(inv)
        self.num, self.den = num, den

    @classmethod
    def from_poly(cls, p: Poly) -> "RationalFn":
        return cls(p)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.lc if self.num.coeffs else Fraction(0)

    def valuation(self) -> int:
        """Order of the zero (positive) or pole (negative) at z = 0."""
        return self.num.valuation() - self.den.valuation()

    def shift(self, k: int) -> "RationalFn":
        """Multiply by z**k (k may be negative)."""
        if k >= 0:
            reduce = not self.is_zero() and self.den.valuation() > 0
            return RationalFn(self.num.shift_up(k), self.den, reduce=reduce)
        k = -k
        if any(self.num.coeffs[:k]):
            return RationalFn(self.num, self.den.shift_up(k))
        return RationalFn(self.num.shift_down(k), self.den, reduce=False)

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> "RationalFn":
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, Poly):
            return RationalFn(other, reduce=False)
        return RationalFn(Poly._raw((_q(other),) if other else ()), reduce=False)

    def __add__(self, other) -> "RationalFn":
        other = self._coerce(other)
        if self.den == other.den:
            return RationalFn(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        if g.degree > 0:
            d1 = self.den.exact_div(g)
            d2 = other.den.exact_div(g)
            return RationalFn(self.num * d2 + other.num * d1, d1 * other.den)
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFn":
        return RationalFn(-self.num, self.den, reduce=False)

    def __sub__(self, other) -> "RationalFn":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RationalFn":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RationalFn":
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return RationalFn(Poly())
        # cross-cancel before multiplying keeps the result reduced
        g1 = poly_gcd(self.num, other.den) if other.den.degree > 0 else None
        g2 = poly_gcd(other.num, self.den) if self.den.degree > 0 else None
        n1, d2 = (self.num, other.den) if g1 is None or g1.degree <= 0 else (
            self.num.exact_div(g1), other.den.exact_div(g1))
        n2, d1 = (other.num, self.den) if g2 is None or g2.degree <= 0 else (
            other.num.exact_div(g2), self.den.exact_div(g2))
        return RationalFn(n1 * n2, d1 * d2, reduce=False)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFn":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RationalFn(self.den, self.num, reduce=False)

    def __truediv__(self, other) -> "RationalFn":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "RationalFn":
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "RationalFn":
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFn(self.num ** k, self.den ** k, reduce=False)

    def deriv(self) -> "RationalFn":
        """d/dz."""
        n, d = self.num, self.den
        if d.is_constant():
            return RationalFn(n.deriv(), d, reduce=False)
        return RationalFn(n.deriv() * d - n * d.deriv(), d * d)

    def negate_var(self) -> "RationalFn":
        return RationalFn(self.num.negate_var(), self.den.negate_var())

    def scale_var(self, s) -> "RationalFn":
        return RationalFn(self.num.scale_var(s), self.den.scale_var(s))

    def __call__(self, value):
        if isinstance(value, (Fraction, int)):
            return self.num(value) / self.den(value)
        return self.num.evaluate_float(value) / self.den.evaluate_float(value)

    # -- protocol --------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (RationalFn, Poly, int, Fraction)):
            other = self._coerce(other)
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("RationalFn", self.num, self.den))

    def __repr__(self) -> str:
        return f"RationalFn({self.num!r}, {self.den!r})"

    def __str__(self) -> str:
        if self.den == Poly.constant(1):
            return str(self.num)
        return f"({self.num}) / ({self.den})"
