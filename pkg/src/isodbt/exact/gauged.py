"""Functions of the form x^p * exp(c z) * B(z) with z = omega x^2 / 2.

Every seed function, Wronskian, eigenstate, RS function and potential the
package manipulates lives in this class. Because x^2 = 2z/omega, a factor z^v
in the body is interchangeable with x^(2v); the canonical form pushes all such
factors into ``x_power`` so that ``body`` has neither a zero nor a pole at
z = 0. Canonical forms are unique, so ``==`` is exact functional equality.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .linalg import bareiss_det
from .polynomial import Poly, as_fraction, poly_gcd
from .ratfunc import RationalFn

__all__ = ["GaugedFunction", "differentiate", "wronskian", "GaugeMismatch",
           "schrodinger_numerator"]


class GaugeMismatch(ValueError):
    """Raised when two gauged functions cannot be added in closed form."""


class GaugedFunction:
    __slots__ = ("x_power", "exp_coeff", "body", "omega")

    def __init__(self, x_power, exp_coeff, body, omega):
        omega = as_fraction(omega)
        if omega == 0:
            raise ValueError("omega must be nonzero")
        if isinstance(body, Poly):
            body = RationalFn(body)
        elif not isinstance(body, RationalFn):
            body = RationalFn(Poly.constant(as_fraction(body)))
        x_power = as_fraction(x_power)
        exp_coeff = as_fraction(exp_coeff)
        if body.is_zero():
            x_power = exp_coeff = Fraction(0)
        else:
            v = body.valuation()
            if v:
                body = body.shift(-v) * ((omega / 2) ** v)
                x_power += 2 * v
        self.x_power = x_power
        self.exp_coeff = exp_coeff
        self.body = body
        self.omega = omega

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, omega) -> "GaugedFunction":
        return cls(0, 0, Poly(), omega)

    @classmethod
    def constant(cls, value, omega) -> "GaugedFunction":
        return cls(0, 0, Poly.constant(value), omega)

    @classmethod
    def from_z(cls, body, omega) -> "GaugedFunction":
        """A plain function of z (x_power 0, no exponential)."""
        return cls(0, 0, body, omega)

    # -- predicates --------------------------------------------------------
    def is_zero(self) -> bool:
        return self.body.is_zero()

    def is_constant(self) -> bool:
        return self.is_zero() or (
            self.x_power == 0 and self.exp_coeff == 0 and self.body.is_constant())

    def _check(self, other: "GaugedFunction") -> None:
        if self.omega != other.omega:
            raise ValueError("gauged functions built with different omega")

    # -- algebra -----------------------------------------------------------
    def _lift(self, other) -> "GaugedFunction":
        if isinstance(other, GaugedFunction):
            self._check(other)
            return other
        return GaugedFunction.constant(as_fraction(other), self.omega)

    def __mul__(self, other) -> "GaugedFunction":
        if not isinstance(other, GaugedFunction):
            return GaugedFunction(self.x_power, self.exp_coeff,
                                  self.body * as_fraction(other), self.omega)
        self._check(other)
        return GaugedFunction(self.x_power + other.x_power,
                              self.exp_coeff + other.exp_coeff,
                              self.body * other.body, self.omega)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "GaugedFunction":
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return GaugedFunction(self.x_power - other.x_power,
                              self.exp_coeff - other.exp_coeff,
                              self.body / other.body, self.omega)

    def __rtruediv__(self, other) -> "GaugedFunction":
        return self._lift(other) / self

    def __pow__(self, k: int) -> "GaugedFunction":
        if k < 0:
            return GaugedFunction.constant(1, self.omega) / (self ** (-k))
        return GaugedFunction(self.x_power * k, self.exp_coeff * k,
                              self.body ** k, self.omega)

    def __neg__(self) -> "GaugedFunction":
        return GaugedFunction(self.x_power, self.exp_coeff, -self.body, self.omega)

    def __add__(self, other) -> "GaugedFunction":
        other = self._lift(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.exp_coeff != other.exp_coeff:
            raise GaugeMismatch("exponential gauges differ")
        dp = other.x_power - self.x_power
        if dp.denominator != 1 or dp.numerator % 2:
            raise GaugeMismatch(f"x powers differ by {dp}, not an even integer")
        k = dp.numerator // 2
        # x^(2k) = (2 z / omega)^k
        factor = (2 / self.omega) ** k
        if k >= 0:
            body = self.body + other.body.shift(k) * factor
            return GaugedFunction(self.x_power, self.exp_coeff, body, self.omega)
        body = self.body.shift(-k) * (1 / factor) + other.body
        return GaugedFunction(other.x_power, self.exp_coeff, body, self.omega)

    __radd__ = __add__

    def __sub__(self, other) -> "GaugedFunction":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "GaugedFunction":
        return self._lift(other) - self

    # -- calculus ------------------------------------------------------------
    def differentiate(self) -> "GaugedFunction":
        return differentiate(self)

    def log_derivative(self) -> "GaugedFunction":
        """f'/f."""
        return self.differentiate() / self

    def rs_function(self) -> "GaugedFunction":
        """The Riccati-Schroedinger function -f'/f."""
        return -self.log_derivative()

    # -- comparisons -----------------------------------------------------------
    def ratio_constant(self, other: "GaugedFunction") -> Fraction | None:
        """c with self == c * other, or None if they are not proportional."""
        self._check(other)
        if other.is_zero():
            return None
        q = self / other
        if q.is_zero():
            return Fraction(0)
        if q.x_power == 0 and q.exp_coeff == 0 and q.body.is_constant():
            return q.body.constant_value()
        return None

    def is_proportional_to(self, other: "GaugedFunction") -> bool:
        c = self.ratio_constant(other)
        return c is not None and c != 0

    def as_z_rational(self) -> RationalFn:
        """Express as a rational function of z; needs no exponential and an even x power."""
        if self.is_zero():
            return RationalFn(Poly())
        if self.exp_coeff != 0:
            raise GaugeMismatch("function carries an exponential factor")
        p = self.x_power
        if p.denominator != 1 or p.numerator % 2:
            raise GaugeMismatch(f"x power {p} is not an even integer")
        k = p.numerator // 2
        return self.body.shift(k) * ((2 / self.omega) ** k)

    # -- numerics --------------------------------------------------------------
    def z_of(self, x):
        return float(self.omega) * np.asarray(x, dtype=float) ** 2 / 2

    def evaluate(self, x):
        """Float values on x > 0 (exact coefficients are converted here)."""
        x = np.asarray(x, dtype=float)
        z = self.z_of(x)
        log_gauge = float(self.x_power) * np.log(x) + float(self.exp_coeff) * z
        return np.exp(log_gauge) * self.body(z)

    def sign(self, x):
        """Sign on x > 0 without forming the (possibly overflowing) gauge."""
        return np.sign(self.body(self.z_of(x)))

    # -- protocol --------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, GaugedFunction):
            return NotImplemented
        return (self.omega == other.omega and self.x_power == other.x_power
                and self.exp_coeff == other.exp_coeff and self.body == other.body)

    def __hash__(self) -> int:
        return hash((self.x_power, self.exp_coeff, self.body, self.omega))

    def __repr__(self) -> str:
        return (f"GaugedFunction(x^{self.x_power} * exp({self.exp_coeff} z) * "
                f"[{self.body}], omega={self.omega})")


def _raw_derivative(p: Fraction, c: Fraction, body: RationalFn) -> RationalFn:
    """Body of d/dx[x^p e^{cz} B(z)], whose x power is p - 1.

    dz/dx = omega x = 2z/x, hence the bracket p B + 2 c z B + 2 z B'.
    """
    zpoly = Poly.z()
    return body * p + body * (zpoly * (2 * c)) + body.deriv() * (zpoly * 2)


def differentiate(f: GaugedFunction) -> GaugedFunction:
    if f.is_zero():
        return f
    return GaugedFunction(f.x_power - 1, f.exp_coeff,
                          _raw_derivative(f.x_power, f.exp_coeff, f.body), f.omega)


def schrodinger_numerator(f: GaugedFunction, energy, V: GaugedFunction) -> Poly:
    """Polynomial that vanishes identically iff f'' + (energy - V) f = 0.

    With f = x^p e^{cz} N/D every denominator is cleared by hand, so no gcd is
    ever taken. For body N/D the x-derivative has body
    N1/D^2 with N1 = (pN + 2czN + 2zN')D - 2zND', and differentiating once more
    gives N2/D^3 with N2 = ((p-1)N1 + 2czN1)D + 2z(N1'D - 2N1D').
    Multiplying the residual by D^3 Vd (V = Vn/Vd in z) and using x^2 = 2z/omega:
    N2 Vd + (E Vd - Vn)(2z/omega) N D^2.
    """
    if f.is_zero():
        return Poly()
    f._check(V)
    E = as_fraction(energy)
    p, c, w = f.x_power, f.exp_coeff, f.omega
    N, D = f.body.num, f.body.den
    z = Poly.z()
    Dp = D.deriv()
    N1 = (N * p + z * N * (2 * c) + z * N.deriv() * 2) * D - z * N * Dp * 2
    N2 = (N1 * (p - 1) + z * N1 * (2 * c)) * D + z * (N1.deriv() * D - N1 * Dp * 2) * 2
    Vz = V.as_z_rational()
    Vn, Vd = Vz.num, Vz.den
    return N2 * Vd + (Vd * E - Vn) * z * N * D * D * (2 / w)


def wronskian(fs: Sequence[GaugedFunction]) -> GaugedFunction:
    """Exact Wronskian determinant with respect to x.

    Row r of column j is x^(p_j - r) e^(c_j z) B_{j,r}(z), so the gauge
    x^(sum p - m(m-1)/2) e^(sum c z) factors out of the determinant; the
    remaining body matrix is cleared of denominators column by column and
    reduced by Bareiss elimination over Q[z].
    """
    fs = list(fs)
    if not fs:
        raise ValueError("wronskian of an empty list")
    omega = fs[0].omega
    for f in fs[1:]:
        fs[0]._check(f)
    m = len(fs)
    columns: list[list[Poly]] = []
    den_product = Poly.constant(1)
    for f in fs:
        p, c = f.x_power, f.exp_coeff
        if f.body.is_polynomial():
            # constant denominators stay out of the loop; no gcd is needed
            col = [f.body.num]
            for _ in range(m - 1):
                col.append(_poly_derivative(p, c, col[-1]))
                p -= 1
            den_product = den_product * f.body.den
            columns.append(col)
            continue
        bodies = [f.body]
        for _ in range(m - 1):
            bodies.append(_raw_derivative(p, c, bodies[-1]))
            p -= 1
        common = Poly.constant(1)
        for b in bodies:
            if not b.den.is_constant():
                common = common * b.den.exact_div(_gcd_or_one(common, b.den))
        den_product = den_product * common
        columns.append([(b * common).num if not b.is_zero() else Poly() for b in bodies])
    matrix = [[columns[j][r] for j in range(m)] for r in range(m)]
    det = bareiss_det(matrix, Poly(), Poly.constant(1))
    x_power = sum((f.x_power for f in fs), Fraction(0)) - Fraction(m * (m - 1), 2)
    exp_coeff = sum((f.exp_coeff for f in fs), Fraction(0))
    return GaugedFunction(x_power, exp_coeff, RationalFn(det, den_product), omega)


def _poly_derivative(p: Fraction, c: Fraction, N: Poly) -> Poly:
    z = Poly.z()
    return N * p + z * N * (2 * c) + z * N.deriv() * 2


def _gcd_or_one(a: Poly, b: Poly) -> Poly:
    return poly_gcd(a, b) if a.degree > 0 else Poly.constant(1)
