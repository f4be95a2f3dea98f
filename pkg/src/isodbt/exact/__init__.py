"""Exact arithmetic substrate: polynomials, rational functions and gauged functions in z."""

from .gauged import (GaugedFunction, GaugeMismatch, differentiate, schrodinger_numerator,
                     wronskian)
from .linalg import bareiss_det, field_det
from .polynomial import Poly, as_fraction, poly_gcd
from .ratfunc import RationalFn
from .sturm import sturm_count, sturm_sequence

__all__ = [
    "GaugedFunction", "GaugeMismatch", "Poly", "RationalFn", "as_fraction",
    "bareiss_det", "differentiate", "field_det", "poly_gcd", "poly_arith",
    "schrodinger_numerator", "sturm_count", "sturm_sequence", "wronskian",
]


def poly_arith(a: Poly, b: Poly, op: str):
    """Dispatch table over the basic polynomial operations.

    ``op`` is one of add, sub, mul, divmod, gcd; gcd is returned monic.
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "divmod":
        return divmod(a, b)
    if op == "gcd":
        return poly_gcd(a, b)
    raise ValueError(f"unknown polynomial operation {op!r}")
