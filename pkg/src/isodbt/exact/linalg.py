"""Fraction-free determinants over exact rings."""

from __future__ import annotations

from typing import Callable, Sequence, TypeVar

T = TypeVar("T")

__all__ = ["bareiss_det", "field_det"]


def _exact_div(a, b):
    if hasattr(a, "exact_div"):
        return a.exact_div(b)
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError(f"{a} is not divisible by {b}")
        return q
    return a / b


def bareiss_det(matrix: Sequence[Sequence[T]], zero: T, one: T) -> T:
    """Determinant by Bareiss elimination; every division is exact in the ring.

    ``zero``/``one`` fix the ring (``Poly()``/``Poly.constant(1)`` for Q[z]).
    Row swaps pivot on the first nonzero entry in the column.
    """
    n = len(matrix)
    if n == 0:
        return one
    m = [list(row) for row in matrix]
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = one
    for k in range(n - 1):
        if not m[k][k]:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return zero
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = _exact_div(pivot * row_i[j] - mik * row_k[j], prev)
            row_i[k] = zero
        prev = pivot
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def field_det(matrix: Sequence[Sequence[T]], zero: T, one: T,
              is_zero: Callable[[T], bool] = lambda v: not v) -> T:
    """Gaussian elimination for entries in a field (e.g. rational functions)."""
    n = len(matrix)
    m = [list(row) for row in matrix]
    det = one
    for k in range(n):
        piv = next((r for r in range(k, n) if not is_zero(m[r][k])), None)
        if piv is None:
            return zero
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        pivot = m[k][k]
        det = det * pivot
        for i in range(k + 1, n):
            if is_zero(m[i][k]):
                continue
            f = m[i][k] / pivot
            for j in range(k + 1, n):
                m[i][j] = m[i][j] - f * m[k][j]
    return det
