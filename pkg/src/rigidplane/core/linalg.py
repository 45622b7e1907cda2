"""Exact linear algebra over Q by fraction-free (Bareiss) elimination."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence[int | Fraction]]


def _integer_rows(m: Matrix) -> list[list[int]]:
    rows = []
    for row in m:
        row = [Fraction(x) for x in row]
        den = math.lcm(*(x.denominator for x in row)) if row else 1
        rows.append([int(x * den) for x in row])
    return rows


def bareiss_echelon(m: Matrix) -> tuple[list[list[int]], list[int], int]:
    """Row echelon form of ``m`` with integer entries.

    Rows are scaled to integers first (row scaling leaves the kernel
    unchanged). Returns ``(rows, pivot_columns, sign)`` where ``sign`` is the
    parity of the row swaps, needed by :func:`det`.
    """
    a = _integer_rows(m)
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    prev = 1
    sign = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
            sign = -sign
        p = a[r][c]
        for i in range(r + 1, nrows):
            f = a[i][c]
            row_i = a[i]
            row_r = a[r]
            for j in range(c + 1, ncols):
                q, rem = divmod(p * row_i[j] - f * row_r[j], prev)
                assert rem == 0, "Bareiss division must be exact"
                row_i[j] = q
            row_i[c] = 0
        prev = p
        pivots.append(c)
        r += 1
    return a, pivots, sign


def rank(m: Matrix) -> int:
    return len(bareiss_echelon(m)[1])


def det(m: Matrix) -> int | Fraction:
    """Determinant of a square matrix with integer or rational entries."""
    n = len(m)
    if n == 0:
        return 1
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    rows = [[Fraction(x) for x in row] for row in m]
    scale = Fraction(1)
    for row in rows:
        scale *= math.lcm(*(x.denominator for x in row))
    ech, pivots, sign = bareiss_echelon(rows)
    if len(pivots) < n:
        return 0
    # after full Bareiss elimination the last pivot is the determinant
    value = Fraction(sign * ech[n - 1][n - 1]) / scale
    return int(value) if value.denominator == 1 else value


def kernel_basis(m: Matrix, ncols: int | None = None) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel ``{v : m v = 0}``.

    One vector per free column, with a 1 in that column and zeros in the
    other free columns. ``ncols`` is required when ``m`` has no rows.
    """
    if ncols is None:
        if not m:
            raise ValueError("ncols is required for a matrix with no rows")
        ncols = len(m[0])
    if not m:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    ech, pivots, _ = bareiss_echelon(m)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            pc = pivots[r]
            row = ech[r]
            s = sum((row[j] * v[j] for j in range(pc + 1, ncols) if row[j]), Fraction(0))
            v[pc] = -s / row[pc]
        basis.append(tuple(v))
    return basis


def primitive_integer_vector(v: Sequence[int | Fraction]) -> list[int]:
    """Scale a nonzero rational vector to coprime integers (sign untouched)."""
    vals = [Fraction(x) for x in v]
    den = math.lcm(*(x.denominator for x in vals))
    ints = [int(x * den) for x in vals]
    g = math.gcd(*ints)
    if g == 0:
        raise ValueError("zero vector")
    return [x // g for x in ints]
