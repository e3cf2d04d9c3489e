"""Exact solution of integer linear systems by fraction-free elimination."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def bareiss_echelon(rows: list[list[int]], ncols: int):
    """Fraction-free row echelon form, in place.

    Every entry stays an integer: each update is divided exactly by the
    previous pivot (Bareiss). Columns without a pivot are skipped. Returns
    the list of (row, column) pivot positions.
    """
    nrows = len(rows)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        pc = pr[c]
        for i in range(r + 1, nrows):
            row = rows[i]
            f = row[c]
            if f == 0:
                # still has to be rescaled to keep the exact-division invariant
                rows[i] = [(pc * x) // prev for x in row]
            else:
                rows[i] = [(pc * x - f * y) // prev for x, y in zip(row, pr)]
        prev = pc
        pivots.append((r, c))
        r += 1
    return pivots


def solve_integer_system(A: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction] | None:
    """One rational solution of A x = b, or None if the system is inconsistent.

    Free variables are set to zero, so the solution is supported on the
    pivot columns of the echelon form.
    """
    ncols = len(A[0]) if A else 0
    rows = [list(map(int, row)) + [int(bi)] for row, bi in zip(A, b)]
    if len(rows) != len(b):
        raise ValueError("matrix and right-hand side disagree on the number of rows")
    pivots = bareiss_echelon(rows, ncols + 1)
    if any(c == ncols for _, c in pivots):
        return None
    x = [Fraction(0)] * ncols
    for r, c in reversed(pivots):
        row = rows[r]
        s = Fraction(row[ncols])
        for j in range(c + 1, ncols):
            if row[j] and x[j]:
                s -= row[j] * x[j]
        x[c] = s / row[c]
    return x


def rank(A: Sequence[Sequence[int]]) -> int:
    ncols = len(A[0]) if A else 0
    return len(bareiss_echelon([list(map(int, row)) for row in A], ncols))
