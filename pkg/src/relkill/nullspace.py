"""Exact kernels of rational matrices by fraction-free elimination.

Rows are scaled to integers, reduced to echelon form with Bareiss' one-step
rule (every division is exact), and the echelon form is then normalized to
reduced row echelon form over Q.  Pivots are always taken from the lowest
available row index, so the output basis depends only on the input order.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence

__all__ = ["bareiss_echelon", "rref", "nullspace", "rank", "apply_rows"]


def _as_dense(rows, ncols: int) -> list[list[Fraction]]:
    out = []
    for r in rows:
        if isinstance(r, Mapping):
            dense = [Fraction(0)] * ncols
            for j, v in r.items():
                dense[j] = Fraction(v)
        else:
            dense = [Fraction(v) for v in r]
            if len(dense) != ncols:
                raise ValueError(f"row of length {len(dense)} in a {ncols}-column system")
        out.append(dense)
    return out


def _integer_rows(rows: list[list[Fraction]]) -> list[list[int]]:
    out = []
    for r in rows:
        den = lcm(*(v.denominator for v in r)) if r else 1
        out.append([int(v * den) for v in r])
    return out


def bareiss_echelon(rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form of an integer matrix.

    Returns the nonzero echelon rows and their pivot columns.  The input is
    copied, not modified.
    """
    M = [list(r) for r in rows]
    if not M:
        return [], []
    n = len(M[0])
    prev = 1
    r = 0
    pivots: list[int] = []
    for col in range(n):
        piv = next((i for i in range(r, len(M)) if M[i][col] != 0), None)
        if piv is None:
            continue
        if piv != r:
            M[r], M[piv] = M[piv], M[r]
        pr = M[r]
        a = pr[col]
        for i in range(r + 1, len(M)):
            row = M[i]
            b = row[col]
            if b == 0:
                if prev != 1:
                    for j in range(col + 1, n):
                        if row[j]:
                            row[j] = (a * row[j]) // prev
                else:
                    for j in range(col + 1, n):
                        if row[j]:
                            row[j] = a * row[j]
                continue
            for j in range(col + 1, n):
                row[j] = (a * row[j] - b * pr[j]) // prev
            row[col] = 0
        prev = a
        pivots.append(col)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rref(rows: Sequence, ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q (only the nonzero rows)."""
    dense = _as_dense(rows, ncols)
    ech, pivots = bareiss_echelon(_integer_rows(dense))
    R = [[Fraction(v) for v in row] for row in ech]
    for k in range(len(R) - 1, -1, -1):
        c = pivots[k]
        inv = 1 / R[k][c]
        R[k] = [v * inv for v in R[k]]
        for i in range(k):
            f = R[i][c]
            if f:
                R[i] = [u - f * v for u, v in zip(R[i], R[k])]
    return R, pivots


def rank(rows: Sequence, ncols: int) -> int:
    dense = _as_dense(rows, ncols)
    return len(bareiss_echelon(_integer_rows(dense))[1])


def nullspace(rows: Sequence, ncols: int) -> list[list[Fraction]]:
    """Kernel basis, one vector per free column with a 1 in that column.

    ``rows`` may be dense sequences or sparse ``{column: value}`` maps.
    """
    R, pivots = rref(rows, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, c in zip(R, pivots):
            if row[f]:
                v[c] = -row[f]
        basis.append(v)
    return basis


def apply_rows(rows: Sequence, vec: Sequence) -> list[Fraction]:
    """The products row . vec for each row."""
    out = []
    for r in rows:
        if isinstance(r, Mapping):
            out.append(sum((Fraction(v) * vec[j] for j, v in r.items()), Fraction(0)))
        else:
            out.append(sum((Fraction(a) * b for a, b in zip(r, vec)), Fraction(0)))
    return out
