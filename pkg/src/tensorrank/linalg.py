"""Exact linear algebra over the rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .tensor import Matrix, ShapeError


@dataclass(frozen=True)
class RowBasis:
    """Indices of linearly independent rows spanning the row space."""

    indices: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.indices)


def _integer_row(row: Sequence[Fraction]) -> list[int]:
    # Scaling a row by a nonzero constant leaves the row space unchanged.
    den = lcm(*(x.denominator for x in row)) if row else 1
    return [int(x * den) for x in row]


def _bareiss_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination (destroys ``rows``)."""
    if not rows:
        return 0
    nrows, ncols = len(rows), len(rows[0])
    rank = 0
    prev = 1
    for c in range(ncols):
        if rank == nrows:
            break
        pivot = next((r for r in range(rank, nrows) if rows[r][c]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank][c]
        prow = rows[rank]
        for r in range(rank + 1, nrows):
            row = rows[r]
            f = row[c]
            # exact division: Bareiss keeps every intermediate a minor
            rows[r] = [(p * row[k] - f * prow[k]) // prev for k in range(ncols)]
        prev = p
        rank += 1
    return rank


def matrix_rank(A: Matrix) -> int:
    return _bareiss_rank([_integer_row(A.row(i)) for i in range(A.rows)])


def independent_row_indices(A: Matrix) -> RowBasis:
    """Greedy top-to-bottom scan keeping each row that raises the rank of the kept set."""
    basis: list[tuple[int, list[int]]] = []  # (pivot column, reduced integer row)
    kept = []
    for i in range(A.rows):
        row = _integer_row(A.row(i))
        for pc, brow in basis:
            f = row[pc]
            if f:
                p = brow[pc]
                row = [p * x - f * y for x, y in zip(row, brow)]
        pc = next((k for k, x in enumerate(row) if x), None)
        if pc is None:
            continue
        g = gcd(*row)
        basis.append((pc, [x // g for x in row]))
        kept.append(i)
    return RowBasis(tuple(kept))


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if A.cols != B.rows:
        raise ShapeError(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    a, b = A.tolist(), B.tolist()
    return Matrix.from_rows([
        [sum((a[i][k] * b[k][j] for k in range(A.cols)), Fraction(0)) for j in range(B.cols)]
        for i in range(A.rows)
    ])


def kronecker(A: Matrix, B: Matrix) -> Matrix:
    """Standard Kronecker product: block ``(i, j)`` is ``A[i, j] * B``."""
    return Matrix.from_rows([
        [A[i, j] * B[k, l] for j in range(A.cols) for l in range(B.cols)]
        for i in range(A.rows) for k in range(B.rows)
    ])
