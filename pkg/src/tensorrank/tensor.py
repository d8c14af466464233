"""Dense exact tensors and the index-level operators on them.

Entries are :class:`fractions.Fraction` values stored flat with the first
index varying fastest, so the offset of ``(i_1, ..., i_N)`` is
``sum_k i_k * prod_{m<k} I_m``.  All indices and modes in the Python API are
0-based; the JSON formats and the CLI use 1-based indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod
from typing import Iterable, Iterator, Sequence


class ShapeError(ValueError):
    """Raised when shapes, modes or index selections are inconsistent."""


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"entries must be exact rationals, got {value!r}")
    return Fraction(value)


def iter_indices(shape: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Yield every index tuple of ``shape`` in storage (first-index-fastest) order."""
    for rev in product(*(range(d) for d in reversed(shape))):
        yield rev[::-1]


def strides(shape: Sequence[int]) -> tuple[int, ...]:
    out = []
    step = 1
    for d in shape:
        out.append(step)
        step *= d
    return tuple(out)


@dataclass(frozen=True)
class Tensor:
    """An N-way array of rationals with explicit shape."""

    shape: tuple[int, ...]
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        shape = tuple(int(d) for d in self.shape)
        if len(shape) < 1:
            raise ShapeError("a tensor needs at least one mode")
        if any(d < 1 for d in shape):
            raise ShapeError(f"every dimension must be >= 1, got {shape}")
        entries = tuple(_as_fraction(e) for e in self.entries)
        if len(entries) != prod(shape):
            raise ShapeError(
                f"shape {shape} needs {prod(shape)} entries, got {len(entries)}"
            )
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def zeros(cls, shape: Sequence[int]) -> Tensor:
        return cls(tuple(shape), (Fraction(0),) * prod(shape))

    @classmethod
    def from_function(cls, shape: Sequence[int], fn) -> Tensor:
        """Build a tensor whose entry at ``idx`` is ``fn(idx)``."""
        return cls(tuple(shape), tuple(fn(idx) for idx in iter_indices(shape)))

    @property
    def order(self) -> int:
        return len(self.shape)

    @property
    def size(self) -> int:
        return len(self.entries)

    def offset(self, idx: Sequence[int]) -> int:
        return sum(i * s for i, s in zip(idx, strides(self.shape)))

    def __getitem__(self, idx: Sequence[int]) -> Fraction:
        if len(idx) != self.order:
            raise ShapeError(f"index {tuple(idx)} does not match order {self.order}")
        for i, d in zip(idx, self.shape):
            if not 0 <= i < d:
                raise IndexError(f"index {tuple(idx)} out of bounds for {self.shape}")
        return self.entries[self.offset(idx)]

    def is_zero(self) -> bool:
        return not any(self.entries)

    def items(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        return zip(iter_indices(self.shape), self.entries)


@dataclass(frozen=True)
class Matrix:
    """A dense rational matrix; ``entries`` are stored column by column."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ShapeError(f"matrix dimensions must be >= 1, got {self.rows}x{self.cols}")
        entries = tuple(_as_fraction(e) for e in self.entries)
        if len(entries) != self.rows * self.cols:
            raise ShapeError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries,"
                f" got {len(entries)}"
            )
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> Matrix:
        if not rows or not rows[0]:
            raise ShapeError("matrix must have at least one row and one column")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ShapeError("ragged rows")
        entries = [rows[i][j] for j in range(ncols) for i in range(len(rows))]
        return cls(len(rows), ncols, tuple(entries))

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Matrix:
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"({i}, {j}) out of bounds for {self.rows}x{self.cols}")
        return self.entries[i + j * self.rows]

    def row(self, i: int) -> list[Fraction]:
        return [self.entries[i + j * self.rows] for j in range(self.cols)]

    def tolist(self) -> list[list[Fraction]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> Matrix:
        return Matrix.from_rows([[self[i, j] for i in range(self.rows)] for j in range(self.cols)])

    def as_tensor(self) -> Tensor:
        return Tensor((self.rows, self.cols), self.entries)


def _check_mode(X: Tensor, n: int) -> None:
    if not 0 <= n < X.order:
        raise ShapeError(f"mode {n} out of range for a tensor of order {X.order}")


def _check_permutation(perm: Sequence[int], size: int, what: str) -> tuple[int, ...]:
    perm = tuple(perm)
    if sorted(perm) != list(range(size)):
        raise ShapeError(f"{what} {perm} is not a permutation of 0..{size - 1}")
    return perm


def subtensor(X: Tensor, selector: Sequence[Sequence[int]]) -> Tensor:
    """Restrict ``X`` to strictly increasing index lists, one per mode."""
    if len(selector) != X.order:
        raise ShapeError(f"selector has {len(selector)} lists, tensor has order {X.order}")
    sel = []
    for n, (idx, dim) in enumerate(zip(selector, X.shape)):
        idx = tuple(idx)
        if not idx:
            raise ShapeError(f"selector for mode {n} is empty")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ShapeError(f"selector for mode {n} is not strictly increasing: {idx}")
        if idx[0] < 0 or idx[-1] >= dim:
            raise ShapeError(f"selector for mode {n} out of bounds for dimension {dim}")
        sel.append(idx)
    st = strides(X.shape)
    shape = tuple(len(s) for s in sel)
    entries = [
        X.entries[sum(sel[k][j] * st[k] for k, j in enumerate(jdx))]
        for jdx in iter_indices(shape)
    ]
    return Tensor(shape, tuple(entries))


def permute_modes(X: Tensor, perm: Sequence[int]) -> Tensor:
    """Return ``Y`` with ``Y[i_0, ..., i_{N-1}] = X[i_{perm[0]}, ..., i_{perm[N-1]}]``.

    Mode ``m`` of ``X`` therefore becomes mode ``perm[m]`` of the result.
    """
    perm = _check_permutation(perm, X.order, "mode permutation")
    shape = [0] * X.order
    for m, p in enumerate(perm):
        shape[p] = X.shape[m]
    st = strides(X.shape)
    entries = [
        X.entries[sum(jdx[perm[m]] * st[m] for m in range(X.order))]
        for jdx in iter_indices(shape)
    ]
    return Tensor(tuple(shape), tuple(entries))


def inverse_permutation(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)


def permute_indices(X: Tensor, perms: Sequence[Sequence[int]]) -> Tensor:
    """Permute indices within each mode: ``Y[i] = X[perms[0][i_0], ..., perms[N-1][i_{N-1}]]``."""
    if len(perms) != X.order:
        raise ShapeError(f"need {X.order} permutations, got {len(perms)}")
    perms = [_check_permutation(p, d, f"permutation for mode {n}")
             for n, (p, d) in enumerate(zip(perms, X.shape))]
    st = strides(X.shape)
    entries = [
        X.entries[sum(perms[k][i] * st[k] for k, i in enumerate(idx))]
        for idx in iter_indices(X.shape)
    ]
    return Tensor(X.shape, tuple(entries))


def scale(X: Tensor, alpha) -> Tensor:
    alpha = _as_fraction(alpha)
    return Tensor(X.shape, tuple(alpha * e for e in X.entries))


def unfold(X: Tensor, n: int) -> Matrix:
    """Mode-``n`` unfolding: ``I_n x prod_{k != n} I_k``, columns are the mode-``n`` fibers.

    Column index of ``(i_0, ..., i_{N-1})`` is ``sum_{k != n} i_k * J_k`` with
    ``J_k = prod_{m < k, m != n} I_m``.
    """
    _check_mode(X, n)
    rows = X.shape[n]
    col_strides = []
    step = 1
    for k, d in enumerate(X.shape):
        if k == n:
            col_strides.append(0)
        else:
            col_strides.append(step)
            step *= d
    cols = step
    out = [None] * (rows * cols)
    for idx, value in X.items():
        j = sum(i * s for i, s in zip(idx, col_strides))
        out[idx[n] + j * rows] = value
    return Matrix(rows, cols, tuple(out))


def fold(A: Matrix, n: int, shape: Sequence[int]) -> Tensor:
    """Inverse of :func:`unfold` for a tensor of the given shape."""
    shape = tuple(shape)
    if not 0 <= n < len(shape):
        raise ShapeError(f"mode {n} out of range for shape {shape}")
    if A.rows != shape[n] or A.rows * A.cols != prod(shape):
        raise ShapeError(f"{A.rows}x{A.cols} matrix cannot fold into {shape} along mode {n}")
    col_strides = []
    step = 1
    for k, d in enumerate(shape):
        col_strides.append(0 if k == n else step)
        if k != n:
            step *= d
    entries = [
        A.entries[idx[n] + sum(i * s for i, s in zip(idx, col_strides)) * A.rows]
        for idx in iter_indices(shape)
    ]
    return Tensor(shape, tuple(entries))


def mode_product(X: Tensor, n: int, A: Matrix) -> Tensor:
    """``X x_n A``: contract the columns of ``A`` against mode ``n`` of ``X``."""
    _check_mode(X, n)
    if A.cols != X.shape[n]:
        raise ShapeError(
            f"mode {n} has dimension {X.shape[n]} but the matrix has {A.cols} columns"
        )
    shape = X.shape[:n] + (A.rows,) + X.shape[n + 1:]
    st = strides(X.shape)
    step = st[n]
    entries = []
    for idx in iter_indices(shape):
        base = sum(i * s for k, (i, s) in enumerate(zip(idx, st)) if k != n)
        j = idx[n]
        entries.append(sum(
            (X.entries[base + i * step] * A.entries[j + i * A.rows] for i in range(X.shape[n])),
            Fraction(0),
        ))
    return Tensor(shape, tuple(entries))


def tucker(X: Tensor, mats: Sequence[Matrix]) -> Tensor:
    """``X x_1 A_1 x_2 ... x_N A_N``."""
    if len(mats) != X.order:
        raise ShapeError(f"need {X.order} matrices, got {len(mats)}")
    for n, A in enumerate(mats):
        if A.cols != X.shape[n]:
            raise ShapeError(
                f"matrix {n} has {A.cols} columns but mode {n} has dimension {X.shape[n]}"
            )
    Y = X
    for n, A in enumerate(mats):
        Y = mode_product(Y, n, A)
    return Y


def identity_tensor(M: int, N: int) -> Tensor:
    """The order-``N`` tensor with all dimensions ``M`` and ones on the superdiagonal."""
    return diagonal_tensor([1] * M, N)


def diagonal_tensor(diag: Sequence, N: int) -> Tensor:
    diag = [_as_fraction(d) for d in diag]
    if not diag:
        raise ShapeError("diagonal must have at least one entry")
    if N < 1:
        raise ShapeError("order must be >= 1")
    M = len(diag)
    X = [Fraction(0)] * (M ** N)
    step = sum(M ** k for k in range(N))
    for i, d in enumerate(diag):
        X[i * step] = d
    return Tensor((M,) * N, tuple(X))


def outer(vectors: Sequence[Sequence]) -> Tensor:
    vecs = [[_as_fraction(v) for v in vec] for vec in vectors]
    shape = tuple(len(v) for v in vecs)
    return Tensor.from_function(
        shape, lambda idx: prod((vecs[k][i] for k, i in enumerate(idx)), start=Fraction(1))
    )


def from_factors(factors: Sequence[Sequence[Sequence]]) -> Tensor:
    """Sum of outer products, one per group of per-mode vectors.

    Zero vectors are rejected: a rank-one tensor is an outer product of
    nonzero vectors.
    """
    if not factors:
        raise ShapeError("need at least one group of factor vectors")
    lengths = None
    total = None
    for r, group in enumerate(factors):
        if not group:
            raise ShapeError(f"factor group {r} is empty")
        group_lengths = tuple(len(v) for v in group)
        if lengths is None:
            lengths = group_lengths
        elif group_lengths != lengths:
            raise ShapeError(
                f"factor group {r} has lengths {group_lengths}, expected {lengths}"
            )
        for k, v in enumerate(group):
            if not any(_as_fraction(x) for x in v):
                raise ValueError(f"factor vector {k} of group {r} is zero")
        term = outer(group)
        total = term if total is None else Tensor(
            total.shape, tuple(a + b for a, b in zip(total.entries, term.entries))
        )
    return total


def pad_zeros(X: Tensor, n: int, count: int) -> Tensor:
    """Append ``count`` zero slabs to ``X`` in mode ``n``."""
    _check_mode(X, n)
    if count < 1:
        raise ShapeError("count must be a positive integer")
    shape = X.shape[:n] + (X.shape[n] + count,) + X.shape[n + 1:]
    dim = X.shape[n]
    return Tensor.from_function(
        shape, lambda idx: X[idx] if idx[n] < dim else Fraction(0)
    )


def drop_singleton(X: Tensor, n: int) -> Tensor:
    _check_mode(X, n)
    if X.order < 2:
        raise ShapeError("cannot drop the only mode of an order-1 tensor")
    if X.shape[n] != 1:
        raise ShapeError(f"mode {n} has dimension {X.shape[n]}, not 1")
    return Tensor(X.shape[:n] + X.shape[n + 1:], X.entries)


def append_singleton(X: Tensor) -> Tensor:
    return Tensor(X.shape + (1,), X.entries)


def squeeze(X: Tensor) -> Tensor:
    """Drop every singleton mode, keeping at least one mode."""
    shape = tuple(d for d in X.shape if d > 1) or (1,)
    return Tensor(shape, X.entries)


def slices(X: Tensor, a: int, b: int) -> Iterable[Matrix]:
    """All 2-way slices of ``X`` in modes ``a < b``, fixing every other index."""
    st = strides(X.shape)
    others = [k for k in range(X.order) if k not in (a, b)]
    for fixed in product(*(range(X.shape[k]) for k in others)):
        base = sum(i * st[k] for k, i in zip(others, fixed))
        entries = [
            X.entries[base + i * st[a] + j * st[b]]
            for j in range(X.shape[b]) for i in range(X.shape[a])
        ]
        yield Matrix(X.shape[a], X.shape[b], tuple(entries))
