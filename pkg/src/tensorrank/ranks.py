"""Multilinear rank and the four concrete rank functions.

``max_rank`` and ``submax_rank`` are the largest and second-largest unfolding
ranks.  ``mu_rank`` is the pointwise-least function satisfying the QZC axioms,
computed from the largest scaled identity subtensor and the largest-rank
submatrix.  ``pathological_rank`` grows when zero slabs are appended.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Callable

from .linalg import independent_row_indices, matrix_rank
from .tensor import Matrix, Tensor, iter_indices, slices, squeeze, strides, subtensor, unfold


class RankFunctionId(str, Enum):
    MAX = "max"
    SUBMAX = "submax"
    MU = "mu"
    PATHOLOGICAL = "pathological"


@dataclass(frozen=True)
class MultilinearRank:
    ranks: tuple[int, ...]

    def __iter__(self):
        return iter(self.ranks)

    def __len__(self):
        return len(self.ranks)

    def __getitem__(self, n):
        return self.ranks[n]


@dataclass(frozen=True)
class ShrinkWitness:
    mode: int
    kept_indices: tuple[int, ...]
    result: Tensor


def _require_nonzero(X: Tensor, what: str) -> None:
    if X.is_zero():
        raise ValueError(f"{what} is undefined for the zero tensor")


def multilinear_rank(X: Tensor) -> MultilinearRank:
    return MultilinearRank(tuple(matrix_rank(unfold(X, n)) for n in range(X.order)))


def max_rank(X: Tensor) -> int:
    return max(multilinear_rank(X))


def submax(values) -> int:
    """Second largest value of a multiset; the only value if there is just one."""
    values = sorted(values, reverse=True)
    return values[1] if len(values) > 1 else values[0]


def submax_rank(X: Tensor) -> int:
    return submax(multilinear_rank(X))


def is_rank_one(X: Tensor) -> bool:
    """True iff ``X`` is an outer product of nonzero vectors.

    A nonzero tensor is such a product exactly when every unfolding has rank 1.
    """
    if X.is_zero():
        return False
    return all(matrix_rank(unfold(X, n)) == 1 for n in range(X.order))


def s0_max(X: Tensor) -> int:
    """Largest ``M`` such that some subtensor equals ``c * I_{M,N}`` with ``c != 0``.

    Depth-first search over chains of diagonal points that increase strictly
    in every coordinate, all carrying the same value ``c``, with every mixed
    index combination of the chosen points equal to zero.
    """
    _require_nonzero(X, "s0_max")
    N = X.order
    st = strides(X.shape)
    entries = X.entries
    bound = min(X.shape)
    points = [(idx, v) for idx, v in X.items() if v]
    best = 1
    if bound == 1:
        return best

    def mixed_zero(chain, new):
        # every index combination drawing from chain+new in each mode, using
        # `new` at least once and not everywhere, must vanish
        pts = chain + [new]
        s = len(chain)
        for choice in iter_indices((s + 1,) * N):
            if s not in choice or all(c == s for c in choice):
                continue
            off = sum(pts[c][k] * st[k] for k, c in enumerate(choice))
            if entries[off]:
                return False
        return True

    def extend(chain, value, start):
        nonlocal best
        if len(chain) > best:
            best = len(chain)
        if best == bound:
            return True
        last = chain[-1]
        for p in range(start, len(points)):
            idx, v = points[p]
            if v != value or any(a <= b for a, b in zip(idx, last)):
                continue
            if mixed_zero(chain, idx):
                chain.append(idx)
                done = extend(chain, value, p + 1)
                chain.pop()
                if done:
                    return True
        return False

    for p, (idx, v) in enumerate(points):
        if extend([idx], v, p + 1):
            break
    return best


def s1_max(X: Tensor) -> int:
    """Largest rank of a submatrix of ``X``; every submatrix sits inside a 2-way slice."""
    _require_nonzero(X, "s1_max")
    best = 1
    for a, b in combinations(range(X.order), 2):
        cap = min(X.shape[a], X.shape[b])
        if cap <= best:
            continue
        for S in slices(X, a, b):
            best = max(best, matrix_rank(S))
            if best == cap:
                break
    return best


def mu_rank(X: Tensor) -> int:
    if X.is_zero():
        return 0
    if is_rank_one(X):
        return 1
    return max(s0_max(X), s1_max(X), 2)


def pathological_rank(X: Tensor) -> int:
    if X.is_zero():
        return 0
    if is_rank_one(X):
        return 1
    big = [d for d in X.shape if d > 1]
    if len(big) == 2:
        S = squeeze(X)
        return matrix_rank(Matrix(S.shape[0], S.shape[1], S.entries))
    return max(X.shape)


RANK_FUNCTIONS: dict[str, Callable[[Tensor], int]] = {
    RankFunctionId.MAX.value: max_rank,
    RankFunctionId.SUBMAX.value: submax_rank,
    RankFunctionId.MU.value: mu_rank,
    RankFunctionId.PATHOLOGICAL.value: pathological_rank,
}


def shrink_mode(X: Tensor, n: int) -> ShrinkWitness:
    """Keep a greedy basis of rows of the mode-``n`` unfolding; all other indices stay."""
    _require_nonzero(X, "shrink_mode")
    basis = independent_row_indices(unfold(X, n))
    sel = [range(d) for d in X.shape]
    sel[n] = basis.indices
    Y = subtensor(X, sel)
    if multilinear_rank(Y) != multilinear_rank(X):
        raise AssertionError("shrinking changed the multilinear rank")
    return ShrinkWitness(n, basis.indices, Y)


def core_steps(X: Tensor) -> list[ShrinkWitness]:
    steps = []
    Y = X
    for n in range(X.order):
        w = shrink_mode(Y, n)
        steps.append(w)
        Y = w.result
    return steps


def core_subtensor(X: Tensor) -> Tensor:
    """Subtensor of shape ``multilinear_rank(X)`` with the same multilinear rank."""
    return core_steps(X)[-1].result


def rank_witness_subtensor(X: Tensor, f: RankFunctionId | str) -> tuple[Tensor, int]:
    """Return ``(Y, n)`` with ``Y`` a subtensor of ``X`` and ``f(X) == f(Y) == Y.shape[n]``."""
    f = RankFunctionId(f)
    if f not in (RankFunctionId.MAX, RankFunctionId.SUBMAX):
        raise ValueError(f"no subtensor witness for rank function {f.value!r}")
    _require_nonzero(X, "rank_witness_subtensor")
    Y = core_subtensor(X)
    value = RANK_FUNCTIONS[f.value](X)
    n = Y.shape.index(value)
    return Y, n
