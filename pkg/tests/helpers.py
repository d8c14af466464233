"""Brute-force oracles and hypothesis strategies shared by the test modules.

The oracles deliberately avoid the search shortcuts used in the library:
they enumerate every selector, every submatrix, every minor.
"""

from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb, prod

from hypothesis import strategies as st

from tensorrank.linalg import matrix_rank
from tensorrank.tensor import Matrix, Tensor, identity_tensor, permute_modes, scale, subtensor


def det(rows):
    """Leibniz expansion."""
    n = len(rows)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inversions % 2 else 1)
        for i, p in enumerate(perm):
            term *= rows[i][p]
            if not term:
                break
        total += term
    return total


def minor_rank(A: Matrix) -> int:
    rows = A.tolist()
    for k in range(min(A.rows, A.cols), 0, -1):
        for rs in combinations(range(A.rows), k):
            for cs in combinations(range(A.cols), k):
                if det([[rows[r][c] for c in cs] for r in rs]):
                    return k
    return 0


def is_scaled_identity(S: Tensor) -> bool:
    c = S.entries[0]
    M = S.shape[0]
    return bool(c) and S == scale(identity_tensor(M, S.order), c)


def brute_s0(X: Tensor) -> int:
    """Largest M with c*I_{M,N} a subtensor of some mode permutation of X."""
    best = 0
    for perm in permutations(range(X.order)):
        Y = permute_modes(X, perm)
        for M in range(min(Y.shape), best, -1):
            if any(is_scaled_identity(subtensor(Y, sel))
                   for sel in product(*(combinations(range(d), M) for d in Y.shape))):
                best = M
                break
    return best


def _subsets(d):
    return [c for k in range(1, d + 1) for c in combinations(range(d), k)]


def brute_s1(X: Tensor) -> int:
    """Largest rank over every subtensor with at most two non-singleton modes."""
    best = 0
    N = X.order
    mode_sets = [()] + [(a,) for a in range(N)] + list(combinations(range(N), 2))
    for wide in mode_sets:
        choices = [_subsets(d) if n in wide else [(i,) for i in range(d)]
                   for n, d in enumerate(X.shape)]
        for sel in product(*choices):
            S = subtensor(X, sel)
            big = [d for d in S.shape if d > 1]
            if len(big) == 2:
                rows = [n for n in range(N) if S.shape[n] > 1]
                A = Matrix(S.shape[rows[0]], S.shape[rows[1]], S.entries)
                r = matrix_rank(A)
            else:
                r = 1 if not S.is_zero() else 0
            best = max(best, r)
    return best


def brute_cost(shape) -> int:
    """Rough count of subtensors the two oracles enumerate."""
    N = len(shape)
    s0 = sum(prod(comb(d, M) for d in shape) for M in range(1, min(shape) + 1))
    s1 = sum(
        (2 ** shape[a] - 1) * (2 ** shape[b] - 1) * prod(shape) // (shape[a] * shape[b])
        for a, b in combinations(range(N), 2)
    ) if N >= 2 else 2 ** shape[0]
    return s0 * max(1, len(list(permutations(range(N))))) + s1


POOL = [Fraction(x) for x in (-2, -1, 0, 1, 2, Fraction(1, 2))]


@st.composite
def shapes(draw, max_order=4, max_dim=3, max_size=81):
    order = draw(st.integers(1, max_order))
    dims = draw(st.lists(st.integers(1, max_dim), min_size=order, max_size=order))
    if prod(dims) > max_size:
        dims = [1] * order
    return tuple(dims)


@st.composite
def tensors(draw, max_order=4, max_dim=3, pool=POOL, min_order=1):
    shape = draw(shapes(max_order, max_dim).filter(lambda s: len(s) >= min_order))
    entries = draw(st.lists(st.sampled_from(pool), min_size=prod(shape), max_size=prod(shape)))
    return Tensor(shape, tuple(entries))


@st.composite
def matrices(draw, max_dim=4, pool=POOL):
    rows = draw(st.integers(1, max_dim))
    cols = draw(st.integers(1, max_dim))
    entries = draw(st.lists(st.sampled_from(pool), min_size=rows * cols, max_size=rows * cols))
    return Matrix(rows, cols, tuple(entries))
