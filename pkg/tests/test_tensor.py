from fractions import Fraction
from itertools import permutations, product
from math import prod
import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import tensors
from tensorrank.linalg import matmul, matrix_rank
from tensorrank.tensor import (
    Matrix,
    ShapeError,
    Tensor,
    append_singleton,
    diagonal_tensor,
    drop_singleton,
    from_factors,
    identity_tensor,
    inverse_permutation,
    iter_indices,
    mode_product,
    pad_zeros,
    permute_indices,
    permute_modes,
    scale,
    subtensor,
    tucker,
    unfold,
)

ONE_TO_EIGHT = Tensor((2, 2, 2), tuple(range(1, 9)))
SLAB = Tensor.from_function(
    (2, 2, 3), lambda idx: 1 if idx in ((0, 0, 0), (1, 1, 1)) else 0
)


def rand_tensor(rng, shape, pool=(-2, -1, 0, 1, 2, Fraction(1, 2))):
    return Tensor.from_function(shape, lambda _: rng.choice(pool))


def rand_matrix(rng, rows, cols, pool=(-2, -1, 0, 1, 2, Fraction(1, 2))):
    return Matrix.from_rows([[rng.choice(pool) for _ in range(cols)] for _ in range(rows)])


def entry_by_formula(X, n, i_n, j):
    """Invert the 1-based column formula j = 1 + sum_{k != n} (i_k - 1) J_k by enumeration."""
    N = X.order
    for idx1 in product(*(range(1, d + 1) for d in X.shape)):
        if idx1[n] != i_n:
            continue
        col = 1
        for k in range(N):
            if k == n:
                continue
            Jk = prod(X.shape[m] for m in range(k) if m != n)
            col += (idx1[k] - 1) * Jk
        if col == j:
            return X[tuple(i - 1 for i in idx1)]
    raise AssertionError("no index tuple maps to this column")


class TestConstruction:
    def test_linearization_is_first_index_fastest(self):
        assert ONE_TO_EIGHT[1, 0, 0] == 2
        assert ONE_TO_EIGHT[0, 1, 0] == 3
        assert ONE_TO_EIGHT[0, 0, 1] == 5
        assert list(iter_indices((2, 2)))[:2] == [(0, 0), (1, 0)]

    def test_rejects_bad_shapes(self):
        with pytest.raises(ShapeError):
            Tensor((2, 0), ())
        with pytest.raises(ShapeError):
            Tensor((2, 2), (1, 2, 3))
        with pytest.raises(ShapeError):
            Tensor((), ())

    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            Tensor((1,), (0.5,))

    def test_matrix_storage_is_column_major(self):
        A = Matrix.from_rows([[1, 2], [3, 4]])
        assert A.entries == (1, 3, 2, 4)
        assert A[0, 1] == 2
        assert A.transpose().tolist() == [[1, 3], [2, 4]]


class TestSubtensor:
    def test_identity_leading_block(self):
        assert subtensor(identity_tensor(3, 3), [[0, 1]] * 3) == identity_tensor(2, 3)

    def test_full_selection(self):
        assert subtensor(ONE_TO_EIGHT, [[0, 1]] * 3) == ONE_TO_EIGHT

    def test_one_to_eight_example(self):
        Y = subtensor(ONE_TO_EIGHT, [[1], [0, 1], [1]])
        assert Y.shape == (1, 2, 1)
        assert Y.entries == (6, 8)

    @pytest.mark.parametrize("sel", [
        [[0, 1], [0, 1]],
        [[0], [0], [3]],
        [[1, 0], [0], [0]],
        [[], [0], [0]],
    ])
    def test_errors(self, sel):
        with pytest.raises(ShapeError):
            subtensor(ONE_TO_EIGHT, sel)


class TestPermuteModes:
    def test_identity(self):
        assert permute_modes(ONE_TO_EIGHT, (0, 1, 2)) == ONE_TO_EIGHT

    def test_matrix_transpose(self):
        A = Matrix.from_rows([[1, 2, 3], [4, 5, 6]])
        assert permute_modes(A.as_tensor(), (1, 0)) == A.transpose().as_tensor()

    def test_defining_formula(self):
        rng = random.Random(1)
        X = rand_tensor(rng, (2, 3, 4))
        perm = (2, 0, 1)
        Y = permute_modes(X, perm)
        for idx in iter_indices(Y.shape):
            assert Y[idx] == X[tuple(idx[perm[m]] for m in range(3))]

    def test_round_trip_exhaustive(self):
        rng = random.Random(2)
        for N in range(1, 5):
            X = rand_tensor(rng, tuple(rng.randint(1, 3) for _ in range(N)))
            for perm in permutations(range(N)):
                Y = permute_modes(X, perm)
                assert permute_modes(Y, inverse_permutation(perm)) == X

    def test_rejects_non_permutation(self):
        with pytest.raises(ShapeError):
            permute_modes(ONE_TO_EIGHT, (0, 0, 1))


class TestPermuteIndices:
    def test_identity(self):
        assert permute_indices(ONE_TO_EIGHT, [[0, 1]] * 3) == ONE_TO_EIGHT

    def test_row_swap(self):
        I = identity_tensor(2, 2)
        assert permute_indices(I, [[1, 0], [0, 1]]).entries == (0, 1, 1, 0)

    def test_matches_tucker_with_permutation_matrices(self):
        rng = random.Random(3)
        for _ in range(10):
            shape = tuple(rng.randint(1, 3) for _ in range(3))
            X = rand_tensor(rng, shape)
            perms = [rng.sample(range(d), d) for d in shape]
            # Y[j] = X[perm(j)]: row j of P has its 1 in column perm[j]
            mats = [Matrix.from_rows([[int(c == p[r]) for c in range(len(p))] for r in range(len(p))])
                    for p in perms]
            assert permute_indices(X, perms) == tucker(X, mats)

    def test_rejects_invalid(self):
        with pytest.raises(ShapeError):
            permute_indices(ONE_TO_EIGHT, [[0, 1], [0, 1], [0, 2]])


class TestScale:
    def test_one_and_zero(self):
        assert scale(ONE_TO_EIGHT, 1) == ONE_TO_EIGHT
        assert scale(ONE_TO_EIGHT, 0) == Tensor.zeros((2, 2, 2))

    def test_negated_diagonal(self):
        D = diagonal_tensor([1, 1, -1], 3)
        assert scale(D, -1) == diagonal_tensor([-1, -1, 1], 3)


class TestUnfold:
    def test_vector(self):
        v = Tensor((3,), (1, 2, 3))
        assert unfold(v, 0).tolist() == [[1], [2], [3]]

    def test_one_to_eight(self):
        assert unfold(ONE_TO_EIGHT, 2).tolist() == [[1, 2, 3, 4], [5, 6, 7, 8]]
        assert unfold(ONE_TO_EIGHT, 0).tolist() == [[1, 3, 5, 7], [2, 4, 6, 8]]

    def test_column_formula_enumeration(self):
        for shape in [(2, 3), (3, 1, 2), (2, 2, 2, 2), (4, 4, 4, 4), (1, 3, 2, 4)]:
            X = Tensor(shape, tuple(range(prod(shape))))
            for n in range(len(shape)):
                U = unfold(X, n)
                for i in range(U.rows):
                    for j in range(U.cols):
                        assert U[i, j] == entry_by_formula(X, n, i + 1, j + 1)

    def test_mode_out_of_range(self):
        with pytest.raises(ShapeError):
            unfold(ONE_TO_EIGHT, 3)


class TestModeProduct:
    def test_identity_matrix(self):
        for n in range(3):
            assert mode_product(ONE_TO_EIGHT, n, Matrix.identity(2)) == ONE_TO_EIGHT

    def test_slab_construction(self):
        A = Matrix.from_rows([[1, 0], [0, 1], [0, 0]])
        assert mode_product(identity_tensor(2, 3), 2, A) == SLAB

    def test_dimension_mismatch(self):
        with pytest.raises(ShapeError):
            mode_product(ONE_TO_EIGHT, 0, Matrix.identity(3))

    def test_composition_same_mode(self):
        rng = random.Random(5)
        for _ in range(20):
            shape = tuple(rng.randint(1, 3) for _ in range(3))
            X = rand_tensor(rng, shape)
            n = rng.randrange(3)
            B = rand_matrix(rng, rng.randint(1, 3), shape[n])
            A = rand_matrix(rng, rng.randint(1, 3), B.rows)
            assert mode_product(mode_product(X, n, B), n, A) == mode_product(X, n, matmul(A, B))

    def test_commutation_distinct_modes(self):
        rng = random.Random(6)
        for _ in range(20):
            shape = tuple(rng.randint(1, 3) for _ in range(3))
            X = rand_tensor(rng, shape)
            m, n = rng.sample(range(3), 2)
            B = rand_matrix(rng, rng.randint(1, 3), shape[m])
            A = rand_matrix(rng, rng.randint(1, 3), shape[n])
            lhs = mode_product(mode_product(X, m, B), n, A)
            rhs = mode_product(mode_product(X, n, A), m, B)
            assert lhs == rhs


class TestTucker:
    def test_identities(self):
        assert tucker(ONE_TO_EIGHT, [Matrix.identity(2)] * 3) == ONE_TO_EIGHT

    def test_any_mode_order_gives_same_result(self):
        rng = random.Random(7)
        for _ in range(10):
            shape = tuple(rng.randint(1, 3) for _ in range(3))
            X = rand_tensor(rng, shape)
            mats = [rand_matrix(rng, rng.randint(1, 3), d) for d in shape]
            expected = tucker(X, mats)
            for order in permutations(range(3)):
                Y = X
                for n in order:
                    Y = mode_product(Y, n, mats[n])
                assert Y == expected

    def test_wrong_list_length(self):
        with pytest.raises(ShapeError):
            tucker(ONE_TO_EIGHT, [Matrix.identity(2)] * 2)

    def test_shape(self):
        mats = [Matrix.zeros(3, 2), Matrix.zeros(1, 2), Matrix.zeros(2, 2)]
        assert tucker(ONE_TO_EIGHT, mats).shape == (3, 1, 2)


class TestConstructors:
    def test_identity_tensor(self):
        assert identity_tensor(1, 3).entries == (1,)
        assert identity_tensor(3, 2) == Matrix.identity(3).as_tensor()
        I = identity_tensor(2, 3)
        ones = [idx for idx, v in I.items() if v]
        assert ones == [(0, 0, 0), (1, 1, 1)]
        assert sum(1 for _, v in I.items() if not v) == 6

    def test_diagonal_tensor(self):
        D = diagonal_tensor([1, 1, -1], 3)
        assert D[0, 0, 0] == 1 and D[1, 1, 1] == 1 and D[2, 2, 2] == -1
        assert sum(1 for e in D.entries if e) == 3
        assert diagonal_tensor([1, 1, 1, 1], 2) == identity_tensor(4, 2)
        assert diagonal_tensor([0, 0], 3).is_zero()

    def test_from_factors(self):
        X = from_factors([[(1, 2), (1, 0, 1)]])
        assert Matrix(2, 3, X.entries).tolist() == [[1, 0, 1], [2, 0, 2]]
        Y = from_factors([[(1, 0)] * 3, [(0, 1)] * 3])
        assert Y == identity_tensor(2, 3)

    @pytest.mark.parametrize("factors, exc", [
        ([], ShapeError),
        ([[]], ShapeError),
        ([[(1, 2)], [(1, 2, 3)]], ShapeError),
        ([[(1, 2), (0, 0)]], ValueError),
    ])
    def test_from_factors_errors(self, factors, exc):
        with pytest.raises(exc):
            from_factors(factors)

    def test_rank_one_unfoldings(self):
        rng = random.Random(8)
        for _ in range(30):
            N = rng.randint(1, 4)
            vecs = []
            for _ in range(N):
                v = [rng.choice((-2, -1, 0, 1, 2)) for _ in range(rng.randint(1, 3))]
                if not any(v):
                    v[0] = 1
                vecs.append(v)
            X = from_factors([vecs])
            assert all(matrix_rank(unfold(X, n)) == 1 for n in range(N))


class TestPadAndSingletons:
    def test_slab(self):
        assert pad_zeros(identity_tensor(2, 3), 2, 1) == SLAB

    def test_equals_stacked_matrix_product(self):
        rng = random.Random(9)
        for _ in range(10):
            shape = tuple(rng.randint(1, 3) for _ in range(3))
            X = rand_tensor(rng, shape)
            n, k = rng.randrange(3), rng.randint(1, 2)
            stacked = Matrix.from_rows(
                [[int(r == c) for c in range(shape[n])] for r in range(shape[n] + k)]
            )
            P = pad_zeros(X, n, k)
            assert P == mode_product(X, n, stacked)
            sel = [list(range(d)) for d in shape]
            assert subtensor(P, sel) == X

    def test_zero_stays_zero(self):
        assert pad_zeros(Tensor.zeros((2, 2)), 1, 3) == Tensor.zeros((2, 5))

    def test_singletons(self):
        X = Tensor((2, 3, 1), tuple(range(6)))
        M = drop_singleton(X, 2)
        assert M.shape == (2, 3) and M.entries == X.entries
        A = append_singleton(ONE_TO_EIGHT)
        assert A.shape == (2, 2, 2, 1) and A.entries == ONE_TO_EIGHT.entries
        assert drop_singleton(A, 3) == ONE_TO_EIGHT

    def test_singleton_errors(self):
        with pytest.raises(ShapeError):
            drop_singleton(ONE_TO_EIGHT, 0)
        with pytest.raises(ShapeError):
            drop_singleton(Tensor((1,), (1,)), 0)


@settings(max_examples=60, deadline=None)
@given(tensors())
def test_round_trips(X):
    assert subtensor(X, [range(d) for d in X.shape]) == X
    assert permute_modes(X, range(X.order)) == X
    assert scale(X, 1) == X
    assert tucker(X, [Matrix.identity(d) for d in X.shape]) == X


@settings(max_examples=40, deadline=None)
@given(tensors(), st.data())
def test_mode_product_matches_unfolding(X, data):
    n = data.draw(st.integers(0, X.order - 1))
    rows = data.draw(st.integers(1, 3))
    pool = st.sampled_from([Fraction(x) for x in (-1, 0, 1, 2, Fraction(1, 3))])
    A = Matrix(rows, X.shape[n], tuple(data.draw(
        st.lists(pool, min_size=rows * X.shape[n], max_size=rows * X.shape[n]))))
    Y = mode_product(X, n, A)
    assert unfold(Y, n) == matmul(A, unfold(X, n))
