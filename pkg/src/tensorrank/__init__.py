"""Exact tensor rank functions and a harness for their axioms."""

from .linalg import RowBasis, independent_row_indices, kronecker, matmul, matrix_rank
from .ranks import (
    RANK_FUNCTIONS,
    MultilinearRank,
    RankFunctionId,
    ShrinkWitness,
    core_subtensor,
    is_rank_one,
    max_rank,
    mu_rank,
    multilinear_rank,
    pathological_rank,
    rank_witness_subtensor,
    s0_max,
    s1_max,
    shrink_mode,
    submax_rank,
)
from .tensor import (
    Matrix,
    ShapeError,
    Tensor,
    append_singleton,
    diagonal_tensor,
    drop_singleton,
    from_factors,
    identity_tensor,
    mode_product,
    pad_zeros,
    permute_indices,
    permute_modes,
    scale,
    subtensor,
    tucker,
    unfold,
)

__version__ = "0.1.0"
