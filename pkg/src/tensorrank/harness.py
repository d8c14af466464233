"""Falsification harness for the QZC and TR rank-function axioms.

Every trial derives its randomness from ``(seed, axiom, trial index)``, so a
verdict does not depend on evaluation order or on how many worker processes
run the trials.  A failing trial is kept as a :class:`Witness` that replays to
the same observed values.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .linalg import matmul, matrix_rank
from .ranks import RANK_FUNCTIONS, is_rank_one
from .serialize import (
    matrix_from_dict,
    matrix_to_dict,
    rational_to_str,
    parse_rational,
    tensor_from_dict,
    tensor_to_dict,
)
from .tensor import (
    Matrix,
    Tensor,
    append_singleton,
    diagonal_tensor,
    from_factors,
    identity_tensor,
    mode_product,
    pad_zeros,
    permute_modes,
    scale,
    subtensor,
)

RankFunction = Callable[[Tensor], int]

DEFAULT_POOL = tuple(Fraction(x) for x in (-2, -1, 0, 1, 2, Fraction(1, 2)))
QZC_AXIOMS = ("QZC1", "QZC2", "QZC3", "QZC4", "QZC5", "QZC6")
# TR-DIAG and TR-SLAB are consequences of TR1-TR6: a diagonal tensor with D
# nonzero entries has rank >= D, and appending zero slabs leaves rank unchanged.
TR_AXIOMS = ("TR1", "TR2", "TR3", "TR4", "TR5", "TR6", "TR-DIAG", "TR-SLAB")

RELATIONS = {
    "QZC1": "f(X) == 0 iff X == 0, and f(X) == 1 iff X has rank one",
    "QZC2": "f(I_{M,N}) == M for N >= 2",
    "QZC3": "f(X) == rank of the matrix associated to X (shape I1 x I2 x 1 x ... x 1)",
    "QZC4": "f(alpha * X) == f(X) for alpha != 0",
    "QZC5": "f(permute_modes(X, perm)) == f(X)",
    "QZC6": "f(subtensor(X, selector)) <= f(X)",
    "TR1": "f(X) == 1 iff X has rank one",
    "TR2": "f(I_{M,N}) == M for N >= 2",
    "TR3": "f(X) == matrix_rank(X) for a matrix X",
    "TR4": "f(append_singleton(X)) == f(X)",
    "TR5": "f(permute_modes(X, perm)) == f(X)",
    "TR6": "f(mode_product(X, mode, A)) <= f(X)",
    "TR-DIAG": "f(X) >= number of nonzero diagonal entries, X diagonal of order >= 2",
    "TR-SLAB": "f(pad_zeros(X, mode, count)) == f(X)",
}


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    trials: int = 200
    max_order: int = 4
    max_dim: int = 4
    entry_pool: tuple[Fraction, ...] = DEFAULT_POOL
    order_limit: int = 4
    dim_limit: int = 6

    def __post_init__(self):
        pool = tuple(Fraction(x) for x in self.entry_pool)
        object.__setattr__(self, "entry_pool", pool)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 1 <= self.max_order <= self.order_limit:
            raise ValueError(f"max_order must be in 1..{self.order_limit}")
        if not 1 <= self.max_dim <= self.dim_limit:
            raise ValueError(f"max_dim must be in 1..{self.dim_limit}")
        if not any(pool):
            raise ValueError("entry pool must contain a nonzero value")

    @property
    def nonzero_pool(self) -> tuple[Fraction, ...]:
        return tuple(x for x in self.entry_pool if x)

    def rng(self, *labels) -> random.Random:
        return random.Random("/".join(str(x) for x in (self.seed,) + labels))


@dataclass
class Witness:
    axiom: str
    function: str
    relation: str
    case: dict
    observed: dict


@dataclass
class AxiomVerdict:
    axiom: str
    status: str  # "pass" | "fail" | "not-applicable"
    trials: int
    witness: Witness | None = None

    def __post_init__(self):
        if self.status == "fail" and self.witness is None:
            raise ValueError("a failing verdict needs a witness")


# ---------------------------------------------------------------- generation

def random_tensor(rng: random.Random, shape, pool) -> Tensor:
    return Tensor.from_function(shape, lambda _: rng.choice(pool))


def _random_shape(rng, config, min_order=1):
    order = rng.randint(min_order, max(min_order, config.max_order))
    return tuple(rng.randint(1, config.max_dim) for _ in range(order))


def _nonzero_vector(rng, length, pool, nonzero):
    v = [rng.choice(pool) for _ in range(length)]
    if not any(v):
        v[rng.randrange(length)] = rng.choice(nonzero)
    return v


def _cp_tensor(rng, shape, config, terms):
    pool, nz = config.entry_pool, config.nonzero_pool
    return from_factors([
        [_nonzero_vector(rng, d, pool, nz) for d in shape] for _ in range(terms)
    ])


def _diagonal(rng, config, min_order=1):
    M = rng.randint(1, config.max_dim)
    N = rng.randint(min_order, max(min_order, config.max_order))
    return diagonal_tensor([rng.choice(config.entry_pool) for _ in range(M)], N)


FAMILIES = ("uniform", "diagonal", "identity", "cp", "padded", "singleton")


def _family_tensor(rng, config, family) -> Tensor:
    pool = config.entry_pool
    if family == "uniform":
        return random_tensor(rng, _random_shape(rng, config), pool)
    if family == "diagonal":
        return _diagonal(rng, config)
    if family == "identity":
        return identity_tensor(rng.randint(1, config.max_dim), rng.randint(1, config.max_order))
    if family == "cp":
        return _cp_tensor(rng, _random_shape(rng, config), config, rng.randint(1, 3))
    if family == "padded":
        base = _family_tensor(rng, config, rng.choice(("uniform", "diagonal", "identity", "cp")))
        room = [n for n, d in enumerate(base.shape) if d < config.max_dim]
        if not room:
            return base
        n = rng.choice(room)
        return pad_zeros(base, n, rng.randint(1, config.max_dim - base.shape[n]))
    if family == "singleton":
        base = _family_tensor(rng, config, rng.choice(("uniform", "diagonal", "identity", "cp")))
        if base.order >= config.max_order:
            return base
        Y = append_singleton(base)
        perm = list(range(Y.order))
        rng.shuffle(perm)
        return permute_modes(Y, perm)
    raise ValueError(f"unknown family {family!r}")


def tensor_for_trial(config: GeneratorConfig, i: int) -> Tensor:
    rng = config.rng("gen", i)
    slot = i % 100
    if slot == 0:
        return Tensor.zeros(_random_shape(rng, config))
    if slot == 1:
        return _cp_tensor(rng, _random_shape(rng, config), config, 1)
    return _family_tensor(rng, config, rng.choice(FAMILIES))


def generate(config: GeneratorConfig) -> Iterator[Tensor]:
    """Deterministic stream of ``config.trials`` tensors from mixed families."""
    for i in range(config.trials):
        yield tensor_for_trial(config, i)


def random_matrix(rng, rows, cols, config) -> Matrix:
    pool = config.entry_pool
    if rng.random() < 0.5:
        return Matrix.from_rows([[rng.choice(pool) for _ in range(cols)] for _ in range(rows)])
    k = rng.randint(1, max(1, min(rows, cols)))
    B = Matrix.from_rows([[rng.choice(pool) for _ in range(k)] for _ in range(rows)])
    C = Matrix.from_rows([[rng.choice(pool) for _ in range(cols)] for _ in range(k)])
    return matmul(B, C)


def _invertible_matrix(rng, n, config) -> Matrix:
    for _ in range(20):
        A = Matrix.from_rows([[rng.choice(config.entry_pool) for _ in range(n)] for _ in range(n)])
        if matrix_rank(A) == n:
            return A
    nz = config.nonzero_pool
    return Matrix.from_rows([[rng.choice(nz) if i == j else 0 for j in range(n)] for i in range(n)])


def _rank_deficient_matrix(rng, n, config) -> Matrix:
    if n == 1:
        return Matrix.zeros(1, 1)
    k = rng.randint(1, n - 1)
    pool = config.entry_pool
    B = Matrix.from_rows([[rng.choice(pool) for _ in range(k)] for _ in range(n)])
    C = Matrix.from_rows([[rng.choice(pool) for _ in range(n)] for _ in range(k)])
    return matmul(B, C)


def tr6_matrix(rng, n_cols, config) -> Matrix:
    kind = rng.choice(("invertible", "deficient", "tall", "wide"))
    if kind == "invertible":
        return _invertible_matrix(rng, n_cols, config)
    if kind == "deficient":
        return _rank_deficient_matrix(rng, n_cols, config)
    if kind == "tall":
        rows = min(config.dim_limit, n_cols + rng.randint(1, 2))
    else:
        rows = rng.randint(1, max(1, n_cols - 1))
    return random_matrix(rng, rows, n_cols, config)


# --------------------------------------------------------------- evaluation

def _rank_one_check(f, X, with_zero):
    r = f(X)
    zero, one = X.is_zero(), is_rank_one(X)
    ok = (r == 1) == one
    if with_zero:
        ok = ok and (r == 0) == zero
    return ok, {"f(X)": r, "is_zero": zero, "is_rank_one": one}


def _identity_check(f, case):
    r = f(identity_tensor(case["M"], case["N"]))
    return r == case["M"], {"f(I)": r, "M": case["M"]}


def _matrix_check(f, case):
    X = case["X"]
    r = f(X)
    expected = matrix_rank(Matrix(X.shape[0], X.shape[1], X.entries))
    return r == expected, {"f(X)": r, "matrix_rank": expected}


def _equal_check(f, X, Y):
    rx, ry = f(X), f(Y)
    return rx == ry, {"f(X)": rx, "f(Y)": ry}


def _le_check(f, X, Y):
    rx, ry = f(X), f(Y)
    return ry <= rx, {"f(X)": rx, "f(Y)": ry}


def _diag_check(f, case):
    X = case["X"]
    D = sum(1 for idx, v in X.items() if v and len(set(idx)) == 1)
    r = f(X)
    return r >= D, {"f(X)": r, "nonzero_diagonal": D}


EVALUATORS = {
    "QZC1": lambda f, c: _rank_one_check(f, c["X"], True),
    "QZC2": _identity_check,
    "QZC3": _matrix_check,
    "QZC4": lambda f, c: _equal_check(f, c["X"], scale(c["X"], c["alpha"])),
    "QZC5": lambda f, c: _equal_check(f, c["X"], permute_modes(c["X"], c["perm"])),
    "QZC6": lambda f, c: _le_check(f, c["X"], subtensor(c["X"], c["selector"])),
    "TR1": lambda f, c: _rank_one_check(f, c["X"], False),
    "TR2": _identity_check,
    "TR3": _matrix_check,
    "TR4": lambda f, c: _equal_check(f, c["X"], append_singleton(c["X"])),
    "TR5": lambda f, c: _equal_check(f, c["X"], permute_modes(c["X"], c["perm"])),
    "TR6": lambda f, c: _le_check(f, c["X"], mode_product(c["X"], c["mode"], c["A"])),
    "TR-DIAG": _diag_check,
    "TR-SLAB": lambda f, c: _equal_check(f, c["X"], pad_zeros(c["X"], c["mode"], c["count"])),
}


def evaluate(axiom: str, f: RankFunction, case: dict) -> tuple[bool, dict]:
    return EVALUATORS[axiom](f, case)


DIAGONAL_EXAMPLE = diagonal_tensor([1, 1, -1], 3)
SLAB_CASE = {"X": identity_tensor(2, 3), "mode": 2, "count": 1}


def _stream_case(axiom, config, i):
    X = tensor_for_trial(config, i)
    rng = config.rng(axiom, i)
    if axiom in ("QZC1", "TR1", "TR4"):
        return {"X": X}
    if axiom == "QZC4":
        return {"X": X, "alpha": rng.choice(config.nonzero_pool)}
    if axiom in ("QZC5", "TR5"):
        return {"X": X, "perm": rng.sample(range(X.order), X.order)}
    if axiom == "QZC6":
        sel = [sorted(rng.sample(range(d), rng.randint(1, d))) for d in X.shape]
        return {"X": X, "selector": sel}
    if axiom == "TR6":
        n = rng.randrange(X.order)
        return {"X": X, "mode": n, "A": tr6_matrix(rng, X.shape[n], config)}
    if axiom == "TR-SLAB":
        return {"X": X, "mode": rng.randrange(X.order), "count": rng.randint(1, 2)}
    raise ValueError(axiom)


def cases_for(axiom: str, config: GeneratorConfig) -> list[dict]:
    """Every case the harness runs for ``axiom``, known counterexamples first."""
    if axiom in ("QZC2", "TR2"):
        return [{"M": M, "N": N}
                for N in range(2, max(2, config.max_order) + 1)
                for M in range(1, config.max_dim + 1)]
    if axiom in ("QZC3", "TR3"):
        out = []
        for i in range(config.trials):
            rng = config.rng(axiom, i)
            A = random_matrix(rng, rng.randint(1, config.max_dim), rng.randint(1, config.max_dim), config)
            shape = (A.rows, A.cols)
            if axiom == "QZC3":
                shape += (1,) * rng.randint(0, max(0, config.max_order - 2))
            out.append({"X": Tensor(shape, A.entries)})
        return out
    if axiom == "TR-DIAG":
        return [{"X": DIAGONAL_EXAMPLE}] + [
            {"X": _diagonal(config.rng(axiom, i), config, min_order=2)}
            for i in range(config.trials)
        ]
    cases = [_stream_case(axiom, config, i) for i in range(config.trials)]
    if axiom == "TR-SLAB":
        cases.insert(0, dict(SLAB_CASE))
    return cases


def _function_name(f) -> str:
    for name, g in RANK_FUNCTIONS.items():
        if g is f:
            return name
    return getattr(f, "__name__", repr(f))


def _resolve(f) -> RankFunction:
    return RANK_FUNCTIONS[f] if isinstance(f, str) else f


def _run_one(args):
    axiom, f, case = args
    try:
        return evaluate(axiom, f, case)
    except NotImplementedError:
        return None


def run_axiom(axiom: str, f, config: GeneratorConfig, jobs: int = 1) -> AxiomVerdict:
    f = _resolve(f)
    cases = cases_for(axiom, config)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, [(axiom, f, c) for c in cases], chunksize=8))
    else:
        results = None
    evaluated = 0
    for i, case in enumerate(cases):
        res = results[i] if results is not None else _run_one((axiom, f, case))
        if res is None:
            continue
        evaluated += 1
        ok, observed = res
        if not ok:
            w = Witness(axiom, _function_name(f), RELATIONS[axiom], case, observed)
            return AxiomVerdict(axiom, "fail", i + 1, w)
    if evaluated == 0:
        return AxiomVerdict(axiom, "not-applicable", 0)
    return AxiomVerdict(axiom, "pass", len(cases))


def check_qzc(f, config: GeneratorConfig | None = None, jobs: int = 1) -> list[AxiomVerdict]:
    config = config or GeneratorConfig()
    return [run_axiom(a, f, config, jobs) for a in QZC_AXIOMS]


def check_tr(f, config: GeneratorConfig | None = None, jobs: int = 1) -> list[AxiomVerdict]:
    config = config or GeneratorConfig()
    return [run_axiom(a, f, config, jobs) for a in TR_AXIOMS]


def replay(witness: Witness, f: RankFunction | None = None) -> dict:
    """Recompute a witness's observed values."""
    f = f or RANK_FUNCTIONS[witness.function]
    ok, observed = evaluate(witness.axiom, f, witness.case)
    return observed


def known_counterexamples() -> list[tuple[str, Witness]]:
    """The diagonal-bound failure of ``mu`` and the zero-slab failure of ``pathological``."""
    out = []
    for name, axiom, fname, case in (
        ("diagonal", "TR-DIAG", "mu", {"X": DIAGONAL_EXAMPLE}),
        ("slab", "TR-SLAB", "pathological", dict(SLAB_CASE)),
    ):
        ok, observed = evaluate(axiom, RANK_FUNCTIONS[fname], case)
        out.append((name, Witness(axiom, fname, RELATIONS[axiom], case, observed)))
    return out


# ------------------------------------------------------------------ reports

_ONE_BASED = ("mode",)


def case_to_dict(case: dict) -> dict:
    out = {}
    for key, value in case.items():
        if isinstance(value, Tensor):
            out[key] = tensor_to_dict(value)
        elif isinstance(value, Matrix):
            out[key] = matrix_to_dict(value)
        elif isinstance(value, Fraction):
            out[key] = rational_to_str(value)
        elif key == "perm":
            out[key] = [p + 1 for p in value]
        elif key == "selector":
            out[key] = [[i + 1 for i in idx] for idx in value]
        elif key in _ONE_BASED:
            out[key] = value + 1
        else:
            out[key] = value
    return out


def case_from_dict(doc: dict) -> dict:
    out = {}
    for key, value in doc.items():
        if key == "X":
            out[key] = tensor_from_dict(value)
        elif key == "A":
            out[key] = matrix_from_dict(value)
        elif key == "alpha":
            out[key] = parse_rational(value)
        elif key == "perm":
            out[key] = [p - 1 for p in value]
        elif key == "selector":
            out[key] = [[i - 1 for i in idx] for idx in value]
        elif key in _ONE_BASED:
            out[key] = value - 1
        else:
            out[key] = value
    return out


def witness_to_dict(w: Witness) -> dict:
    return {
        "axiom": w.axiom,
        "function": w.function,
        "relation": w.relation,
        "case": case_to_dict(w.case),
        "observed": dict(w.observed),
    }


def witness_from_dict(doc: dict) -> Witness:
    return Witness(doc["axiom"], doc["function"], doc["relation"],
                   case_from_dict(doc["case"]), dict(doc["observed"]))


def report(function: str, verdicts: Sequence[AxiomVerdict]) -> dict:
    axioms = []
    for v in verdicts:
        entry = {"id": v.axiom, "status": v.status, "trials": v.trials}
        if v.witness is not None:
            entry["witness"] = witness_to_dict(v.witness)
        axioms.append(entry)
    return {"function": function, "axioms": axioms}
