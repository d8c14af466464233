"""Command-line interface.

Exit codes: 0 success, 1 axiom violation or golden mismatch, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import harness
from .ranks import (
    RANK_FUNCTIONS,
    RankFunctionId,
    core_steps,
    multilinear_rank,
    rank_witness_subtensor,
    shrink_mode,
)
from .serialize import (
    ParseError,
    dumps,
    loads_matrix,
    loads_tensor,
    matrix_to_dict,
    tensor_to_dict,
)
from .tensor import ShapeError, identity_tensor, mode_product, pad_zeros, unfold

MU_MAX_ENTRIES = 10_000
MU_MAX_ORDER = 6


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _tensor(path):
    return loads_tensor(_read(path))


def _mode(value: int, order: int) -> int:
    if not 1 <= value <= order:
        raise UsageError(f"--mode {value} out of range 1..{order}")
    return value - 1


def _functions(text: str) -> list[str]:
    names = [s.strip() for s in text.split(",") if s.strip()]
    bad = [n for n in names if n not in RANK_FUNCTIONS]
    if bad or not names:
        raise UsageError(f"unknown rank function(s): {', '.join(bad) or '(none)'}")
    return names


def cmd_rank(args) -> int:
    names = _functions(args.functions)
    X = _tensor(args.file)
    if "mu" in names and not args.force and (X.size > MU_MAX_ENTRIES or X.order > MU_MAX_ORDER):
        raise UsageError(
            f"mu needs an exponential subtensor search; refusing shape {list(X.shape)}"
            f" (limit {MU_MAX_ENTRIES} entries, order {MU_MAX_ORDER}); pass --force to override"
        )
    out = {}
    if not args.no_multilinear:
        out["multilinear"] = list(multilinear_rank(X))
    for name in names:
        out[name] = RANK_FUNCTIONS[name](X)
    print(dumps(out))
    return 0


def cmd_unfold(args) -> int:
    X = _tensor(args.file)
    print(dumps(matrix_to_dict(unfold(X, _mode(args.mode, X.order)))))
    return 0


def cmd_product(args) -> int:
    X = _tensor(args.file)
    A = loads_matrix(_read(args.matrix))
    n = _mode(args.mode, X.order)
    if A.cols != X.shape[n]:
        raise UsageError(
            f"mode {args.mode} has dimension {X.shape[n]} but the matrix has {A.cols} columns"
        )
    print(dumps(tensor_to_dict(mode_product(X, n, A))))
    return 0


def cmd_shrink(args) -> int:
    X = _tensor(args.file)
    if X.is_zero():
        raise UsageError("cannot shrink the zero tensor")
    if args.mode is not None:
        steps = [shrink_mode(X, _mode(args.mode, X.order))]
    else:
        steps = core_steps(X)
    out = {
        "steps": [{"mode": w.mode + 1, "kept": [i + 1 for i in w.kept_indices]} for w in steps],
        "core": tensor_to_dict(steps[-1].result),
    }
    print(dumps(out))
    return 0


def cmd_check(args) -> int:
    try:
        config = harness.GeneratorConfig(
            seed=args.seed, trials=args.trials, max_order=args.max_order, max_dim=args.max_dim,
            order_limit=max(4, args.max_order) if args.force else 4,
            dim_limit=max(6, args.max_dim) if args.force else 6,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    f = RANK_FUNCTIONS[args.function]
    verdicts = []
    if args.axioms in ("qzc", "both"):
        verdicts += harness.check_qzc(f, config, jobs=args.jobs)
    if args.axioms in ("tr", "both"):
        verdicts += harness.check_tr(f, config, jobs=args.jobs)
    print(json.dumps(harness.report(args.function, verdicts), indent=2))
    return 1 if any(v.status == "fail" for v in verdicts) else 0


def run_examples(functions=None, out=None) -> int:
    """Recompute the diagonal and slab counterexamples; return 0 iff every number matches."""
    fns = dict(RANK_FUNCTIONS, **(functions or {}))
    out = out or sys.stdout
    D = harness.DIAGONAL_EXAMPLE
    I23 = identity_tensor(2, 3)
    slab = pad_zeros(I23, 2, 1)
    Y, n = rank_witness_subtensor(D, RankFunctionId.SUBMAX)
    checks = [
        ("diagonal: multilinear rank of D", tuple(multilinear_rank(D)), (3, 3, 3)),
        ("diagonal: submax(D)", fns["submax"](D), 3),
        ("diagonal: mu(D)", fns["mu"](D), 2),
        ("slab: pathological(I_{2,3} padded in mode 3)", fns["pathological"](slab), 3),
        ("slab: pathological(I_{2,3})", fns["pathological"](I23), 2),
        ("tucker witness on D: (submax(Y), Y.shape[n], mode)",
         (fns["submax"](Y), Y.shape[n], n + 1), (3, 3, 1)),
    ]
    failed = 0
    for label, got, want in checks:
        ok = got == want
        failed += not ok
        print(f"{'ok  ' if ok else 'FAIL'} {label} = {got} (expected {want})", file=out)
    print(f"{len(checks) - failed}/{len(checks)} examples reproduced", file=out)
    return 1 if failed else 0


def cmd_examples(args) -> int:
    return run_examples()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tensorrank", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("rank", help="rank functions of a tensor")
    r.add_argument("file", help="tensor JSON file, or - for stdin")
    r.add_argument("--functions", default="max,submax,mu,pathological")
    r.add_argument("--no-multilinear", action="store_true")
    r.add_argument("--force", action="store_true", help="lift the size guard for mu")
    r.set_defaults(run=cmd_rank)

    u = sub.add_parser("unfold", help="mode-n unfolding")
    u.add_argument("file")
    u.add_argument("--mode", type=int, required=True, help="1-based mode")
    u.set_defaults(run=cmd_unfold)

    m = sub.add_parser("product", help="mode-n matrix product")
    m.add_argument("file")
    m.add_argument("--mode", type=int, required=True)
    m.add_argument("--matrix", required=True, help="matrix JSON file")
    m.set_defaults(run=cmd_product)

    s = sub.add_parser("shrink", help="drop dependent slabs mode by mode")
    s.add_argument("file")
    s.add_argument("--mode", type=int, help="shrink one mode only")
    s.set_defaults(run=cmd_shrink)

    c = sub.add_parser("check", help="run the axiom harness")
    c.add_argument("--function", required=True, choices=sorted(RANK_FUNCTIONS))
    c.add_argument("--axioms", choices=("qzc", "tr", "both"), default="both")
    c.add_argument("--trials", type=int, default=200)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--max-order", type=int, default=4)
    c.add_argument("--max-dim", type=int, default=4)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--force", action="store_true", help="allow bounds past order 4 / dim 6")
    c.set_defaults(run=cmd_check)

    e = sub.add_parser("examples", help="reproduce the worked examples")
    e.set_defaults(run=cmd_examples)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (UsageError, ParseError, ShapeError, ValueError) as exc:
        print(f"tensorrank {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
