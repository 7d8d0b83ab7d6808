"""Command line interface.

Three subcommands:

* ``learn`` -- run a learner against an explicit cube-union target held
  by a ground-truth teacher.
* ``mondec`` -- parse a linear-arithmetic formula and learn an equivalent
  union of cubes (a monadic decomposition) via a satisfiability backend.
* ``bench`` -- run a benchmark family over a parameter range and write
  per-cell query counts and timings to CSV.

Exit codes: 0 success, 2 input/parse error, 3 oracle or solver failure,
4 budget exhausted or unbounded direction, 5 timeout.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bench import FAMILY_NAMES, parse_param_range, run_suite
from .errors import (
    BudgetExceeded,
    FormulaError,
    LearnTimeout,
    ProtocolError,
    SolverError,
)
from .formula import formula_to_smt, parse_formula, to_script
from .geometry import CubeUnion
from .learners import ALGORITHMS, LearnerConfig, run_session
from .oracles import GroundTruthTeacher
from .search import SearchStrategy
from .solver import backend_from_spec, default_backend, monadic_decompose

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_ORACLE = 3
EXIT_BUDGET = 4
EXIT_TIMEOUT = 5

_ALGORITHM_ALIASES = {
    "overshoot_addremove_opt": "overshoot_opt_addremove",
    "overshoot_sym_opt": "overshoot_opt_sym",
}


def _algorithm(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    key = _ALGORITHM_ALIASES.get(key, key)
    if key not in ALGORITHMS:
        raise FormulaError(f"unknown algorithm {name!r}; pick one of {ALGORITHMS}")
    return key


def _strategy(name: str) -> SearchStrategy:
    try:
        return SearchStrategy.parse(name)
    except ValueError as exc:
        raise FormulaError(str(exc)) from exc


def _load_target(path: str) -> CubeUnion:
    try:
        with open(path) as fh:
            return CubeUnion.from_dict(json.load(fh))
    except OSError as exc:
        raise FormulaError(f"cannot read {path}: {exc}") from exc
    except (json.JSONDecodeError, ValueError) as exc:
        raise FormulaError(f"bad cube-union JSON in {path}: {exc}") from exc


def _load_script(path: str) -> list[tuple[int, ...]]:
    try:
        with open(path) as fh:
            data = json.load(fh)
        return [tuple(int(x) for x in p) for p in data]
    except OSError as exc:
        raise FormulaError(f"cannot read {path}: {exc}") from exc
    except (json.JSONDecodeError, TypeError, ValueError) as exc:
        raise FormulaError(f"bad counterexample script in {path}: {exc}") from exc


def _cmd_learn(args: argparse.Namespace) -> int:
    target = _load_target(args.target)
    algorithm = _algorithm(args.algorithm)

    policy = args.counterexample
    script = None
    if policy.startswith("script:"):
        script = _load_script(policy[len("script:"):])
        policy = "script"
    else:
        policy = policy.replace("-", "_")
    if algorithm == "infinity_meq" and policy != "min_corner":
        raise FormulaError(
            "infinity-meq needs minimal-corner counterexamples; "
            "pass --counterexample min-corner"
        )

    strategy = _strategy(args.search)
    teacher = GroundTruthTeacher(target, policy, script=script, strategy=strategy)
    cfg = LearnerConfig(
        algorithm=algorithm,
        strategy=strategy,
        max_iterations=args.max_iterations,
        allow_infinite=not args.finite_only,
    )
    result = run_session(
        cfg,
        membership=teacher.membership,
        equivalence=teacher.equivalence,
        subset=teacher.subset,
    )
    print(json.dumps({
        "hypothesis": result.hypothesis.to_dict(),
        "stats": result.stats.as_dict(),
        "iterations": result.iterations,
        "refinements": result.refinements,
    }, indent=2))
    return EXIT_OK


def _cmd_mondec(args: argparse.Namespace) -> int:
    try:
        with open(args.formula) as fh:
            text = fh.read()
    except OSError as exc:
        raise FormulaError(f"cannot read {args.formula}: {exc}") from exc
    dim, f = parse_formula(text)

    if args.teacher:
        backend = backend_from_spec(args.teacher)
    else:
        backend = default_backend()
        if backend is None:
            raise FormulaError(
                "no teacher configured; pass --teacher brute:LO:HI or "
                "smt:\"cmd\", or set CUBELEARN_SOLVER_CMD"
            )

    cfg = LearnerConfig(
        algorithm=_algorithm(args.algorithm),
        strategy=_strategy(args.search),
        max_iterations=args.max_iterations,
        allow_infinite=not args.finite_only,
    )
    union, monadic, result = monadic_decompose(f, dim, cfg, backend)

    smt_text = to_script(monadic, dim)
    if args.output:
        base = args.output
        for suffix in (".json", ".smt2"):
            if base.endswith(suffix):
                base = base[: -len(suffix)]
        with open(base + ".json", "w") as fh:
            fh.write(union.to_json(indent=2) + "\n")
        with open(base + ".smt2", "w") as fh:
            fh.write(smt_text)
    print(json.dumps({
        "dim": dim,
        "hypothesis": union.to_dict(),
        "formula": formula_to_smt(monadic),
        "stats": result.stats.as_dict(),
        "iterations": result.iterations,
        "refinements": result.refinements,
    }, indent=2))
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    params = parse_param_range(args.param)
    backend = backend_from_spec(args.teacher) if args.teacher else None
    run_suite(
        args.suite,
        params,
        args.csv,
        backend=backend,
        timeout_ms=args.timeout_ms,
        max_iterations=args.max_iterations,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubelearn",
        description="Exact learning of unions of integer cubes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_learn = sub.add_parser("learn", help="learn an explicit cube-union target")
    p_learn.add_argument("--target", required=True, help="cube-union JSON file")
    p_learn.add_argument("--algorithm", required=True)
    p_learn.add_argument("--search", default="binary",
                         help="unary | binary | optimized")
    p_learn.add_argument("--counterexample", default="lex-min",
                         help="lex-min | min-corner | script:<file>")
    p_learn.add_argument("--max-iterations", type=int, default=100_000)
    p_learn.add_argument("--finite-only", action="store_true",
                         help="never emit infinite bounds")
    p_learn.set_defaults(fn=_cmd_learn)

    p_mondec = sub.add_parser("mondec", help="monadically decompose a formula")
    p_mondec.add_argument("--formula", required=True, help="SMT-LIB2 input file")
    p_mondec.add_argument("--teacher", default=None,
                          help='brute:LO:HI or smt:"cmd args"')
    p_mondec.add_argument("--algorithm", default="maxcube")
    p_mondec.add_argument("--search", default="optimized")
    p_mondec.add_argument("--max-iterations", type=int, default=10_000)
    p_mondec.add_argument("--output", default=None,
                          help="write <out>.json and <out>.smt2")
    p_mondec.add_argument("--finite-only", action="store_true")
    p_mondec.set_defaults(fn=_cmd_mondec)

    p_bench = sub.add_parser("bench", help="run a benchmark family")
    p_bench.add_argument("--suite", required=True,
                         help=f"one of {', '.join(FAMILY_NAMES)}")
    p_bench.add_argument("--param", required=True, help="start:stop:step or a single value")
    p_bench.add_argument("--csv", required=True, help="output CSV path")
    p_bench.add_argument("--timeout-ms", type=int, default=None)
    p_bench.add_argument("--teacher", default=None,
                         help="override the default brute teacher")
    p_bench.add_argument("--max-iterations", type=int, default=10_000)
    p_bench.set_defaults(fn=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except FormulaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ProtocolError, SolverError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except LearnTimeout as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT


if __name__ == "__main__":
    sys.exit(main())
