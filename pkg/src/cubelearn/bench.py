"""Benchmark formula families and the query-count/timing harness.

Six parametric families of linear-arithmetic sets, from overlapping
diagonal chains of small squares to a genuinely unbounded implication,
plus a harness that runs selected (algorithm, search) cells over a
parameter range and appends one CSV row per cell.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass

from .errors import BudgetExceeded, FormulaError, LearnTimeout
from .formula import And, Atom, Formula, Implies, LinearTerm, Or, normalize
from .learners import LearnerConfig
from .solver import BruteBackend, SolverBackend, monadic_decompose


def _x(i: int) -> LinearTerm:
    return LinearTerm.variable(i)


def _c(n: int) -> LinearTerm:
    return LinearTerm.constant(n)


def _box2(i: int, lo0: int, hi0: int, lo1: int, hi1: int) -> Formula:
    del i
    return And((
        Atom(_x(0), ">=", _c(lo0)),
        Atom(_x(0), "<=", _c(hi0)),
        Atom(_x(1), ">=", _c(lo1)),
        Atom(_x(1), "<=", _c(hi1)),
    ))


def _diagonal_squares(k: int) -> Formula:
    # Squares of side 3 whose lower corners walk the diagonal.
    return Or(tuple(_box2(i, i, i + 2, i, i + 2) for i in range(k)))


def diagonal_restricted(k: int) -> tuple[int, Formula]:
    """Overlapping diagonal squares cut by the half-plane x + y <= k."""
    if k < 1:
        raise FormulaError("parameter must be >= 1")
    cap = Atom(_x(0).add(_x(1)), "<=", _c(k))
    return 2, And((_diagonal_squares(k), cap))


def cubes_dim_d(d: int) -> tuple[int, Formula]:
    """Ten overlapping hypercubes of side 3 along the diagonal of Z^d."""
    if d < 1:
        raise FormulaError("dimension must be >= 1")
    disjuncts = []
    for i in range(10):
        conj = []
        for kvar in range(d):
            conj.append(Atom(_x(kvar), ">=", _c(i)))
            conj.append(Atom(_x(kvar), "<=", _c(i + 2)))
        disjuncts.append(And(tuple(conj)))
    return d, Or(tuple(disjuncts))


def diagonal_unrestricted(k: int) -> tuple[int, Formula]:
    """The diagonal squares plus the anti-diagonal segment x + y = k."""
    if k < 1:
        raise FormulaError("parameter must be >= 1")
    segment = And((
        Atom(_x(0).add(_x(1)), "=", _c(k)),
        Atom(_x(0), ">=", _c(0)),
        Atom(_x(0), "<=", _c(k)),
    ))
    return 2, Or((_diagonal_squares(k), segment))


def big_cubes(k: int) -> tuple[int, Formula]:
    """k squares of side 101 stepping by 50, so neighbours overlap."""
    if k < 1:
        raise FormulaError("parameter must be >= 1")
    return 2, Or(tuple(
        _box2(i, 50 * i, 50 * i + 100, 50 * i, 50 * i + 100) for i in range(k)
    ))


def diagonal_points(k: int) -> tuple[int, Formula]:
    """The k+1 isolated points (0,0) .. (k,k)."""
    if k < 0:
        raise FormulaError("parameter must be >= 0")
    return 2, And((
        Atom(_x(0), "=", _x(1)),
        Atom(_x(0), ">=", _c(0)),
        Atom(_x(0), "<=", _c(k)),
    ))


def implies(k: int) -> tuple[int, Formula]:
    """x >= 0 implies (x + y >= k and y >= 0); unbounded in every direction."""
    if k < 1:
        raise FormulaError("parameter must be >= 1")
    f = Implies(
        Atom(_x(0), ">=", _c(0)),
        And((Atom(_x(0).add(_x(1)), ">=", _c(k)), Atom(_x(1), ">=", _c(0)))),
    )
    return 2, f


_FAMILIES = {
    "diagonal_restricted": diagonal_restricted,
    "cubes_dim_d": cubes_dim_d,
    "diagonal_unrestricted": diagonal_unrestricted,
    "big_cubes": big_cubes,
    "diagonal_points": diagonal_points,
    "implies": implies,
}
_ALIASES = {"implies_k": "implies"}

FAMILY_NAMES = tuple(_FAMILIES)


def canonical_family(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    key = _ALIASES.get(key, key)
    if key not in _FAMILIES:
        raise FormulaError(
            f"unknown benchmark family {name!r}; pick one of {FAMILY_NAMES}"
        )
    return key


def generate_benchmark(family: str, param: int) -> tuple[int, Formula]:
    """(dimension, normalized formula) for one family member."""
    dim, f = _FAMILIES[canonical_family(family)](param)
    return dim, normalize(f)


def benchmark_box(family: str, param: int) -> tuple[int, int]:
    """A default brute-teacher box wide enough for the family member."""
    key = canonical_family(family)
    if key == "cubes_dim_d":
        return (-2, 13)
    if key == "big_cubes":
        return (-2, 50 * (param - 1) + 102)
    if key == "implies":
        return (-4 * param - 2, 4 * param + 2)
    return (-2, param + 4)


# -- harness ---------------------------------------------------------------------

CSV_HEADER = (
    "benchmark,param,algorithm,search,eq_queries,mem_queries,sub_queries,"
    "refinements,cubes_out,wall_ms"
)

#: Default cells: the optimized overshooting learner with both elementary
#: step modes, and the maximal-cube learner under all three.
DEFAULT_VARIANTS = (
    ("overshoot_opt_addremove", "unary"),
    ("overshoot_opt_addremove", "binary"),
    ("maxcube", "unary"),
    ("maxcube", "binary"),
    ("maxcube", "optimized"),
)


@dataclass
class BenchRow:
    benchmark: str
    param: int
    algorithm: str
    search: str
    eq_queries: int | None
    mem_queries: int | None
    sub_queries: int | None
    refinements: int | None
    cubes_out: int | None
    wall_ms: int

    def as_csv(self) -> list:
        def cell(v):
            return "" if v is None else v

        return [
            self.benchmark, self.param, self.algorithm, self.search,
            cell(self.eq_queries), cell(self.mem_queries), cell(self.sub_queries),
            cell(self.refinements), cell(self.cubes_out), self.wall_ms,
        ]


def parse_param_range(text: str) -> list[int]:
    """"start:stop:step" (stop inclusive) or a single integer."""
    parts = text.split(":")
    try:
        nums = [int(p) for p in parts]
    except ValueError as exc:
        raise FormulaError(f"bad parameter range {text!r}") from exc
    if len(nums) == 1:
        return nums
    if len(nums) != 3:
        raise FormulaError(f"bad parameter range {text!r}; want start:stop:step")
    start, stop, step = nums
    if step < 1:
        raise FormulaError("step must be >= 1")
    if start > stop:
        raise FormulaError(f"empty parameter range {text!r}")
    return list(range(start, stop + 1, step))


def run_cell(
    family: str,
    param: int,
    algorithm: str,
    search: str,
    *,
    backend: SolverBackend | None = None,
    timeout_ms: int | None = None,
    max_iterations: int = 10_000,
) -> BenchRow:
    """Run one (family, param, algorithm, search) cell.

    Cells that exhaust a budget, hit an unbounded direction with a
    finite-only learner, or time out are marked with wall_ms = -1 and
    empty query counts, and the suite carries on.
    """
    family = canonical_family(family)
    dim, f = generate_benchmark(family, param)
    if backend is None:
        lo, hi = benchmark_box(family, param)
        backend = BruteBackend(lo, hi)
    cfg = LearnerConfig(
        algorithm=algorithm,
        strategy=search,
        max_iterations=max_iterations,
        allow_infinite=True,
    )
    if timeout_ms is not None:
        cfg.deadline = time.monotonic() + timeout_ms / 1000.0
    start = time.perf_counter()
    try:
        _, _, result = monadic_decompose(f, dim, cfg, backend)
    except (BudgetExceeded, LearnTimeout):
        return BenchRow(family, param, algorithm, search,
                        None, None, None, None, None, wall_ms=-1)
    wall_ms = int(round((time.perf_counter() - start) * 1000))
    return BenchRow(
        family, param, algorithm, search,
        eq_queries=result.stats.equivalence,
        mem_queries=result.stats.membership,
        sub_queries=result.stats.subset,
        refinements=result.refinements,
        cubes_out=len(result.hypothesis.cubes),
        wall_ms=wall_ms,
    )


def run_suite(
    family: str,
    params: list[int],
    csv_path: str,
    *,
    backend: SolverBackend | None = None,
    timeout_ms: int | None = None,
    max_iterations: int = 10_000,
    variants: tuple[tuple[str, str], ...] = DEFAULT_VARIANTS,
) -> list[BenchRow]:
    """Run every cell of a suite, appending rows to the CSV as they finish."""
    rows = []
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER.split(","))
        fh.flush()
        for param in params:
            for algorithm, search in variants:
                row = run_cell(
                    family, param, algorithm, search,
                    backend=backend, timeout_ms=timeout_ms,
                    max_iterations=max_iterations,
                )
                rows.append(row)
                writer.writerow(row.as_csv())
                fh.flush()
    return rows
