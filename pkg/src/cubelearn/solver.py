"""Satisfiability backends and monadic decomposition.

``solver_check`` answers "is this formula satisfiable, and if so at which
point" through one of two backends:

* ``BruteBackend`` -- vectorized enumeration of a finite integer box.
  Sound only relative to that box: a formula with no model inside it
  counts as unsatisfiable.  Models are lexicographically least.

* ``ExternalBackend`` -- a real solver spoken to over stdin/stdout in a
  small SMT-LIB2 dialect.  One process is spawned per query and receives
  a complete, stateless script; the model values are read back from
  ``get-value``.  Any command that runs a solver REPL works, e.g.
  ``z3 -in``.

``monadic_decompose`` wires a formula up as a teacher (membership by
evaluation, equivalence and subset by satisfiability of difference
formulas) and runs one of the cube learners over it.
"""

from __future__ import annotations

import os
import shlex
import subprocess
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, FormulaError, SolverError
from .formula import (
    And,
    Atom,
    Formula,
    Implies,
    LinearTerm,
    Not,
    Or,
    cube_union_to_formula,
    evaluate,
    formula_to_smt,
    parse_sexprs,
    _var_name,
)
from .geometry import Cube, CubeUnion, Point
from .learners import LearnerConfig, LearnResult, run_session
from .oracles import EquivalenceOracle, MembershipOracle, SubsetOracle

SOLVER_ENV_VAR = "CUBELEARN_SOLVER_CMD"


@dataclass(frozen=True)
class BruteBackend:
    """Enumerate [lo, hi]^dim; unsatisfiable means "no model in the box"."""

    lo: int
    hi: int
    point_budget: int = 2_000_000

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError("empty enumeration box")


@dataclass(frozen=True)
class ExternalBackend:
    command: tuple[str, ...]
    timeout: float = 120.0

    def __post_init__(self) -> None:
        if not self.command:
            raise ValueError("empty solver command")


SolverBackend = BruteBackend | ExternalBackend


def backend_from_spec(spec: str) -> SolverBackend:
    """Parse a teacher spec: ``brute:LO:HI`` or ``smt:<command line>``."""
    if spec.startswith("brute:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise FormulaError(f"bad brute teacher spec {spec!r}; want brute:LO:HI")
        try:
            lo, hi = int(parts[1]), int(parts[2])
        except ValueError as exc:
            raise FormulaError(f"bad brute teacher spec {spec!r}") from exc
        return BruteBackend(lo, hi)
    if spec.startswith("smt:"):
        cmd = tuple(shlex.split(spec[len("smt:"):]))
        if not cmd:
            raise FormulaError("empty solver command in teacher spec")
        return ExternalBackend(cmd)
    raise FormulaError(f"bad teacher spec {spec!r}; want brute:LO:HI or smt:\"cmd\"")


def default_backend() -> SolverBackend | None:
    cmd = os.environ.get(SOLVER_ENV_VAR)
    if cmd:
        return ExternalBackend(tuple(shlex.split(cmd)))
    return None


# -- brute enumeration ---------------------------------------------------------


def _term_array(t: LinearTerm, grids: list[np.ndarray]) -> np.ndarray:
    out = np.full(grids[0].shape, t.const, dtype=np.int64)
    for i, c in t.coeffs:
        out = out + c * grids[i]
    return out


def _formula_array(f: Formula, grids: list[np.ndarray]) -> np.ndarray:
    if isinstance(f, Atom):
        a = _term_array(f.lhs, grids)
        b = _term_array(f.rhs, grids)
        if f.rel == "<=":
            return a <= b
        if f.rel == ">=":
            return a >= b
        return a == b
    if isinstance(f, And):
        out = _formula_array(f.children[0], grids)
        for c in f.children[1:]:
            out &= _formula_array(c, grids)
        return out
    if isinstance(f, Or):
        out = _formula_array(f.children[0], grids)
        for c in f.children[1:]:
            out |= _formula_array(c, grids)
        return out
    if isinstance(f, Not):
        return ~_formula_array(f.child, grids)
    if isinstance(f, Implies):
        return ~_formula_array(f.left, grids) | _formula_array(f.right, grids)
    raise TypeError(f"not a formula: {f!r}")


def _brute_check(backend: BruteBackend, f: Formula, dim: int) -> Point | None:
    side = backend.hi - backend.lo + 1
    if side ** dim > backend.point_budget:
        raise BudgetExceeded(
            f"enumeration box [{backend.lo},{backend.hi}]^{dim} exceeds the "
            f"point budget of {backend.point_budget}"
        )
    axis = np.arange(backend.lo, backend.hi + 1, dtype=np.int64)
    grids = list(np.meshgrid(*([axis] * dim), indexing="ij"))
    sat = _formula_array(f, grids)
    flat = sat.ravel()  # C order == lexicographic order of points
    if not flat.any():
        return None
    idx = int(np.argmax(flat))
    coords = np.unravel_index(idx, sat.shape)
    return tuple(int(axis[c]) for c in coords)


# -- external solver -----------------------------------------------------------


def _script_prelude(dim: int) -> list[str]:
    lines = ["(set-logic QF_LIA)"]
    lines.extend(f"(declare-const {_var_name(i)} Int)" for i in range(dim))
    return lines


def _read_verdict(stdout) -> str:
    while True:
        line = stdout.readline()
        if line == "":
            raise SolverError("solver closed its output before answering")
        line = line.strip()
        if not line:
            continue
        if line.startswith("(error"):
            raise SolverError(f"solver reported an error: {line}")
        return line


def _read_balanced(stdout) -> str:
    text = ""
    depth = 0
    seen = False
    while True:
        line = stdout.readline()
        if line == "":
            raise SolverError("solver closed its output mid-model")
        text += line
        for ch in line:
            if ch == "(":
                depth += 1
                seen = True
            elif ch == ")":
                depth -= 1
        if seen and depth <= 0:
            return text


def _parse_model(text: str, dim: int) -> Point:
    try:
        exprs = parse_sexprs(text)
    except FormulaError as exc:
        raise SolverError(f"unparseable model {text!r}") from exc
    if len(exprs) != 1 or not isinstance(exprs[0], list):
        raise SolverError(f"unexpected model shape {text!r}")
    values: dict[str, int] = {}
    for entry in exprs[0]:
        if not (isinstance(entry, list) and len(entry) == 2):
            raise SolverError(f"unexpected model entry {entry!r}")
        name, val = entry
        if isinstance(val, list):
            if len(val) == 2 and val[0] == "-":
                num = -int(val[1])
            else:
                raise SolverError(f"unexpected model value {val!r}")
        else:
            try:
                num = int(val)
            except ValueError as exc:
                raise SolverError(f"unexpected model value {val!r}") from exc
        values[name] = num
    try:
        return tuple(values[_var_name(i)] for i in range(dim))
    except KeyError as exc:
        raise SolverError(f"model is missing a variable: {exc}") from exc


def _external_check(backend: ExternalBackend, f: Formula, dim: int) -> Point | None:
    try:
        proc = subprocess.Popen(
            backend.command,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            text=True,
        )
    except OSError as exc:
        raise SolverError(f"cannot start solver {backend.command!r}: {exc}") from exc
    try:
        script = _script_prelude(dim)
        script.append(f"(assert {formula_to_smt(f)})")
        script.append("(check-sat)")
        proc.stdin.write("\n".join(script) + "\n")
        proc.stdin.flush()
        verdict = _read_verdict(proc.stdout)
        if verdict == "unsat":
            model = None
        elif verdict == "sat":
            args = " ".join(_var_name(i) for i in range(dim))
            proc.stdin.write(f"(get-value ({args}))\n")
            proc.stdin.flush()
            model = _parse_model(_read_balanced(proc.stdout), dim)
        else:
            raise SolverError(f"solver answered {verdict!r}")
        try:
            proc.stdin.write("(exit)\n")
            proc.stdin.flush()
        except (BrokenPipeError, OSError):
            pass
        proc.wait(timeout=backend.timeout)
        return model
    except BrokenPipeError as exc:
        raise SolverError("solver closed its input unexpectedly") from exc
    except subprocess.TimeoutExpired as exc:
        raise SolverError("solver did not exit in time") from exc
    finally:
        if proc.poll() is None:
            proc.kill()
            proc.wait()


def solver_check(backend: SolverBackend, f: Formula, dim: int) -> Point | None:
    """A model of f (lex-least for the brute backend), or None if unsat."""
    if isinstance(backend, BruteBackend):
        return _brute_check(backend, f, dim)
    return _external_check(backend, f, dim)


# -- formula-backed oracles ------------------------------------------------------


def formula_membership(f: Formula, dim: int) -> MembershipOracle:
    return MembershipOracle(dim, lambda v: evaluate(f, v))


def formula_equivalence(f: Formula, dim: int, backend: SolverBackend) -> EquivalenceOracle:
    def check(h: CubeUnion) -> Point | None:
        fh = cube_union_to_formula(h)
        diff = Or((And((fh, Not(f))), And((f, Not(fh)))))
        return solver_check(backend, diff, dim)

    return EquivalenceOracle(dim, check)


def formula_subset(f: Formula, dim: int, backend: SolverBackend) -> SubsetOracle:
    def check(candidate: CubeUnion) -> bool:
        stray = And((cube_union_to_formula(candidate), Not(f)))
        return solver_check(backend, stray, dim) is None

    return SubsetOracle(dim, check)


def monadic_decompose(
    f: Formula,
    dim: int,
    cfg: LearnerConfig,
    backend: SolverBackend,
) -> tuple[CubeUnion, Formula, LearnResult]:
    """Learn a union of cubes equal (modulo the backend's box, if brute)
    to the set defined by f, and return it with its monadic formula."""
    try:
        result = run_session(
            cfg,
            membership=formula_membership(f, dim),
            equivalence=formula_equivalence(f, dim, backend),
            subset=formula_subset(f, dim, backend),
        )
    except BudgetExceeded as exc:
        raise BudgetExceeded(f"no decomposition found within budget: {exc}") from exc
    return result.hypothesis, cube_union_to_formula(result.hypothesis), result
