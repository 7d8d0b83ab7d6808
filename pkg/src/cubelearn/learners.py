"""Exact learners for unions of integer cubes.

Three families:

* ``learn_cubes`` -- membership + equivalence learners that may overshoot:
  each counterexample is widened to a cube spanned by a minimal and a
  maximal corner of the set still to be fixed, and that cube is added,
  removed, or symmetric-differenced into the hypothesis.  The optimized
  variants remember every minimal corner seen and exclude its upward
  shadow from later maximal-corner searches, which is what pins the
  number of refinements to the abstract grid of the target.

* ``learn_max_cube`` -- subset + equivalence learner that only ever adds
  maximal contained cubes, so the hypothesis is a subset of the target at
  every step.  With ``allow_infinite`` it detects unbounded axes with a
  single extra subset query each.

* ``learn_cubes_infinity_meq`` -- membership + equivalence learner for
  targets with infinite bounds.  Searches run inside a growing inf-norm
  ball; corner coordinates that land on the ball's rim are clamped
  outward to +-inf.  Its equivalence oracle must return minimal corners
  of the symmetric difference (the teacher's ``min_corner`` policy),
  otherwise refinements are not guaranteed to make progress.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterator

from .errors import BudgetExceeded, LearnTimeout, ProtocolError
from .geometry import Cube, CubeUnion, NEG_INF, POS_INF, Point
from .oracles import (
    EquivalenceOracle,
    MembershipOracle,
    SubsetOracle,
    ball_oracle,
    difference_oracle,
    exclusion_oracle,
    membership_of,
    symmetric_difference_oracle,
)
from .search import SearchStrategy, find_max_corner, find_max_inc_corner, \
    find_min_corner, find_min_inc_corner

OVERSHOOT_ALGORITHMS = (
    "overshoot_sym",
    "overshoot_addremove",
    "overshoot_opt_sym",
    "overshoot_opt_addremove",
)
ALGORITHMS = OVERSHOOT_ALGORITHMS + ("maxcube", "infinity_meq")


@dataclass
class LearnerConfig:
    algorithm: str = "overshoot_opt_addremove"
    strategy: SearchStrategy = field(default_factory=SearchStrategy.binary)
    max_iterations: int = 100_000
    allow_infinite: bool = True
    record_trace: bool = False
    max_probes: int | None = 1_000_000
    max_doublings: int = 64
    deadline: float | None = None  # absolute time.monotonic() value

    def __post_init__(self) -> None:
        if isinstance(self.strategy, str):
            self.strategy = SearchStrategy.parse(self.strategy)
        if self.algorithm not in ALGORITHMS:
            raise ValueError(
                f"unknown algorithm {self.algorithm!r}; pick one of {ALGORITHMS}"
            )


@dataclass
class QueryStats:
    membership: int = 0
    equivalence: int = 0
    subset: int = 0
    corner: int = 0
    breakdown: dict[str, int] = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "membership": self.membership,
            "equivalence": self.equivalence,
            "subset": self.subset,
            "corner": self.corner,
        }
        if self.breakdown:
            out["breakdown"] = dict(self.breakdown)
        return out


@dataclass
class RefineStep:
    counterexample: Point
    cube: Cube
    op: str  # "add" | "remove" | "symdiff"
    hypothesis: CubeUnion  # state after the step
    visited: frozenset[Point]


@dataclass
class LearnResult:
    hypothesis: CubeUnion
    stats: QueryStats
    iterations: int  # equivalence rounds, including the final "done"
    refinements: int
    trace: list[RefineStep] | None = None


class VisitedCorners:
    """Set of minimal corners already consumed by an optimized learner.

    Re-inserting a corner would mean the exclusion argument failed, so it
    is treated as a contract violation rather than silently ignored.
    """

    def __init__(self) -> None:
        self._points: set[Point] = set()

    def add(self, v: Point) -> None:
        if v in self._points:
            raise ProtocolError(f"minimal corner {v} visited twice")
        self._points.add(v)

    def __contains__(self, v: Point) -> bool:
        return v in self._points

    def __iter__(self) -> Iterator[Point]:
        return iter(self._points)

    def __len__(self) -> int:
        return len(self._points)

    @property
    def points(self) -> set[Point]:
        return self._points

    def snapshot(self) -> frozenset[Point]:
        return frozenset(self._points)


def _check_deadline(cfg: LearnerConfig) -> None:
    if cfg.deadline is not None and time.monotonic() > cfg.deadline:
        raise LearnTimeout("wall-clock deadline expired")


def _spent(phase: str, stats: QueryStats, oracle, before: int) -> None:
    stats.breakdown[phase] = stats.breakdown.get(phase, 0) + oracle.count - before


def learn_cubes(
    phi: MembershipOracle,
    psi: EquivalenceOracle,
    cfg: LearnerConfig,
    *,
    corner_oracle=None,
) -> LearnResult:
    """Overshooting membership+equivalence learner (four variants).

    Only terminates on targets that are finite unions of finite cubes;
    an unbounded target trips the corner-search guards instead.
    """
    if cfg.algorithm not in OVERSHOOT_ALGORITHMS:
        raise ValueError(f"learn_cubes cannot run {cfg.algorithm!r}")
    optimized = "_opt_" in cfg.algorithm
    symmetric = cfg.algorithm.endswith("sym")
    dim = phi.dim
    guards = dict(max_probes=cfg.max_probes, max_doublings=cfg.max_doublings)

    h = CubeUnion.empty(dim)
    visited = VisitedCorners()
    stats = QueryStats()
    trace: list[RefineStep] | None = [] if cfg.record_trace else None
    phi0, psi0 = phi.count, psi.count
    corner0 = corner_oracle.count if corner_oracle is not None else 0
    refinements = 0

    for rounds in range(1, cfg.max_iterations + 1):
        _check_deadline(cfg)
        v = psi(h)
        if v is None:
            stats.membership = phi.count - phi0
            stats.equivalence = psi.count - psi0
            if corner_oracle is not None:
                stats.corner = corner_oracle.count - corner0
            return LearnResult(h, stats, rounds, refinements, trace)

        h_member = membership_of(h)
        if symmetric:
            space = symmetric_difference_oracle(phi, h_member)
            op = "symdiff"
        else:
            before = phi.count
            positive = phi(v)
            _spent("branch_test", stats, phi, before)
            if positive:
                space = difference_oracle(phi, h_member)
                op = "add"
            else:
                space = difference_oracle(h_member, phi)
                op = "remove"

        if optimized:
            max_space_for = lambda m: exclusion_oracle(space, visited.points, m)
        else:
            max_space_for = lambda m: space

        if corner_oracle is not None:
            vmin, vmax = corner_oracle.query(v, space, max_space_for)
        else:
            before = phi.count
            vmin = find_min_corner(v, space, cfg.strategy, **guards)
            _spent("min_search", stats, phi, before)
            before = phi.count
            # The optimized variants restart the upward walk at the minimal
            # corner (it is never inside the excluded shadow); the plain
            # ones walk up from the counterexample itself.
            max_start = vmin if optimized else v
            vmax = find_max_corner(max_start, max_space_for(vmin), cfg.strategy, **guards)
            _spent("max_search", stats, phi, before)

        if optimized:
            visited.add(vmin)
        cube = Cube(vmin, vmax)
        h = h.apply(op, cube)
        refinements += 1
        if trace is not None:
            trace.append(RefineStep(v, cube, op, h, visited.snapshot()))

    raise BudgetExceeded(
        f"no exact hypothesis after {cfg.max_iterations} equivalence rounds"
    )


def learn_max_cube(
    rho: SubsetOracle,
    psi: EquivalenceOracle,
    cfg: LearnerConfig,
) -> LearnResult:
    """Subset+equivalence learner; every refinement adds a maximal cube.

    Counterexamples are always positive (the hypothesis never leaves the
    target), and each one is grown upward then downward into a cube that
    cannot be enlarged on any axis.
    """
    if cfg.algorithm != "maxcube":
        raise ValueError(f"learn_max_cube cannot run {cfg.algorithm!r}")
    dim = rho.dim
    guards = dict(
        allow_infinite=cfg.allow_infinite,
        max_probes=cfg.max_probes,
        max_doublings=cfg.max_doublings,
    )

    h = CubeUnion.empty(dim)
    stats = QueryStats()
    trace: list[RefineStep] | None = [] if cfg.record_trace else None
    rho0, psi0 = rho.count, psi.count
    refinements = 0

    for rounds in range(1, cfg.max_iterations + 1):
        _check_deadline(cfg)
        v = psi(h)
        if v is None:
            stats.subset = rho.count - rho0
            stats.equivalence = psi.count - psi0
            return LearnResult(h, stats, rounds, refinements, trace)

        before = rho.count
        vmax = find_max_inc_corner(v, v, rho, cfg.strategy, **guards)
        _spent("grow_up", stats, rho, before)
        before = rho.count
        vmin = find_min_inc_corner(v, vmax, rho, cfg.strategy, **guards)
        _spent("grow_down", stats, rho, before)

        cube = Cube(vmin, vmax)
        h = h.apply("add", cube)
        refinements += 1
        if trace is not None:
            trace.append(RefineStep(v, cube, op="add", hypothesis=h, visited=frozenset()))

    raise BudgetExceeded(
        f"no exact hypothesis after {cfg.max_iterations} equivalence rounds"
    )


def _clamp_lower(v: Point, radius: int) -> tuple:
    """Coordinates at or beyond the negative rim become -inf."""
    return tuple(NEG_INF if x <= -radius else x for x in v)


def _clamp_upper(v: Point, radius: int) -> tuple:
    """Coordinates at or beyond the positive rim become +inf."""
    return tuple(POS_INF if x >= radius else x for x in v)


def learn_cubes_infinity_meq(
    phi: MembershipOracle,
    psi: EquivalenceOracle,
    cfg: LearnerConfig,
) -> LearnResult:
    """Membership+equivalence learner for targets with infinite bounds.

    All corner searches are confined to an inf-norm ball whose radius
    doubles until it reaches each counterexample.  A corner coordinate on
    the rim is indistinguishable from an unbounded one inside the ball,
    so it is clamped outward to the matching infinity; a wrong clamp is
    repaired by a later symmetric difference.  The equivalence oracle
    must return minimal corners of the symmetric difference.
    """
    if cfg.algorithm != "infinity_meq":
        raise ValueError(f"learn_cubes_infinity_meq cannot run {cfg.algorithm!r}")
    dim = phi.dim
    guards = dict(max_probes=cfg.max_probes, max_doublings=cfg.max_doublings)

    h = CubeUnion.empty(dim)
    visited = VisitedCorners()
    stats = QueryStats()
    trace: list[RefineStep] | None = [] if cfg.record_trace else None
    phi0, psi0 = phi.count, psi.count
    refinements = 0
    radius = 1

    for rounds in range(1, cfg.max_iterations + 1):
        _check_deadline(cfg)
        v = psi(h)
        if v is None:
            stats.membership = phi.count - phi0
            stats.equivalence = psi.count - psi0
            return LearnResult(h, stats, rounds, refinements, trace)

        while any(abs(x) > radius for x in v):
            radius *= 2

        space = ball_oracle(symmetric_difference_oracle(phi, membership_of(h)), radius)
        before = phi.count
        vmin = find_min_corner(v, space, cfg.strategy, **guards)
        _spent("min_search", stats, phi, before)
        before = phi.count
        vmax = find_max_corner(
            vmin, exclusion_oracle(space, visited.points, vmin), cfg.strategy, **guards
        )
        _spent("max_search", stats, phi, before)
        visited.add(vmin)

        cube = Cube(_clamp_lower(vmin, radius), _clamp_upper(vmax, radius))
        h = h.apply("symdiff", cube)
        refinements += 1
        if trace is not None:
            trace.append(RefineStep(v, cube, "symdiff", h, visited.snapshot()))

    raise BudgetExceeded(
        f"no exact hypothesis after {cfg.max_iterations} equivalence rounds"
    )


def run_session(
    cfg: LearnerConfig,
    *,
    membership: MembershipOracle | None = None,
    equivalence: EquivalenceOracle | None = None,
    subset: SubsetOracle | None = None,
    corner_oracle=None,
) -> LearnResult:
    """Dispatch to the learner named by ``cfg.algorithm``."""
    if equivalence is None:
        raise ValueError("every learner needs an equivalence oracle")
    if cfg.algorithm in OVERSHOOT_ALGORITHMS:
        if membership is None:
            raise ValueError(f"{cfg.algorithm} needs a membership oracle")
        return learn_cubes(membership, equivalence, cfg, corner_oracle=corner_oracle)
    if cfg.algorithm == "maxcube":
        if subset is None:
            raise ValueError("maxcube needs a subset oracle")
        return learn_max_cube(subset, equivalence, cfg)
    if membership is None:
        raise ValueError("infinity_meq needs a membership oracle")
    return learn_cubes_infinity_meq(membership, equivalence, cfg)
