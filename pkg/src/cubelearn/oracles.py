"""Query-counted oracles and the ground-truth teacher.

Learners never look at a target directly; they go through four oracle
kinds:

* membership -- point -> bool
* equivalence -- hypothesis union -> counterexample point or None (done)
* subset -- cube or union -> bool (is it contained in the target?)
* corner -- counterexample -> a (min corner, max corner) pair of the set
  currently being searched

Every oracle counts its invocations, and composed membership oracles
charge their constituents, so reported statistics are exact.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import ProtocolError
from .geometry import Cube, CubeUnion, Point, point_leq
from . import search as _search

MembershipFn = Callable[[Point], bool]


class MembershipOracle:
    """A counted point -> bool oracle."""

    __slots__ = ("dim", "count", "_fn")

    def __init__(self, dim: int, fn: MembershipFn):
        self.dim = dim
        self.count = 0
        self._fn = fn

    def __call__(self, v: Point) -> bool:
        if len(v) != self.dim:
            raise ValueError(f"point {v!r} is not {self.dim}-dimensional")
        self.count += 1
        return self._fn(v)


class EquivalenceOracle:
    """A counted hypothesis -> counterexample-or-None oracle."""

    __slots__ = ("dim", "count", "_fn")

    def __init__(self, dim: int, fn: Callable[[CubeUnion], Point | None]):
        self.dim = dim
        self.count = 0
        self._fn = fn

    def __call__(self, h: CubeUnion) -> Point | None:
        self.count += 1
        return self._fn(h)


class SubsetOracle:
    """A counted is-subset-of-the-target oracle.

    Accepts either a single cube or a cube union; a cube is treated as the
    one-cube union.
    """

    __slots__ = ("dim", "count", "_fn")

    def __init__(self, dim: int, fn: Callable[[CubeUnion], bool]):
        self.dim = dim
        self.count = 0
        self._fn = fn

    def __call__(self, candidate: Cube | CubeUnion) -> bool:
        if isinstance(candidate, Cube):
            candidate = candidate.as_union()
        self.count += 1
        return self._fn(candidate)


# -- membership composition ------------------------------------------------
#
# These build new oracles out of old ones.  The constituents keep counting
# their own invocations, which is what makes learner statistics exact: a
# probe of "target symdiff hypothesis" costs exactly one target query.


def membership_of(u: CubeUnion) -> MembershipOracle:
    cubes = u.cubes
    return MembershipOracle(u.dim, lambda v: any(c.contains(v) for c in cubes))


def negated(base: MembershipOracle) -> MembershipOracle:
    """Oracle for the reflection through the origin: answers base(-v)."""
    return MembershipOracle(base.dim, lambda v: base(tuple(-x for x in v)))


def translated(base: MembershipOracle, offset: Point) -> MembershipOracle:
    """Oracle for the set shifted by +offset: answers base(v - offset)."""
    off = tuple(offset)
    return MembershipOracle(
        base.dim, lambda v: base(tuple(x - o for x, o in zip(v, off)))
    )


def union_oracle(a: MembershipOracle, b: MembershipOracle) -> MembershipOracle:
    return MembershipOracle(a.dim, lambda v: a(v) or b(v))


def intersection_oracle(a: MembershipOracle, b: MembershipOracle) -> MembershipOracle:
    return MembershipOracle(a.dim, lambda v: a(v) and b(v))


def difference_oracle(a: MembershipOracle, b: MembershipOracle) -> MembershipOracle:
    """Oracle for a's set minus b's set."""
    return MembershipOracle(a.dim, lambda v: a(v) and not b(v))


def symmetric_difference_oracle(
    a: MembershipOracle, b: MembershipOracle
) -> MembershipOracle:
    return MembershipOracle(a.dim, lambda v: a(v) != b(v))


def exclusion_oracle(
    base: MembershipOracle, visited: Iterable[Point], anchor: Point
) -> MembershipOracle:
    """base's set minus the upward shadow of already-visited corners.

    A point v is cut away iff some visited corner w satisfies
    anchor <= w <= v component-wise.  The shadow test is free, so it runs
    before the base probe.
    """
    pts = tuple(visited)
    anchor = tuple(anchor)

    def fn(v: Point) -> bool:
        for w in pts:
            if point_leq(anchor, w) and point_leq(w, v):
                return False
        return base(v)

    return MembershipOracle(base.dim, fn)


def ball_oracle(base: MembershipOracle, radius: int) -> MembershipOracle:
    """base's set intersected with the inf-norm ball of the given radius."""
    return MembershipOracle(
        base.dim, lambda v: all(-radius <= x <= radius for x in v) and base(v)
    )


# -- ground-truth teacher ----------------------------------------------------

COUNTEREXAMPLE_POLICIES = ("lex_min", "min_corner", "script")


class GroundTruthTeacher:
    """All four oracles computed from an explicit target union.

    ``cex_policy`` picks how equivalence counterexamples are chosen:

    * ``lex_min`` -- the deterministic witness of ``difference_witness``.
    * ``min_corner`` -- descend from that witness to a minimal corner of
      the symmetric difference (restricted to a ball wide enough to
      contain every finite bound in play, so it also works when the
      difference is unbounded).
    * ``script`` -- pop points from a user-supplied list; each is checked
      to really lie in the symmetric difference.
    """

    def __init__(
        self,
        target: CubeUnion,
        cex_policy: str = "lex_min",
        script: Sequence[Point] | None = None,
        strategy: "_search.SearchStrategy | None" = None,
    ):
        if cex_policy not in COUNTEREXAMPLE_POLICIES:
            raise ValueError(f"unknown counterexample policy {cex_policy!r}")
        if cex_policy == "script" and script is None:
            raise ValueError("script policy needs a script")
        self.target = target
        self.cex_policy = cex_policy
        self._canonical = target.canonical()
        self._script = deque(tuple(p) for p in script) if script else deque()
        self._strategy = strategy or _search.SearchStrategy.binary()
        d = target.dim
        self.membership = MembershipOracle(d, self._canonical.contains)
        self.equivalence = EquivalenceOracle(d, self._equivalence)
        self.subset = SubsetOracle(d, self._subset)
        self.corner = CornerOracle(d, self._strategy)

    @property
    def dim(self) -> int:
        return self.target.dim

    def _equivalence(self, h: CubeUnion) -> Point | None:
        h = h.canonical()
        witness = self._canonical.difference_witness(h)
        if witness is None:
            return None
        if self.cex_policy == "lex_min":
            return witness
        if self.cex_policy == "min_corner":
            radius = 2 * max(
                self._canonical.max_finite_magnitude(), h.max_finite_magnitude()
            ) + 2
            in_diff = lambda v: self._canonical.contains(v) != h.contains(v)
            space = ball_oracle(MembershipOracle(self.dim, in_diff), radius)
            return _search.find_min_corner(witness, space, self._strategy)
        # script
        if not self._script:
            raise ProtocolError("counterexample script exhausted")
        v = self._script.popleft()
        if self._canonical.contains(v) == h.contains(v):
            raise ProtocolError(
                f"scripted counterexample {v} is not in the symmetric difference"
            )
        return v

    def _subset(self, candidate: CubeUnion) -> bool:
        return candidate.subset_of(self._canonical)

    def reset_counts(self) -> None:
        self.membership.count = 0
        self.equivalence.count = 0
        self.subset.count = 0
        self.corner.count = 0


class CornerOracle:
    """Derives corner pairs by local search on whatever set is queried.

    ``query`` takes the counterexample, a membership oracle for the set
    whose corners are wanted, and a factory mapping the found min corner
    to the (possibly further restricted) set in which the max corner must
    lie.  Both returned points belong to their respective sets.
    """

    def __init__(self, dim: int, strategy: "_search.SearchStrategy"):
        self.dim = dim
        self.count = 0
        self._strategy = strategy

    def query(
        self,
        v: Point,
        min_space: MembershipOracle,
        max_space_for: Callable[[Point], MembershipOracle],
    ) -> tuple[Point, Point]:
        self.count += 1
        vmin = _search.find_min_corner(v, min_space, self._strategy)
        vmax = _search.find_max_corner(vmin, max_space_for(vmin), self._strategy)
        return vmin, vmax


class ScriptedCornerOracle:
    """Replays a fixed list of (min corner, max corner) answers.

    Each popped pair is validated against the set the learner is actually
    querying: the min corner must be a local minimum of ``min_space`` and
    the max corner a local maximum of ``max_space_for(min corner)``.
    Invalid or exhausted scripts raise ProtocolError.
    """

    def __init__(self, pairs: Iterable[tuple[Point, Point]]):
        self._pairs = deque((tuple(m), tuple(M)) for m, M in pairs)
        self.count = 0

    def query(
        self,
        v: Point,
        min_space: MembershipOracle,
        max_space_for: Callable[[Point], MembershipOracle],
    ) -> tuple[Point, Point]:
        if not self._pairs:
            raise ProtocolError("corner script exhausted")
        self.count += 1
        vmin, vmax = self._pairs.popleft()
        if not _is_local_min(vmin, min_space):
            raise ProtocolError(f"scripted point {vmin} is not a minimal corner")
        max_space = max_space_for(vmin)
        if not _is_local_max(vmax, max_space):
            raise ProtocolError(f"scripted point {vmax} is not a maximal corner")
        return vmin, vmax


def _is_local_min(v: Point, space: MembershipFn) -> bool:
    if not space(v):
        return False
    for k in range(len(v)):
        below = v[:k] + (v[k] - 1,) + v[k + 1 :]
        if space(below):
            return False
    return True


def _is_local_max(v: Point, space: MembershipFn) -> bool:
    if not space(v):
        return False
    for k in range(len(v)):
        above = v[:k] + (v[k] + 1,) + v[k + 1 :]
        if space(above):
            return False
    return True
