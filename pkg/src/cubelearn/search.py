"""Corner searches over membership and subset oracles.

Two families live here:

* ``find_max_corner`` / ``find_min_corner`` walk a membership oracle from
  a known member to a local extreme corner: a point of the set none of
  whose axis neighbours (in the growing / shrinking direction) is in the
  set.  The walk advances one coordinate at a time and restarts its sweep
  after every advance.

* ``find_max_inc_corner`` / ``find_min_inc_corner`` grow a cube known to
  be contained in the target, one coordinate per pass, using a subset
  oracle.  Feasibility is monotone in each bound, so doubling plus binary
  search is sound, and an optional first probe at +-inf detects unbounded
  coordinates with a single query.

All searches take a strategy: ``unary`` steps by one, ``binary`` doubles
then bisects, ``optimized`` steps by one a few times before switching to
doubling (so tiny cubes cost no doubling overhead).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import BudgetExceeded, UnboundedDirection
from .geometry import Bound, Cube, NEG_INF, POS_INF, Point, is_finite

DEFAULT_MAX_DOUBLINGS = 64
DEFAULT_MAX_PROBES = 1_000_000
DEFAULT_UNARY_THRESHOLD = 4


@dataclass(frozen=True)
class SearchStrategy:
    kind: str  # "unary" | "binary" | "optimized"
    threshold: int = DEFAULT_UNARY_THRESHOLD

    def __post_init__(self) -> None:
        if self.kind not in ("unary", "binary", "optimized"):
            raise ValueError(f"unknown search strategy {self.kind!r}")
        if self.threshold < 1:
            raise ValueError("threshold must be >= 1")

    @classmethod
    def unary(cls) -> "SearchStrategy":
        return cls("unary")

    @classmethod
    def binary(cls) -> "SearchStrategy":
        return cls("binary")

    @classmethod
    def optimized(cls, threshold: int = DEFAULT_UNARY_THRESHOLD) -> "SearchStrategy":
        return cls("optimized", threshold)

    @classmethod
    def parse(cls, text: str) -> "SearchStrategy":
        text = text.strip()
        if ":" in text:
            kind, _, arg = text.partition(":")
            return cls(kind, int(arg))
        return cls(text)


class _Budget:
    """Counts oracle probes and trips when the allowance runs out."""

    __slots__ = ("left",)

    def __init__(self, max_probes: int | None):
        self.left = max_probes

    def spend(self) -> None:
        if self.left is None:
            return
        self.left -= 1
        if self.left < 0:
            raise BudgetExceeded(
                "probe budget exhausted during corner search "
                "(the searched set may be unbounded)"
            )


def _bump(v: list[int], i: int, offset: int) -> Point:
    w = list(v)
    w[i] += offset
    return tuple(w)


def find_max_corner(
    start: Point,
    phi: Callable[[Point], bool],
    strategy: SearchStrategy,
    *,
    max_probes: int | None = DEFAULT_MAX_PROBES,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
) -> Point:
    """Walk upward from ``start`` to a point v of the set with no
    axis-successor in the set (phi(v) and not phi(v + e_i) for all i).

    ``start`` must itself satisfy phi.  After every successful advance the
    coordinate sweep restarts from the first axis, so earlier axes get
    re-examined once later ones have moved.
    """
    start = tuple(start)
    budget = _Budget(max_probes)

    def probe(p: Point) -> bool:
        budget.spend()
        return bool(phi(p))

    if not probe(start):
        raise ValueError(f"search started outside the set: {start}")
    d = len(start)
    v = list(start)
    i = 0
    while i < d:
        if probe(_bump(v, i, 1)):
            v[i] += _advance(v, i, probe, strategy, max_doublings)
            i = 0
        else:
            i += 1
    return tuple(v)


def _advance(
    v: list[int],
    i: int,
    probe: Callable[[Point], bool],
    strategy: SearchStrategy,
    max_doublings: int,
) -> int:
    """Largest step along axis i known to stay in the set, given that
    offset 1 is already known feasible."""
    if strategy.kind == "unary":
        step = 1
        while probe(_bump(v, i, step + 1)):
            step += 1
        return step

    if strategy.kind == "optimized":
        step = 1
        for _ in range(strategy.threshold):
            if not probe(_bump(v, i, step + 1)):
                return step
            step += 1
        low = step  # offsets 1..step all feasible, keep doubling from here
    else:  # plain doubling, re-probing offset 1 on its first iteration
        low = 0

    # Exponential phase: find feasible "low + last" and infeasible "low + k".
    last = 0
    k = 1
    doublings = 0
    while probe(_bump(v, i, low + k)):
        last = k
        k *= 2
        doublings += 1
        if doublings > max_doublings:
            raise UnboundedDirection(
                f"no upper edge found along axis {i} after "
                f"{max_doublings} doublings"
            )
    lb = low + last
    ub = low + k
    # Invariant: offset lb feasible, offset ub infeasible.
    while ub - lb > 1:
        mid = (lb + ub) // 2
        if probe(_bump(v, i, mid)):
            lb = mid
        else:
            ub = mid
    return lb


def find_min_corner(
    start: Point,
    phi: Callable[[Point], bool],
    strategy: SearchStrategy,
    *,
    max_probes: int | None = DEFAULT_MAX_PROBES,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
) -> Point:
    """Mirror of find_max_corner: a member none of whose axis-predecessors
    is in the set.  Implemented by searching the reflected set."""

    def reflected(p: Point) -> bool:
        return phi(tuple(-x for x in p))

    top = find_max_corner(
        tuple(-x for x in start),
        reflected,
        strategy,
        max_probes=max_probes,
        max_doublings=max_doublings,
    )
    return tuple(-x for x in top)


# -- subset-oracle searches --------------------------------------------------


def _with_axis(bounds: tuple[Bound, ...], axis: int, value: Bound) -> tuple[Bound, ...]:
    return bounds[:axis] + (value,) + bounds[axis + 1 :]


def compute_max_bounds(
    lo: tuple[Bound, ...],
    hi: tuple[Bound, ...],
    axis: int,
    rho: Callable[[Cube], bool],
    *,
    allow_infinite: bool = False,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
) -> tuple[Bound, Bound]:
    """Bracket the largest feasible upper bound on one axis.

    Doubles an offset while the enlarged cube stays inside the target and
    returns (last feasible bound, first infeasible bound); the gap is then
    closed by binary search in the caller.  Requires the starting cube
    itself to be feasible, so the lower end of the bracket always is.

    With ``allow_infinite``, one extra query first tries the whole +inf
    extension; if that is feasible the axis is unbounded and (inf, inf)
    is returned.
    """
    if allow_infinite and rho(Cube(lo, _with_axis(hi, axis, POS_INF))):
        return (POS_INF, POS_INF)
    base = hi[axis]
    if not is_finite(base):
        raise ValueError("cannot extend an already infinite bound")
    last = 0
    delta = 1
    doublings = 0
    while rho(Cube(lo, _with_axis(hi, axis, base + delta))):
        last = delta
        delta *= 2
        doublings += 1
        if doublings > max_doublings:
            raise UnboundedDirection(
                f"upper bound on axis {axis} kept growing after "
                f"{max_doublings} doublings; enable infinite bounds?"
            )
    return (base + last, base + delta)


def compute_min_bounds(
    lo: tuple[Bound, ...],
    hi: tuple[Bound, ...],
    axis: int,
    rho: Callable[[Cube], bool],
    *,
    allow_infinite: bool = False,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
) -> tuple[Bound, Bound]:
    """Downward mirror of compute_max_bounds for the lower bound."""
    if allow_infinite and rho(Cube(_with_axis(lo, axis, NEG_INF), hi)):
        return (NEG_INF, NEG_INF)
    base = lo[axis]
    if not is_finite(base):
        raise ValueError("cannot extend an already infinite bound")
    last = 0
    delta = 1
    doublings = 0
    while rho(Cube(_with_axis(lo, axis, base - delta), hi)):
        last = delta
        delta *= 2
        doublings += 1
        if doublings > max_doublings:
            raise UnboundedDirection(
                f"lower bound on axis {axis} kept growing after "
                f"{max_doublings} doublings; enable infinite bounds?"
            )
    return (base - last, base - delta)


def find_max_inc_corner(
    lo: tuple[Bound, ...],
    hi: tuple[Bound, ...],
    rho: Callable[[Cube], bool],
    strategy: SearchStrategy,
    *,
    allow_infinite: bool = False,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
    max_probes: int | None = DEFAULT_MAX_PROBES,
) -> tuple[Bound, ...]:
    """Grow the upper corner of a contained cube until no axis can move.

    One ascending pass suffices: enlarging a later axis never re-enables
    an earlier one, because any extension that once left the target only
    gets bigger.  ``[lo, hi]`` must already be contained in the target.
    """
    budget = _Budget(max_probes)

    def probe(c: Cube) -> bool:
        budget.spend()
        return bool(rho(c))

    hi = list(hi)
    d = len(hi)
    for axis in range(d):
        if not is_finite(hi[axis]):
            continue
        if allow_infinite and probe(Cube(lo, _with_axis(tuple(hi), axis, POS_INF))):
            hi[axis] = POS_INF
            continue
        if strategy.kind == "unary":
            while probe(Cube(lo, _with_axis(tuple(hi), axis, hi[axis] + 1))):
                hi[axis] += 1
            continue
        if strategy.kind == "optimized":
            edge_found = False
            for _ in range(strategy.threshold):
                if probe(Cube(lo, _with_axis(tuple(hi), axis, hi[axis] + 1))):
                    hi[axis] += 1
                else:
                    edge_found = True
                    break
            if edge_found:
                continue
        lb, ub = compute_max_bounds(
            lo, tuple(hi), axis, probe, allow_infinite=False, max_doublings=max_doublings
        )
        while ub - lb > 1:
            mid = (lb + ub) // 2
            if probe(Cube(lo, _with_axis(tuple(hi), axis, mid))):
                lb = mid
            else:
                ub = mid
        hi[axis] = lb
    return tuple(hi)


def find_min_inc_corner(
    lo: tuple[Bound, ...],
    hi: tuple[Bound, ...],
    rho: Callable[[Cube], bool],
    strategy: SearchStrategy,
    *,
    allow_infinite: bool = False,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
    max_probes: int | None = DEFAULT_MAX_PROBES,
) -> tuple[Bound, ...]:
    """Downward mirror of find_max_inc_corner for the lower corner."""
    budget = _Budget(max_probes)

    def probe(c: Cube) -> bool:
        budget.spend()
        return bool(rho(c))

    lo = list(lo)
    d = len(lo)
    for axis in range(d):
        if not is_finite(lo[axis]):
            continue
        if allow_infinite and probe(Cube(_with_axis(tuple(lo), axis, NEG_INF), hi)):
            lo[axis] = NEG_INF
            continue
        if strategy.kind == "unary":
            while probe(Cube(_with_axis(tuple(lo), axis, lo[axis] - 1), hi)):
                lo[axis] -= 1
            continue
        if strategy.kind == "optimized":
            edge_found = False
            for _ in range(strategy.threshold):
                if probe(Cube(_with_axis(tuple(lo), axis, lo[axis] - 1), hi)):
                    lo[axis] -= 1
                else:
                    edge_found = True
                    break
            if edge_found:
                continue
        lb, ub = compute_min_bounds(
            tuple(lo), hi, axis, probe, allow_infinite=False, max_doublings=max_doublings
        )
        # Here lb (feasible) > ub (infeasible); close the gap downward.
        while lb - ub > 1:
            mid = (lb + ub) // 2
            if probe(Cube(_with_axis(tuple(lo), axis, mid), hi)):
                lb = mid
            else:
                ub = mid
        lo[axis] = lb
    return tuple(lo)
