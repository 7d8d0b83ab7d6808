"""Axis-aligned integer cubes with possibly infinite bounds, and unions thereof.

A cube is the set of integer points between a lower and an upper corner,
inclusive on both sides.  Individual bounds may be -inf (lower) or +inf
(upper).  Unions are kept as lists of pairwise disjoint cubes so that
membership, set operations and counterexample extraction stay cheap and
deterministic.

Finite bounds are Python ints (arbitrary precision); the infinities are
``math.inf`` / ``-math.inf``, which compare correctly against any int.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

POS_INF = math.inf
NEG_INF = -math.inf

#: A coordinate bound: a Python int, or one of the two infinities.
Bound = int | float
#: A lattice point: finite integer coordinates only.
Point = tuple[int, ...]


def is_finite(b: Bound) -> bool:
    return isinstance(b, int)


def _check_bound(b: Bound, what: str) -> None:
    if isinstance(b, int):
        return
    if isinstance(b, float) and math.isinf(b):
        return
    raise ValueError(f"{what} must be an int or +-inf, got {b!r}")


def bound_size(b: Bound) -> int:
    """Representation size of one bound: 1 + ceil(log2(|b| + 1)) for ints,
    1 for an infinity."""
    if not is_finite(b):
        return 1
    return 1 + abs(b).bit_length()


def point_leq(a: Iterable[Bound], b: Iterable[Bound]) -> bool:
    """Component-wise <= (the partial order, not the lexicographic one)."""
    return all(x <= y for x, y in zip(a, b))


@dataclass(frozen=True)
class Cube:
    """The integer box [lo[0], hi[0]] x ... x [lo[d-1], hi[d-1]].

    Every cube is nonempty by construction: lo[k] <= hi[k] is enforced,
    lo[k] = +inf and hi[k] = -inf are rejected.
    """

    lo: tuple[Bound, ...]
    hi: tuple[Bound, ...]

    def __post_init__(self) -> None:
        lo, hi = tuple(self.lo), tuple(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if len(lo) != len(hi):
            raise ValueError(f"corner dimensions differ: {len(lo)} vs {len(hi)}")
        if not lo:
            raise ValueError("cubes must have dimension >= 1")
        for k, (l, h) in enumerate(zip(lo, hi)):
            _check_bound(l, f"lo[{k}]")
            _check_bound(h, f"hi[{k}]")
            if l == POS_INF:
                raise ValueError(f"lo[{k}] may not be +inf")
            if h == NEG_INF:
                raise ValueError(f"hi[{k}] may not be -inf")
            if l > h:
                raise ValueError(f"empty cube: lo[{k}]={l} > hi[{k}]={h}")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @classmethod
    def point(cls, v: Point) -> "Cube":
        """The one-point cube containing v."""
        return cls(tuple(v), tuple(v))

    def contains(self, v: Iterable[int]) -> bool:
        return all(l <= x <= h for l, x, h in zip(self.lo, v, self.hi))

    def is_finite(self) -> bool:
        return all(is_finite(b) for b in self.lo + self.hi)

    def intersect(self, other: "Cube") -> "Cube | None":
        """The cube of common points, or None if the two are disjoint."""
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        lo = tuple(max(a, b) for a, b in zip(self.lo, other.lo))
        hi = tuple(min(a, b) for a, b in zip(self.hi, other.hi))
        if any(l > h for l, h in zip(lo, hi)):
            return None
        return Cube(lo, hi)

    def subtract(self, other: "Cube") -> "list[Cube]":
        """self minus other, as at most 2*dim pairwise disjoint cubes.

        Standard slab decomposition: for each axis, peel off the parts of
        the remaining window strictly below / strictly above the
        intersection, then narrow the window to the intersection on that
        axis.  The +-1 arithmetic only ever touches finite bounds.
        """
        inter = self.intersect(other)
        if inter is None:
            return [self]
        if inter == self:
            return []
        pieces: list[Cube] = []
        lo = list(self.lo)
        hi = list(self.hi)
        for k in range(self.dim):
            if lo[k] < inter.lo[k]:
                below_hi = hi.copy()
                below_hi[k] = inter.lo[k] - 1
                below_lo = lo.copy()
                pieces.append(Cube(tuple(below_lo), tuple(below_hi)))
            if inter.hi[k] < hi[k]:
                above_lo = lo.copy()
                above_lo[k] = inter.hi[k] + 1
                above_hi = hi.copy()
                pieces.append(Cube(tuple(above_lo), tuple(above_hi)))
            lo[k] = inter.lo[k]
            hi[k] = inter.hi[k]
        return pieces

    def size(self) -> int:
        """Representation size: the summed bit sizes of all bounds."""
        return sum(bound_size(b) for b in self.lo + self.hi)

    def point_count(self) -> Bound:
        """Number of integer points, or +inf for unbounded cubes."""
        n = 1
        for l, h in zip(self.lo, self.hi):
            if not (is_finite(l) and is_finite(h)):
                return POS_INF
            n *= h - l + 1
        return n

    def points(self) -> Iterator[Point]:
        """All points of a finite cube, in lexicographic order."""
        if not self.is_finite():
            raise ValueError("cannot enumerate an unbounded cube")

        def rec(k: int, prefix: tuple[int, ...]) -> Iterator[Point]:
            if k == self.dim:
                yield prefix
                return
            for x in range(self.lo[k], self.hi[k] + 1):
                yield from rec(k + 1, prefix + (x,))

        return rec(0, ())

    def as_union(self) -> "CubeUnion":
        return CubeUnion(self.dim, (self,), canonical_disjoint=True)


def _sort_key(c: Cube):
    return (c.lo, c.hi)


@dataclass(frozen=True)
class CubeUnion:
    """A union of cubes of equal dimension.

    ``canonical_disjoint`` records whether the cubes are known to be
    pairwise disjoint.  All set operations require (and preserve) that
    form; ``canonical()`` converts an arbitrary union.
    """

    dim: int
    cubes: tuple[Cube, ...] = ()
    canonical_disjoint: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "cubes", tuple(self.cubes))
        for c in self.cubes:
            if c.dim != self.dim:
                raise ValueError(
                    f"cube of dimension {c.dim} in union of dimension {self.dim}"
                )

    @classmethod
    def empty(cls, dim: int) -> "CubeUnion":
        return cls(dim, (), canonical_disjoint=True)

    def is_empty(self) -> bool:
        # Cubes are nonempty by construction, so no cubes <=> empty set.
        return not self.cubes

    def contains(self, v: Iterable[int]) -> bool:
        v = tuple(v)
        return any(c.contains(v) for c in self.cubes)

    def canonical(self) -> "CubeUnion":
        """An equal union made of pairwise disjoint cubes."""
        if self.canonical_disjoint:
            return self
        out = CubeUnion.empty(self.dim)
        for c in self.cubes:
            out = out.apply("add", c)
        return out

    def apply(self, op: str, cube: Cube) -> "CubeUnion":
        """Add, remove, or symmetric-difference one cube into this union.

        Requires a canonical-disjoint union and returns one.
        """
        if not self.canonical_disjoint:
            raise ValueError("apply() needs a canonical-disjoint union")
        if cube.dim != self.dim:
            raise ValueError("dimension mismatch")
        if op == "add":
            pieces = [p for c in self.cubes for p in c.subtract(cube)]
            pieces.append(cube)
        elif op == "remove":
            pieces = [p for c in self.cubes for p in c.subtract(cube)]
        elif op == "symdiff":
            kept = [p for c in self.cubes for p in c.subtract(cube)]
            new = [cube]
            for c in self.cubes:
                new = [p for q in new for p in q.subtract(c)]
            pieces = kept + new
        else:
            raise ValueError(f"unknown operation {op!r}")
        return CubeUnion(self.dim, tuple(pieces), canonical_disjoint=True)

    def union_all(self, cubes: Iterable[Cube]) -> "CubeUnion":
        out = self
        for c in cubes:
            out = out.apply("add", c)
        return out

    def symmetric_difference(self, other: "CubeUnion") -> "CubeUnion":
        """Symmetric difference as a canonical-disjoint union."""
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        out = self.canonical()
        for c in other.canonical().cubes:
            out = out.apply("symdiff", c)
        return out

    def difference_witness(self, other: "CubeUnion") -> Point | None:
        """A point in exactly one of the two unions, or None if they are equal.

        The witness is deterministic: each cube of the symmetric difference
        contributes its smallest corner, with infinite coordinates clamped
        to one beyond the largest finite magnitude appearing in either
        union, and the lexicographically least candidate wins.
        """
        diff = self.symmetric_difference(other)
        if diff.is_empty():
            return None
        radius = max(self.max_finite_magnitude(), other.max_finite_magnitude()) + 1
        best: Point | None = None
        for c in diff.cubes:
            cand = tuple(l if is_finite(l) else -radius for l in c.lo)
            if best is None or cand < best:
                best = cand
        return best

    def subset_of(self, other: "CubeUnion") -> bool:
        """True iff every point of self lies in other."""
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        others = other.cubes
        for c in self.cubes:
            pieces = [c]
            for t in others:
                pieces = [p for q in pieces for p in q.subtract(t)]
                if not pieces:
                    break
            if pieces:
                return False
        return True

    def max_finite_magnitude(self) -> int:
        """Largest |b| over all finite bounds, 0 if there are none."""
        best = 0
        for c in self.cubes:
            for b in c.lo + c.hi:
                if is_finite(b) and abs(b) > best:
                    best = abs(b)
        return best

    def size(self) -> int:
        """Representation size: summed bit sizes of all bounds."""
        return sum(c.size() for c in self.cubes)

    def is_finite(self) -> bool:
        return all(c.is_finite() for c in self.cubes)

    def point_count(self) -> Bound:
        """Number of points of a canonical-disjoint union (+inf if unbounded)."""
        if not self.canonical_disjoint:
            return self.canonical().point_count()
        n: Bound = 0
        for c in self.cubes:
            n += c.point_count()
        return n

    def points(self) -> Iterator[Point]:
        """All points of a finite canonical-disjoint union (no order guarantee)."""
        if not self.canonical_disjoint:
            yield from self.canonical().points()
            return
        for c in self.cubes:
            yield from c.points()

    def sorted_cubes(self) -> list[Cube]:
        return sorted(self.cubes, key=_sort_key)

    def bounding_box(self) -> Cube | None:
        """Smallest cube containing the union, or None when empty."""
        if not self.cubes:
            return None
        lo = tuple(
            min(c.lo[k] for c in self.cubes) for k in range(self.dim)
        )
        hi = tuple(
            max(c.hi[k] for c in self.cubes) for k in range(self.dim)
        )
        return Cube(lo, hi)

    # -- JSON round-trip ---------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "cubes": [
                {
                    "lo": [_bound_to_json(b) for b in c.lo],
                    "hi": [_bound_to_json(b) for b in c.hi],
                }
                for c in self.cubes
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CubeUnion":
        if not isinstance(data, dict) or "dim" not in data or "cubes" not in data:
            raise ValueError('cube-union JSON needs "dim" and "cubes" keys')
        dim = data["dim"]
        if not isinstance(dim, int) or dim < 1:
            raise ValueError(f'"dim" must be a positive int, got {dim!r}')
        cubes = []
        for i, entry in enumerate(data["cubes"]):
            try:
                lo = tuple(_bound_from_json(b) for b in entry["lo"])
                hi = tuple(_bound_from_json(b) for b in entry["hi"])
            except (KeyError, TypeError) as exc:
                raise ValueError(f"cube #{i}: {exc}") from exc
            if len(lo) != dim or len(hi) != dim:
                raise ValueError(f"cube #{i} does not have {dim} coordinates")
            cubes.append(Cube(lo, hi))
        return cls(dim, tuple(cubes))

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "CubeUnion":
        return cls.from_dict(json.loads(text))


def _bound_to_json(b: Bound):
    if is_finite(b):
        return b
    return "+inf" if b > 0 else "-inf"


def _bound_from_json(b) -> Bound:
    if isinstance(b, bool):
        raise ValueError(f"bad bound {b!r}")
    if isinstance(b, int):
        return b
    if b == "+inf":
        return POS_INF
    if b == "-inf":
        return NEG_INF
    raise ValueError(f'bad bound {b!r} (want int, "+inf" or "-inf")')


@dataclass(frozen=True)
class AbstractGrid:
    """Candidate corner coordinates induced by a target representation.

    For each axis k, ``lower[k]`` holds every finite value that can appear
    as a lower bound of a hypothesis cube during learning: the target's
    lower bounds, plus each upper bound shifted by +1.  ``upper[k]`` is the
    mirror image (upper bounds, plus lower bounds - 1).  The *_open flags
    say whether an infinite bound is admissible on that axis, which is the
    case exactly when the target itself has one there.
    """

    lower: tuple[frozenset[int], ...]
    upper: tuple[frozenset[int], ...]
    lower_open: tuple[bool, ...]
    upper_open: tuple[bool, ...]

    @classmethod
    def of(cls, target: CubeUnion) -> "AbstractGrid":
        d = target.dim
        lower = []
        upper = []
        lower_open = []
        upper_open = []
        for k in range(d):
            lo_vals = set()
            hi_vals = set()
            lo_inf = hi_inf = False
            for c in target.cubes:
                if is_finite(c.lo[k]):
                    lo_vals.add(c.lo[k])
                    hi_vals.add(c.lo[k] - 1)
                else:
                    lo_inf = True
                if is_finite(c.hi[k]):
                    hi_vals.add(c.hi[k])
                    lo_vals.add(c.hi[k] + 1)
                else:
                    hi_inf = True
            lower.append(frozenset(lo_vals))
            upper.append(frozenset(hi_vals))
            lower_open.append(lo_inf)
            upper_open.append(hi_inf)
        return cls(tuple(lower), tuple(upper), tuple(lower_open), tuple(upper_open))

    @property
    def dim(self) -> int:
        return len(self.lower)

    def admits_lower(self, k: int, b: Bound) -> bool:
        if is_finite(b):
            return b in self.lower[k]
        return self.lower_open[k]

    def admits_upper(self, k: int, b: Bound) -> bool:
        if is_finite(b):
            return b in self.upper[k]
        return self.upper_open[k]

    def member(self, cube: Cube) -> bool:
        """True iff every bound of the cube is grid-admissible."""
        return all(
            self.admits_lower(k, cube.lo[k]) and self.admits_upper(k, cube.hi[k])
            for k in range(cube.dim)
        )

    def union_member(self, u: CubeUnion) -> bool:
        return all(self.member(c) for c in u.cubes)

    def lower_point_member(self, v: Point) -> bool:
        """True iff every coordinate of v is an admissible finite lower bound."""
        return all(v[k] in self.lower[k] for k in range(len(v)))
