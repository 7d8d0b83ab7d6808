"""Shared brute-force helpers.

Everything here recomputes expected answers by naive point enumeration so
that the library's geometry never gets to grade its own homework.
"""

import itertools
import random

from cubelearn.geometry import Cube, CubeUnion, is_finite

# (criterion number, label, passed) triples appended by test_acceptance.py
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, label, ok in sorted(ACCEPTANCE_RESULTS):
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} [{verdict}] {label}")


def box_points(lo, hi):
    """All integer points of the (finite) box [lo, hi], in lex order."""
    return itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi)))


def cube_point_set(c: Cube) -> set:
    assert c.is_finite(), "enumeration helper needs a finite cube"
    return set(box_points(c.lo, c.hi))


def union_point_set(u: CubeUnion) -> set:
    pts = set()
    for c in u.cubes:
        pts |= cube_point_set(c)
    return pts


def points_in_box(u: CubeUnion, lo, hi) -> set:
    """Points of u clipped to a finite box; works for unbounded unions."""
    return {v for v in box_points(lo, hi) if u.contains(v)}


def clip_bounds(c: Cube, lo: int, hi: int):
    clo = tuple(max(b, lo) if is_finite(b) else lo for b in c.lo)
    chi = tuple(min(b, hi) if is_finite(b) else hi for b in c.hi)
    return clo, chi


def same_point_set(a: CubeUnion, b: CubeUnion) -> bool:
    """Extensional equality, decided twice over.

    Once geometrically (empty symmetric difference) and once by raw point
    enumeration over a box wide enough to separate the two unions; the two
    verdicts must agree with each other before either is believed.
    """
    geometric = a.difference_witness(b) is None
    r = max(a.max_finite_magnitude(), b.max_finite_magnitude()) + 2
    lo, hi = (-r,) * a.dim, (r,) * a.dim
    pointwise = points_in_box(a, lo, hi) == points_in_box(b, lo, hi)
    assert geometric == pointwise, "geometry and enumeration disagree"
    return geometric


def random_cube(rng: random.Random, dim: int, lo: int, hi: int) -> Cube:
    a = [rng.randint(lo, hi) for _ in range(dim)]
    b = [rng.randint(lo, hi) for _ in range(dim)]
    return Cube(tuple(min(x, y) for x, y in zip(a, b)), tuple(max(x, y) for x, y in zip(a, b)))


def random_union(rng: random.Random, dim: int, n_cubes: int, lo: int, hi: int) -> CubeUnion:
    return CubeUnion.empty(dim).union_all(random_cube(rng, dim, lo, hi) for _ in range(n_cubes))
