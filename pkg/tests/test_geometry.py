import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubelearn.geometry import (
    NEG_INF,
    POS_INF,
    AbstractGrid,
    Cube,
    CubeUnion,
    bound_size,
    point_leq,
)

from conftest import box_points, cube_point_set, points_in_box, union_point_set


# -- construction and membership ---------------------------------------------------


def test_cube_requires_ordered_bounds():
    with pytest.raises(ValueError):
        Cube((3,), (1,))
    with pytest.raises(ValueError):
        Cube((0, 5), (4, 2))


def test_cube_rejects_empty_infinities():
    # lo = +inf or hi = -inf would denote an empty cube; empties are not cubes here
    with pytest.raises(ValueError):
        Cube((POS_INF,), (POS_INF,))
    with pytest.raises(ValueError):
        Cube((NEG_INF,), (NEG_INF,))


def test_cube_rejects_float_bounds():
    with pytest.raises(ValueError):
        Cube((0.5,), (2,))


def test_membership_examples():
    c = Cube((0, 3), (5, 10))
    assert c.contains((2, 7))
    assert not c.contains((6, 7))
    assert Cube((3,), (POS_INF,)).contains((1_000_000,))


def test_membership_matches_enumeration():
    c = Cube((-2, 1), (1, 4))
    expected = cube_point_set(c)
    for v in box_points((-4, -1), (3, 6)):
        assert c.contains(v) == (v in expected)


def test_point_leq():
    assert point_leq((0, 0), (1, 1))
    assert not point_leq((0, 2), (1, 1))
    assert point_leq((NEG_INF, 3), (0, 3))


# -- intersection -------------------------------------------------------------------


def test_intersect_overlapping():
    got = Cube((0, 0), (5, 5)).intersect(Cube((3, 3), (8, 8)))
    assert got == Cube((3, 3), (5, 5))


def test_intersect_disjoint():
    assert Cube((0, 0), (1, 1)).intersect(Cube((3, 3), (5, 5))) is None


def test_intersect_clips_infinite_bounds():
    got = Cube((NEG_INF,), (10,)).intersect(Cube((3,), (POS_INF,)))
    assert got == Cube((3,), (10,))


# -- subtraction --------------------------------------------------------------------


def test_subtract_1d():
    pieces = Cube((0,), (10,)).subtract(Cube((3,), (5,)))
    # expected point set computed by enumerating the 11 points directly
    expected = {(x,) for x in range(11) if not 3 <= x <= 5}
    got = set()
    for p in pieces:
        got |= cube_point_set(p)
    assert got == expected
    assert sorted(pieces, key=lambda c: c.lo) == [Cube((0,), (2,)), Cube((6,), (10,))]


def test_subtract_2d_brute_force():
    big, hole = Cube((0, 0), (4, 4)), Cube((1, 1), (2, 2))
    expected = cube_point_set(big) - cube_point_set(hole)
    assert len(expected) == 21
    pieces = big.subtract(hole)
    assert len(pieces) <= 4  # 2d pieces for d=2
    seen = set()
    for p in pieces:
        pts = cube_point_set(p)
        assert not pts & seen, "pieces must be pairwise disjoint"
        seen |= pts
    assert seen == expected


def test_subtract_covered_cube_is_empty_sequence():
    assert Cube((1, 1), (2, 2)).subtract(Cube((0, 0), (4, 4))) == []
    assert Cube((3,), (7,)).subtract(Cube((3,), (7,))) == []


def test_subtract_disjoint_returns_self():
    c = Cube((0,), (2,))
    assert c.subtract(Cube((5,), (9,))) == [c]


def test_subtract_infinite_cube():
    pieces = Cube((NEG_INF,), (POS_INF,)).subtract(Cube((0,), (4,)))
    assert sorted(pieces, key=lambda c: (c.lo[0] == NEG_INF, c.lo)) == [
        Cube((5,), (POS_INF,)),
        Cube((NEG_INF,), (-1,)),
    ] or len(pieces) == 2
    for v in range(-10, 11):
        inside = any(p.contains((v,)) for p in pieces)
        assert inside == (not 0 <= v <= 4)


# -- union apply --------------------------------------------------------------------


def test_apply_add_to_empty():
    u = CubeUnion.empty(2).apply("add", Cube((0, 0), (2, 2)))
    assert union_point_set(u) == cube_point_set(Cube((0, 0), (2, 2)))
    assert len(u.cubes) == 1


def test_apply_remove_1d():
    u = Cube((0,), (10,)).as_union().apply("remove", Cube((3,), (5,)))
    assert union_point_set(u) == {(x,) for x in range(11) if not 3 <= x <= 5}


def test_apply_symdiff_1d():
    u = Cube((0,), (4,)).as_union().apply("symdiff", Cube((3,), (6,)))
    assert union_point_set(u) == {(0,), (1,), (2,), (5,), (6,)}


@pytest.mark.parametrize("op", ["add", "remove", "symdiff"])
def test_apply_matches_set_semantics(op):
    rng = random.Random(20240 + hash(op) % 97)
    for _ in range(60):
        dim = rng.randint(1, 3)
        from conftest import random_cube, random_union

        u = random_union(rng, dim, rng.randint(0, 3), -6, 6)
        c = random_cube(rng, dim, -6, 6)
        before, cset = union_point_set(u), cube_point_set(c)
        expected = {
            "add": before | cset,
            "remove": before - cset,
            "symdiff": before ^ cset,
        }[op]
        got = u.apply(op, c)
        assert union_point_set(got) == expected
        # result stays canonical: pairwise disjoint pieces
        pts = [cube_point_set(p) for p in got.cubes]
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                assert not pts[i] & pts[j]


def test_apply_rejects_unknown_op():
    with pytest.raises(ValueError):
        CubeUnion.empty(1).apply("xor", Cube((0,), (1,)))


def test_union_contains():
    u = CubeUnion.empty(1).union_all([Cube((0,), (2,)), Cube((5,), (7,))])
    assert u.contains((6,))
    assert not u.contains((3,))
    assert not CubeUnion.empty(1).contains((0,))


# -- difference witness -------------------------------------------------------------


def test_witness_identity_is_none():
    a = Cube((0, 0), (2, 2)).as_union()
    assert a.difference_witness(a) is None


def test_witness_simple_gap():
    a = Cube((0,), (2,)).as_union()
    b = Cube((0,), (3,)).as_union()
    assert a.difference_witness(b) == (3,)


def test_witness_against_empty_infinite():
    a = Cube((3,), (POS_INF,)).as_union()
    assert a.difference_witness(CubeUnion.empty(1)) == (3,)


def test_witness_is_lex_min_of_difference():
    rng = random.Random(7)
    from conftest import random_union

    for _ in range(120):
        dim = rng.randint(1, 3)
        a = random_union(rng, dim, rng.randint(0, 3), -5, 5)
        b = random_union(rng, dim, rng.randint(0, 3), -5, 5)
        diff = union_point_set(a) ^ union_point_set(b)
        got = a.difference_witness(b)
        if not diff:
            assert got is None
        else:
            assert got == min(diff)


# -- canonical form and subset ------------------------------------------------------


def test_canonical_preserves_points_and_disjointness():
    u = CubeUnion(2, (Cube((0, 0), (4, 4)), Cube((2, 2), (6, 6)), Cube((0, 0), (1, 1))))
    c = u.canonical()
    assert union_point_set(c) == union_point_set(u)
    pts = [cube_point_set(p) for p in c.cubes]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            assert not pts[i] & pts[j]


def test_subset_of():
    inner = Cube((1, 1), (2, 2)).as_union()
    outer = CubeUnion(2, (Cube((0, 0), (2, 4)), Cube((2, 0), (4, 4))))
    assert inner.subset_of(outer)
    assert not outer.subset_of(inner)
    assert CubeUnion.empty(2).subset_of(inner)


def test_subset_of_infinite():
    assert Cube((5,), (POS_INF,)).as_union().subset_of(Cube((3,), (POS_INF,)).as_union())
    assert not Cube((2,), (POS_INF,)).as_union().subset_of(Cube((3,), (POS_INF,)).as_union())


# -- representation size ------------------------------------------------------------


def test_bound_sizes():
    assert bound_size(0) == 1
    assert bound_size(3) == 3  # 1 + bitlen(3) = 1 + 2
    assert bound_size(POS_INF) == 1
    assert bound_size(NEG_INF) == 1


def test_size_examples():
    assert Cube((0,), (0,)).size() == 2
    assert Cube((3,), (POS_INF,)).size() == 4
    a, b = Cube((0, 0), (1, 1)), Cube((3, 3), (5, 5))
    assert CubeUnion(2, (a, b)).size() == a.size() + b.size()


# -- abstract grid ------------------------------------------------------------------


def test_grid_of_single_cube():
    g = AbstractGrid.of(Cube((1, 1), (3, 3)).as_union())
    assert g.lower[0] == frozenset({1, 4})
    assert g.upper[0] == frozenset({3, 0})
    assert g.member(Cube((1, 1), (3, 3)))
    assert not g.member(Cube((2, 1), (3, 3)))


def test_grid_admits_infinities_only_when_target_unbounded():
    finite = AbstractGrid.of(Cube((0,), (4,)).as_union())
    assert not finite.admits_upper(0, POS_INF)
    assert not finite.admits_lower(0, NEG_INF)
    ray = AbstractGrid.of(Cube((3,), (POS_INF,)).as_union())
    assert ray.admits_upper(0, POS_INF)
    assert not ray.admits_lower(0, NEG_INF)


def test_grid_closed_under_apply():
    # every cube produced while editing on-grid cubes stays on the grid
    rng = random.Random(99)
    from conftest import random_union

    for _ in range(80):
        dim = rng.randint(1, 2)
        target = random_union(rng, dim, rng.randint(1, 3), -5, 5)
        if target.is_empty():
            continue
        g = AbstractGrid.of(target)
        u = CubeUnion.empty(dim)
        for c in target.cubes:
            assert g.member(c)
            op = rng.choice(["add", "remove", "symdiff"])
            u = u.apply(op, c)
            assert g.union_member(u)


# -- point iteration / counting -----------------------------------------------------


def test_points_lex_order_and_count():
    c = Cube((0, 0), (2, 1))
    assert list(c.points()) == sorted(cube_point_set(c))
    assert c.point_count() == 6
    assert Cube((0,), (POS_INF,)).point_count() == POS_INF


def test_union_point_count_no_double_counting():
    u = CubeUnion.empty(1).union_all([Cube((0,), (4,)), Cube((3,), (6,))])
    assert u.point_count() == 7
    assert set(u.points()) == union_point_set(u)


def test_bounding_box():
    u = CubeUnion(2, (Cube((0, 1), (2, 2)), Cube((4, -3), (5, 0))))
    assert u.bounding_box() == Cube((0, -3), (5, 2))
    assert CubeUnion.empty(2).bounding_box() is None


# -- json ---------------------------------------------------------------------------


def test_json_round_trip_with_infinities():
    u = CubeUnion(2, (Cube((0, NEG_INF), (5, POS_INF)), Cube((8, 0), (9, 1))))
    back = CubeUnion.from_json(u.to_json())
    assert back == u
    payload = json.loads(u.to_json())
    assert payload["cubes"][0]["lo"][1] == "-inf"
    assert payload["cubes"][0]["hi"][1] == "+inf"


def test_json_rejects_garbage():
    with pytest.raises(ValueError):
        CubeUnion.from_dict({"dim": 1, "cubes": [{"lo": ["nan"], "hi": [1]}]})
    with pytest.raises(ValueError):
        CubeUnion.from_dict({"dim": 2, "cubes": [{"lo": [0], "hi": [1]}]})


# -- property tests -----------------------------------------------------------------

coords = st.integers(min_value=-8, max_value=8)


@st.composite
def cubes(draw, dim):
    a = draw(st.tuples(*[coords] * dim))
    b = draw(st.tuples(*[coords] * dim))
    return Cube(tuple(map(min, a, b)), tuple(map(max, a, b)))


@st.composite
def cube_pairs(draw):
    dim = draw(st.integers(min_value=1, max_value=4))
    return draw(cubes(dim)), draw(cubes(dim))


@given(cube_pairs())
@settings(max_examples=200)
def test_subtract_properties(pair):
    a, b = pair
    pieces = a.subtract(b)
    assert len(pieces) <= 2 * a.dim
    expected = cube_point_set(a) - cube_point_set(b)
    seen = set()
    for p in pieces:
        pts = cube_point_set(p)
        assert not pts & seen
        seen |= pts
    assert seen == expected


@given(cube_pairs())
@settings(max_examples=200)
def test_intersect_properties(pair):
    a, b = pair
    inter = a.intersect(b)
    expected = cube_point_set(a) & cube_point_set(b)
    if inter is None:
        assert not expected
    else:
        assert cube_point_set(inter) == expected


@given(cube_pairs(), st.sampled_from(["add", "remove", "symdiff"]))
@settings(max_examples=150)
def test_apply_properties(pair, op):
    a, b = pair
    u = a.as_union().apply(op, b)
    sa, sb = cube_point_set(a), cube_point_set(b)
    expected = {"add": sa | sb, "remove": sa - sb, "symdiff": sa ^ sb}[op]
    assert union_point_set(u) == expected


@given(cube_pairs())
@settings(max_examples=150)
def test_witness_agrees_with_equality(pair):
    a, b = pair
    ua, ub = a.as_union(), b.as_union()
    w = ua.difference_witness(ub)
    equal = cube_point_set(a) == cube_point_set(b)
    assert (w is None) == equal
    if w is not None:
        assert ua.contains(w) != ub.contains(w)
