import pytest
from hypothesis import given, settings

from helpers import brute_reflex_vertices, brute_segments, polygons
from stabcut.fixtures import comb, cross, crossing_notches, l_shape, rectangle
from stabcut.gadgets import forcer
from stabcut.geom import (
    Point,
    Polygon,
    far_end_contacts,
    find_gates,
    is_general_position,
    is_thin,
    locate,
    reflex_segments,
    validate,
)

# two offset blocks: the shared segment joins reflex vertices facing opposite ways
STEP = Polygon.from_rings([(0, 0), (2, 0), (2, 1), (3, 1), (3, 2), (1, 2), (1, 1), (0, 1)])


def rules(poly):
    return {v.rule for v in validate(poly).violations}


def test_l1_is_valid():
    assert validate(l_shape()).ok


def test_clockwise_outer_ring_is_reported():
    p = l_shape()
    bad = Polygon(tuple(reversed(p.outer)), ())
    assert "outer ring orientation" in rules(bad)


def test_forcer_with_nine_holes_is_valid():
    f = forcer().polygon
    assert len(f.holes) == 9
    assert all(len(h) == 4 for h in f.holes)
    assert validate(f).ok


def test_json_rejects_collinear_and_non_integer():
    with pytest.raises(ValueError):
        Polygon.from_json({"outer": [[0, 0], [1, 0], [2, 0], [2, 1], [0, 1]]})
    with pytest.raises(ValueError):
        Polygon.from_json({"outer": [[0, 0], [1.5, 0], [1.5, 1], [0, 1]]})
    with pytest.raises(ValueError):
        Polygon.from_json([[0, 0]])


def test_json_normalizes_orientation():
    p = Polygon.from_json({"outer": [[0, 0], [0, 1], [1, 1], [1, 0]]})
    assert validate(p).ok
    assert Polygon.from_json(p.to_json()) == p


def test_l1_segments():
    segs = {(s.apex, s.far_end, s.orientation) for s in reflex_segments(l_shape())}
    assert segs == {(Point(1, 1), Point(0, 1), "H"), (Point(1, 1), Point(1, 0), "V")}


def test_cross_segments_are_the_shared_central_sides():
    segs = reflex_segments(cross())
    assert len(segs) == 4
    assert all(s.shared for s in segs)
    assert {(s.a, s.b) for s in segs} == {
        (Point(1, 1), Point(2, 1)), (Point(1, 2), Point(2, 2)),
        (Point(1, 1), Point(1, 2)), (Point(2, 1), Point(2, 2)),
    }


def _segment_set(poly):
    out = set()
    for s in reflex_segments(poly):
        for a in s.apexes:
            far = s.b if a == s.a else s.a
            out.add((a, far, s.orientation))
    return out


@pytest.mark.parametrize("make", [l_shape, cross, crossing_notches, lambda: comb(3), lambda: forcer().polygon])
def test_segments_match_half_unit_walk(make):
    poly = make()
    assert _segment_set(poly) == brute_segments(poly)


@settings(max_examples=60, deadline=None)
@given(polygons("random", 12))
def test_segments_match_half_unit_walk_random(poly):
    assert _segment_set(poly) == brute_segments(poly)
    assert set(poly.structure.vertex_of) == brute_reflex_vertices(poly)


@settings(max_examples=60, deadline=None)
@given(polygons("random-holes", 12))
def test_each_reflex_vertex_has_one_segment_per_orientation(poly):
    st = poly.structure
    for rv in st.reflex:
        assert st.segments[rv.h].orientation == "H" and rv.point in st.segments[rv.h].apexes
        assert st.segments[rv.v].orientation == "V" and rv.point in st.segments[rv.v].apexes
    for s in st.segments:
        # open interior, blocked half a unit past each end
        mid = (s.lo + s.hi)  # doubled midpoint along the segment
        pt = (mid, 2 * s.line) if s.orientation == "H" else (2 * s.line, mid)
        assert locate(poly, *pt) == "inside"
        for end, step in ((s.lo, -1), (s.hi, 1)):
            beyond = (2 * end + step, 2 * s.line) if s.orientation == "H" else (2 * s.line, 2 * end + step)
            assert locate(poly, *beyond) != "inside"


def test_thinness():
    assert is_thin(forcer().polygon)
    assert is_thin(l_shape())
    assert not is_thin(crossing_notches())


def test_general_position():
    assert is_general_position(l_shape())
    assert not is_general_position(forcer().polygon)
    assert not is_general_position(cross())


def test_gates():
    gates = find_gates(cross())
    assert len(gates) == 4
    assert {g.side for g in gates} == {"above", "below", "left", "right"}
    assert find_gates(l_shape()) == []


def test_opposite_wedges_are_not_a_gate():
    assert validate(STEP).ok
    segs = reflex_segments(STEP)
    shared = [s for s in segs if s.shared]
    assert len(shared) == 1 and shared[0].orientation == "H"
    assert find_gates(STEP) == []
    assert far_end_contacts(STEP) == [shared[0].index]
    assert any("without forming a gate" in n for n in validate(STEP).notes)


def _brute_gates(poly):
    """Shared segments whose two apexes have wedges on the same side, by quadrant probing."""
    out = set()
    for s in reflex_segments(poly):
        if not s.shared:
            continue
        sides = []
        for a in s.apexes:
            # the wedge quadrant is the one diagonal to both incident edges
            for dx in (-1, 1):
                for dy in (-1, 1):
                    q = [(dx, dy), (-dx, dy), (dx, -dy)]
                    if all(locate(poly, 2 * a.x + u, 2 * a.y + v) == "inside" for u, v in q) and \
                            locate(poly, 2 * a.x - dx, 2 * a.y - dy) != "inside":
                        sides.append(dy if s.orientation == "H" else dx)
        if len(sides) == 2 and sides[0] == sides[1]:
            out.add(s.canonical_id)
    return out


@settings(max_examples=60, deadline=None)
@given(polygons("random", 12))
def test_gates_match_quadrant_probe(poly):
    assert {g.segment.canonical_id for g in find_gates(poly)} == _brute_gates(poly)


@settings(max_examples=200, deadline=None)
@given(polygons("general-position", 12))
def test_general_position_has_no_gates(poly):
    assert is_general_position(poly)
    assert find_gates(poly) == []


def test_rectangle_has_no_reflex_structure():
    r = rectangle(3, 2)
    assert validate(r).ok
    assert reflex_segments(r) == []
    assert is_thin(r) and is_general_position(r)


def test_self_intersection_and_holes_outside_are_reported():
    bow = Polygon((Point(0, 0), Point(2, 0), Point(2, 2), Point(1, 2), Point(1, -1), Point(0, -1)), ())
    assert not validate(bow).ok
    outside = Polygon.from_rings([(0, 0), (2, 0), (2, 2), (0, 2)], [[(3, 3), (4, 3), (4, 4), (3, 4)]])
    assert not validate(outside).ok
