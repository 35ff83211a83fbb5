from collections import Counter

import pytest
from hypothesis import given, settings

from helpers import polygons
from stabcut.fixtures import comb, cross, crossing_notches, l_shape, rectangle
from stabcut.gadgets import forcer
from stabcut.geom import Point, find_gates, is_thin
from stabcut.pixelation import Pixelation, radial_graph, wedge_pixel
from stabcut.rayshoot import OrthogonalRayShooter
from stabcut.sweeps import edge_entries, face_stabs, segment_entries, walk


def test_l1_pixels():
    pix = Pixelation(l_shape())
    assert sorted(p.rect for p in pix.pixels) == [(0, 0, 1, 1), (0, 1, 1, 2), (1, 0, 2, 1)]


def test_cross_pixels():
    pix = Pixelation(cross())
    assert len(pix.pixels) == 5
    assert sum(p.area for p in pix.pixels) == cross().area() == 5
    assert (1, 1, 2, 2) in {p.rect for p in pix.pixels}


def test_forcer_has_sixteen_unit_wedge_pixels():
    f = forcer().polygon
    pix = Pixelation(f)
    wedges = {pix.wedge_pixel(rv.point).rect for rv in f.structure.reflex}
    assert wedges == {(a, b, a + 1, b + 1) for a in (0, 2, 4, 6) for b in (1, 3, 5, 7)}


def test_wedge_pixels():
    assert wedge_pixel(Pixelation(l_shape()), (1, 1)).rect == (0, 0, 1, 1)
    assert wedge_pixel(Pixelation(cross()), (1, 1)).rect == (1, 1, 2, 2)
    # lower-left corner of the hole at (1, 2) looks down-left into the first numbered pixel
    assert wedge_pixel(Pixelation(forcer().polygon), (1, 2)).rect == (0, 1, 1, 2)
    with pytest.raises(ValueError):
        wedge_pixel(Pixelation(l_shape()), (0, 0))


def test_radial_graph_of_rectangle():
    rg = radial_graph(Pixelation(rectangle()))
    assert (rg.nv, rg.npix, len(rg.edges)) == (4, 1, 4)
    assert sorted(q for _, _, q in rg.edges) == [1, 2, 3, 4]


def test_radial_graph_of_l1():
    pix = Pixelation(l_shape())
    rg = pix.radial
    assert rg.npix == 3
    deg = Counter(f for f, _, _ in rg.edges)
    assert set(deg.values()) == {4}
    assert rg.n == len(pix.graph.vertices) + 3


def _check_quadrants(pix):
    gp = pix.graph
    for f, v, q in pix.radial.edges:
        x0, y0, x1, y1 = pix.pixels[f].rect
        p = gp.vertices[v]
        assert p == [Point(x0, y0), Point(x1, y0), Point(x1, y1), Point(x0, y1)][q - 1]


@pytest.mark.parametrize("make", [l_shape, cross, crossing_notches, lambda: comb(4), lambda: forcer().polygon])
def test_radial_quadrants_agree_with_geometry(make):
    _check_quadrants(Pixelation(make()))


def test_stab_classes_small():
    pix = Pixelation(l_shape())
    strips = pix.strip_classes
    assert Counter(c.orientation for c in strips) == {"H": 2, "V": 2}
    sq = Pixelation(rectangle())
    assert len(sq.segments) == 0
    assert Counter(c.orientation for c in sq.classes) == {"H": 1, "V": 1}


def test_comb_body_class_crosses_tooth_sides():
    t = 3
    poly = comb(t, two_sided=False)
    pix = Pixelation(poly)
    segs = pix.segments
    body = [c for c in pix.strip_classes if c.orientation == "H" and c.representative[0] == 1]
    assert len(body) == 1
    crossed = [segs[s] for s in body[0].crossed_reflex]
    assert [s.line for s in crossed] == list(range(1, 2 * t + 1))
    assert all(s.orientation == "V" for s in crossed)


def test_each_crossing_is_one_degree_four_vertex():
    pix = Pixelation(crossing_notches())
    gp = pix.graph
    deg = gp.degree()
    inner = sorted(gp.vertices[v] for v in range(len(gp.vertices)) if not gp.on_boundary[v])
    assert inner == [Point(1, 2), Point(2, 1)]
    assert len(crossing_notches().crossings) == 2
    assert all(deg[gp.index[p]] == 4 for p in inner)


def _pixel_checks(poly):
    pix = Pixelation(poly)
    assert sum(p.area for p in pix.pixels) == poly.area()
    for p in pix.pixels:
        x0, y0, x1, y1 = p.rect
        assert x0 < x1 and y0 < y1
        # no reflex segment through the open interior
        for s in pix.segments:
            if s.orientation == "H":
                assert not (y0 < s.line < y1 and s.lo < x1 and x0 < s.hi)
            else:
                assert not (x0 < s.line < x1 and s.lo < y1 and y0 < s.hi)
    assert pix.max_cross == max((len(c.crossed_reflex) for c in pix.classes), default=0) <= poly.n
    n = poly.n
    nseg = len(pix.segments)
    assert len(pix.graph.vertices) <= n + nseg + len(poly.crossings) <= n + nseg + nseg * nseg // 4
    strips = pix.strip_classes
    assert len(strips) <= 2 * n
    keys = Counter((c.orientation, c.pixels) for c in pix.classes)
    assert max(keys.values(), default=1) == 1
    for c in pix.classes:
        assert list(c.crossed_reflex) == sorted(c.crossed_reflex, key=lambda s: pix.segments[s].line)
    return pix


@settings(max_examples=80, deadline=None)
@given(polygons("random-holes", 12))
def test_pixel_tiling_and_bounds(poly):
    pix = _pixel_checks(poly)
    _check_quadrants(pix)


@settings(max_examples=80, deadline=None)
@given(polygons("random", 12))
def test_face_stabs_match_strip_classes(poly):
    """Decomposition faces give the same classes, judged by their crossed segments."""
    pix = Pixelation(poly)
    ref = Counter((c.orientation, tuple(sorted(c.crossed_reflex))) for c in pix.strip_classes)
    shooters = {o: OrthogonalRayShooter(o, segment_entries(poly, o) + edge_entries(poly, o)) for o in "HV"}
    got = Counter()
    for s in face_stabs(poly):
        perp = "V" if s.orientation == "H" else "H"
        hits = tuple(sorted(h for h in walk(shooters[perp], s.line, s.lo, s.orientation) if h >= 0))
        got[(s.orientation, hits)] += 1
    assert got == ref


@settings(max_examples=150, deadline=None)
@given(polygons("thin-gate-free", 12))
def test_thin_gate_free_classes_cross_at_most_two(poly):
    assert is_thin(poly) and not find_gates(poly)
    assert Pixelation(poly).max_cross <= 2
