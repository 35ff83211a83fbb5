"""Integer rectilinear polygons: model, validation and structural predicates."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence

from sortedcontainers import SortedList

from .rayshoot import OrthogonalRayShooter

COORD_LIMIT = 2**60


class Point(NamedTuple):
    x: int
    y: int


Ring = tuple[Point, ...]


def signed_area2(ring: Sequence[Point]) -> int:
    """Twice the signed area; positive for counterclockwise rings."""
    s = 0
    n = len(ring)
    for i in range(n):
        x1, y1 = ring[i]
        x2, y2 = ring[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return s


def _as_ring(points: Iterable) -> Ring:
    return tuple(Point(int(p[0]), int(p[1])) for p in points)


@dataclass(frozen=True)
class Polygon:
    """Outer ring (counterclockwise) plus hole rings (clockwise).

    The constructor stores whatever it is given; ``validate`` checks the
    conventions and ``from_rings`` / ``from_json`` normalize orientation.
    """

    outer: Ring
    holes: tuple[Ring, ...] = ()

    @classmethod
    def from_rings(cls, outer: Iterable, holes: Iterable[Iterable] = ()) -> "Polygon":
        o = _as_ring(outer)
        if signed_area2(o) < 0:
            o = o[::-1]
        hs = []
        for h in holes:
            r = _as_ring(h)
            if signed_area2(r) > 0:
                r = r[::-1]
            hs.append(r)
        return cls(o, tuple(hs))

    @classmethod
    def from_json(cls, data: dict | str) -> "Polygon":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict) or "outer" not in data:
            raise ValueError('polygon JSON must be an object with an "outer" ring')
        for ring in [data["outer"], *data.get("holes", [])]:
            for p in ring:
                if len(p) != 2 or not all(isinstance(c, int) and not isinstance(c, bool) for c in p):
                    raise ValueError(f"polygon coordinates must be integer pairs, got {p!r}")
        poly = cls.from_rings(data["outer"], data.get("holes", []))
        for ri, ring in enumerate(poly.rings()):
            n = len(ring)
            for i in range(n):
                a, b, c = ring[i - 1], ring[i], ring[(i + 1) % n]
                if (a.x == b.x == c.x) or (a.y == b.y == c.y):
                    raise ValueError(f"ring {ri}: collinear consecutive vertices at index {i} {tuple(b)}")
        return poly

    def to_json(self) -> dict:
        return {"outer": [list(p) for p in self.outer], "holes": [[list(p) for p in h] for h in self.holes]}

    def rings(self) -> tuple[Ring, ...]:
        return (self.outer, *self.holes)

    @property
    def n(self) -> int:
        return sum(len(r) for r in self.rings())

    def vertices(self) -> Iterator[Point]:
        for r in self.rings():
            yield from r

    def edges(self) -> Iterator[tuple[int, int, Point, Point]]:
        """Yield ``(ring, index, start, end)`` in traversal order."""
        for ri, ring in enumerate(self.rings()):
            n = len(ring)
            for i in range(n):
                yield ri, i, ring[i], ring[(i + 1) % n]

    def area(self) -> int:
        return sum(signed_area2(r) for r in self.rings()) // 2

    def bbox(self) -> tuple[int, int, int, int]:
        xs = [p.x for p in self.outer]
        ys = [p.y for p in self.outer]
        return min(xs), min(ys), max(xs), max(ys)

    def translated(self, dx: int, dy: int) -> "Polygon":
        def mv(r):
            return tuple(Point(p.x + dx, p.y + dy) for p in r)

        return Polygon(mv(self.outer), tuple(mv(h) for h in self.holes))

    @cached_property
    def structure(self) -> "Structure":
        return _build_structure(self)

    @cached_property
    def crossings(self) -> list[tuple[int, int]]:
        """Crossing (horizontal, vertical) reflex segment index pairs."""
        return crossing_pairs(self)


@dataclass(frozen=True)
class Violation:
    ring: int
    edge: int
    rule: str
    detail: str = ""

    def to_json(self) -> dict:
        return {"ring": self.ring, "edge": self.edge, "rule": self.rule, "detail": self.detail}


@dataclass
class Diagnostics:
    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations], "notes": self.notes}


def locate(poly: Polygon, x2: int, y2: int) -> str:
    """Classify a point given in doubled coordinates: inside, boundary or outside."""
    crossings = 0
    for _, _, a, b in poly.edges():
        ax, ay, bx, by = 2 * a.x, 2 * a.y, 2 * b.x, 2 * b.y
        if min(ax, bx) <= x2 <= max(ax, bx) and min(ay, by) <= y2 <= max(ay, by):
            return "boundary"
        if ax == bx and ax > x2 and min(ay, by) <= y2 < max(ay, by):
            crossings += 1
    return "inside" if crossings % 2 else "outside"


def _ring_contains(ring: Ring, x2: int, y2: int) -> bool:
    crossings = 0
    n = len(ring)
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        if a.x == b.x and 2 * a.x > x2 and min(2 * a.y, 2 * b.y) <= y2 < max(2 * a.y, 2 * b.y):
            crossings += 1
    return crossings % 2 == 1


def validate(poly: Polygon, max_violations: int = 50) -> Diagnostics:
    """Check every polygon invariant; violations name ring, edge and rule."""
    diag = Diagnostics()
    out = diag.violations
    rings = poly.rings()
    for ri, ring in enumerate(rings):
        n = len(ring)
        if n < 4:
            out.append(Violation(ri, 0, "too few vertices", f"{n} vertices"))
            continue
        for i in range(n):
            a, b = ring[i], ring[(i + 1) % n]
            if max(abs(a.x), abs(a.y)) >= COORD_LIMIT:
                out.append(Violation(ri, i, "coordinate range", f"{tuple(a)}"))
            if a == b:
                out.append(Violation(ri, i, "zero-length edge", f"{tuple(a)}"))
            elif a.x != b.x and a.y != b.y:
                out.append(Violation(ri, i, "non-axis-aligned edge", f"{tuple(a)}->{tuple(b)}"))
            c = ring[(i + 2) % n]
            if a != b and b != c and ((a.x == b.x == c.x) or (a.y == b.y == c.y)):
                out.append(Violation(ri, (i + 1) % n, "collinear consecutive edges", f"at {tuple(b)}"))
        if n % 2:
            out.append(Violation(ri, 0, "odd vertex count", f"{n} vertices"))
    if out:
        return diag
    area = signed_area2(poly.outer)
    if area <= 0:
        out.append(Violation(0, 0, "outer ring orientation", "outer ring must be counterclockwise"))
    for hi, h in enumerate(poly.holes, start=1):
        if signed_area2(h) >= 0:
            out.append(Violation(hi, 0, "hole orientation", "holes must be clockwise"))
    _check_intersections(poly, out, max_violations)
    if out:
        return diag
    for hi, h in enumerate(poly.holes, start=1):
        p = h[0]
        if not _ring_contains(poly.outer, 2 * p.x, 2 * p.y):
            out.append(Violation(hi, 0, "hole outside outer ring", f"vertex {tuple(p)}"))
        for hj, g in enumerate(poly.holes, start=1):
            if hj != hi and _ring_contains(g, 2 * p.x, 2 * p.y):
                out.append(Violation(hi, 0, "nested holes", f"inside hole {hj}"))
                break
    if not out:
        st = poly.structure
        for ci in far_end_contacts(poly):
            s = st.segments[ci]
            diag.notes.append(
                f"reflex segment {s.canonical_id} joins reflex vertices {tuple(s.apexes[0])} and {tuple(s.apexes[1])} without forming a gate"
            )
    return diag


def _check_intersections(poly: Polygon, out: list[Violation], limit: int) -> None:
    horiz = []
    vert = []
    lengths = [len(r) for r in poly.rings()]
    for ri, i, a, b in poly.edges():
        if a.y == b.y:
            horiz.append((a.y, min(a.x, b.x), max(a.x, b.x), ri, i))
        else:
            vert.append((a.x, min(a.y, b.y), max(a.y, b.y), ri, i))

    def adjacent(r1, i1, r2, i2):
        return r1 == r2 and (i1 - i2) % lengths[r1] in (1, lengths[r1] - 1)

    def report(r1, i1, r2, i2, where):
        if len(out) >= limit:
            return
        rule = "ring self-intersection" if r1 == r2 else "rings intersect"
        out.append(Violation(r1, i1, rule, f"edge {i1} of ring {r1} meets edge {i2} of ring {r2} at {where}"))

    for group in (horiz, vert):
        group_sorted = sorted(group)
        for e1, e2 in zip(group_sorted, group_sorted[1:]):
            if e1[0] == e2[0] and e2[1] <= e1[2] and not adjacent(e1[3], e1[4], e2[3], e2[4]):
                report(e1[3], e1[4], e2[3], e2[4], f"line {e1[0]}")
    events: dict[int, list] = {}
    for idx, (y, x1, x2, _, _) in enumerate(horiz):
        events.setdefault(x1, [[], [], []])[0].append(idx)
        events.setdefault(x2, [[], [], []])[2].append(idx)
    for idx, v in enumerate(vert):
        events.setdefault(v[0], [[], [], []])[1].append(idx)
    active = SortedList()
    for x in sorted(events):
        ins, qs, rem = events[x]
        for idx in ins:
            active.add((horiz[idx][0], idx))
        for vidx in qs:
            _, y1, y2, vr, vi = vert[vidx]
            for y, hidx in active.irange((y1, -1), (y2, len(horiz))):
                _, hx1, hx2, hr, hi = horiz[hidx]
                corner = (x in (hx1, hx2)) and (y in (y1, y2))
                if not (corner and adjacent(hr, hi, vr, vi)):
                    report(vr, vi, hr, hi, f"({x}, {y})")
                    if len(out) >= limit:
                        return
        for idx in rem:
            active.remove((horiz[idx][0], idx))


@dataclass(frozen=True)
class ReflexSegment:
    """Maximal open interior segment with a reflex vertex at one end.

    ``line`` is the fixed coordinate, ``lo``/``hi`` the open extent along the
    other axis.  ``apexes`` lists every reflex vertex inducing the segment.
    """

    index: int
    orientation: str
    line: int
    lo: int
    hi: int
    apexes: tuple[Point, ...]

    @property
    def a(self) -> Point:
        return Point(self.lo, self.line) if self.orientation == "H" else Point(self.line, self.lo)

    @property
    def b(self) -> Point:
        return Point(self.hi, self.line) if self.orientation == "H" else Point(self.line, self.hi)

    @property
    def apex(self) -> Point:
        return self.apexes[0]

    @property
    def far_end(self) -> Point:
        return self.b if self.apex == self.a else self.a

    @property
    def canonical_id(self) -> tuple[int, int, str]:
        return (self.a.x, self.a.y, self.orientation)

    @property
    def shared(self) -> bool:
        return len(self.apexes) == 2

    def contains_open(self, p: Point) -> bool:
        if self.orientation == "H":
            return p.y == self.line and self.lo < p.x < self.hi
        return p.x == self.line and self.lo < p.y < self.hi


@dataclass(frozen=True)
class ReflexVertex:
    point: Point
    h: int  # index of its horizontal reflex segment
    v: int
    hdir: int  # direction of h away from the apex (+1 right, -1 left)
    vdir: int


@dataclass(frozen=True)
class Gate:
    segment: ReflexSegment
    endpoints: tuple[Point, Point]
    side: str  # "above", "below", "left" or "right"


@dataclass
class Structure:
    """Reflex vertices and reflex segments of a polygon, computed once."""

    reflex: list[ReflexVertex]
    segments: list[ReflexSegment]
    by_id: dict[tuple[int, int, str], int]
    vertex_of: dict[Point, int]

    def segment_for(self, apex: Sequence[int], orientation: str) -> int:
        rv = self.reflex[self.vertex_of[Point(*apex)]]
        return rv.h if orientation == "H" else rv.v


def reflex_turns(poly: Polygon) -> list[tuple[Point, tuple[int, int], tuple[int, int]]]:
    """Reflex vertices with their incoming and outgoing unit directions."""
    res = []
    for ring in poly.rings():
        n = len(ring)
        for i in range(n):
            a, b, c = ring[i - 1], ring[i], ring[(i + 1) % n]
            din = ((b.x > a.x) - (b.x < a.x), (b.y > a.y) - (b.y < a.y))
            dout = ((c.x > b.x) - (c.x < b.x), (c.y > b.y) - (c.y < b.y))
            if din[0] * dout[1] - din[1] * dout[0] < 0:
                res.append((b, din, dout))
    return res


def _build_structure(poly: Polygon) -> Structure:
    vedges = []
    hedges = []
    for ri, i, a, b in poly.edges():
        if a.x == b.x:
            vedges.append(((ri, i), a.x, min(a.y, b.y), max(a.y, b.y)))
        else:
            hedges.append(((ri, i), a.y, min(a.x, b.x), max(a.x, b.x)))
    vshoot = OrthogonalRayShooter("V", vedges)
    hshoot = OrthogonalRayShooter("H", hedges)
    raw = []
    for p, din, dout in reflex_turns(poly):
        # extend the incoming edge forward and the outgoing edge backward
        if din[1] == 0:
            hdir, vdir = din[0], -dout[1]
        else:
            hdir, vdir = -dout[0], din[1]
        hit = vshoot.query(p, "+x" if hdir > 0 else "-x")
        hx = vshoot.segment(hit)[0]
        hit = hshoot.query(p, "+y" if vdir > 0 else "-y")
        vy = hshoot.segment(hit)[0]
        raw.append((p, hdir, vdir, ("H", p.y, min(p.x, hx), max(p.x, hx)), ("V", p.x, min(p.y, vy), max(p.y, vy))))
    keyed: dict[tuple, list[Point]] = {}
    for p, _, _, hk, vk in raw:
        keyed.setdefault(hk, []).append(p)
        keyed.setdefault(vk, []).append(p)

    def canon(k):
        o, line, lo, _ = k
        return (lo, line, o) if o == "H" else (line, lo, o)

    order = sorted(keyed, key=canon)
    segments = []
    by_key = {}
    for idx, k in enumerate(order):
        segments.append(ReflexSegment(idx, k[0], k[1], k[2], k[3], tuple(sorted(keyed[k]))))
        by_key[k] = idx
    raw.sort(key=lambda r: r[0])
    reflex = [ReflexVertex(p, by_key[hk], by_key[vk], hd, vd) for p, hd, vd, hk, vk in raw]
    return Structure(
        reflex=reflex,
        segments=segments,
        by_id={s.canonical_id: s.index for s in segments},
        vertex_of={rv.point: i for i, rv in enumerate(reflex)},
    )


def reflex_vertices(poly: Polygon) -> list[Point]:
    return [rv.point for rv in poly.structure.reflex]


def reflex_segments(poly: Polygon) -> list[ReflexSegment]:
    return list(poly.structure.segments)


def segments_cross(s: ReflexSegment, t: ReflexSegment) -> bool:
    """True iff the open segments share a point (only perpendicular pairs can)."""
    if s.orientation == t.orientation:
        return False
    h, v = (s, t) if s.orientation == "H" else (t, s)
    return h.lo < v.line < h.hi and v.lo < h.line < v.hi


def crossing_pairs(poly: Polygon, first_only: bool = False) -> list[tuple[int, int]]:
    """All (horizontal, vertical) index pairs of crossing reflex segments, by sweep."""
    segs = poly.structure.segments
    events: dict[int, list[list[int]]] = {}
    for s in segs:
        if s.orientation == "H":
            events.setdefault(s.lo, [[], [], []])[2].append(s.index)
            events.setdefault(s.hi, [[], [], []])[0].append(s.index)
        else:
            events.setdefault(s.line, [[], [], []])[1].append(s.index)
    active = SortedList()
    pairs = []
    for x in sorted(events):
        rem, qs, ins = events[x]
        for i in rem:
            active.remove((segs[i].line, i))
        for j in qs:
            v = segs[j]
            for _, i in active.irange((v.lo, len(segs)), (v.hi, -1)):
                pairs.append((i, j))
                if first_only:
                    return pairs
        for i in ins:
            active.add((segs[i].line, i))
    pairs.sort()
    return pairs


def is_thin(poly: Polygon) -> bool:
    return not crossing_pairs(poly, first_only=True)


def is_general_position(poly: Polygon) -> bool:
    xs: dict[int, int] = {}
    ys: dict[int, int] = {}
    for p in poly.vertices():
        xs[p.x] = xs.get(p.x, 0) + 1
        ys[p.y] = ys.get(p.y, 0) + 1
    return max(xs.values()) <= 2 and max(ys.values()) <= 2


def _gate_side(st: Structure, s: ReflexSegment) -> str | None:
    if not s.shared:
        return None
    p, q = (st.reflex[st.vertex_of[a]] for a in s.apexes)
    if s.orientation == "H":
        return ("above" if p.vdir > 0 else "below") if p.vdir == q.vdir else None
    return ("right" if p.hdir > 0 else "left") if p.hdir == q.hdir else None


def find_gates(poly: Polygon) -> list[Gate]:
    st = poly.structure
    gates = []
    for s in st.segments:
        side = _gate_side(st, s)
        if side is not None:
            gates.append(Gate(s, (s.apexes[0], s.apexes[1]), side))
    return gates


def far_end_contacts(poly: Polygon) -> list[int]:
    """Indices of segments joining two reflex vertices that are not gates."""
    st = poly.structure
    return [s.index for s in st.segments if s.shared and _gate_side(st, s) is None]


def load_polygon(path: str) -> Polygon:
    with open(path) as fh:
        return Polygon.from_json(json.load(fh))
