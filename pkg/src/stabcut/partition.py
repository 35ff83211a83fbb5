"""Conforming partitions, generic rectangle partitions, and stabbing numbers.

A stabbing segment counts a rectangle iff it meets the rectangle's interior.
For a strip class this is one more than the number of chosen segments the
class crosses; grid-line classes are evaluated the same way because none of
them lies on a reflex segment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .geom import Point, Polygon
from .grid import Grid, box_is_full, component_boxes, label_components, polygon_grid
from .pixelation import Pixelation, StabClass


@dataclass(frozen=True)
class ConformingPartition:
    poly: Polygon
    chosen: frozenset[int]

    @property
    def canonical_ids(self) -> list[tuple[int, int, str]]:
        segs = self.poly.structure.segments
        return sorted(segs[i].canonical_id for i in self.chosen)

    def to_json(self) -> dict:
        segs = self.poly.structure.segments
        items = sorted((segs[i].apex, segs[i].orientation) for i in self.chosen)
        return {"segments": [{"apex": [p.x, p.y], "dir": o} for p, o in items]}


@dataclass(frozen=True)
class RectPartition:
    rects: tuple[tuple, ...]  # (xmin, ymin, xmax, ymax)


@dataclass
class StabReport:
    value: int
    witness: StabClass | None
    per_class: dict[int, int] = field(default_factory=dict)
    grid_line_tie: bool = False

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "witness": self.witness.to_json() if self.witness else None,
            "grid_line_tie": self.grid_line_tie,
        }


def resolve_ids(poly: Polygon, ids: Iterable) -> frozenset[int]:
    """Map indices, canonical ids, or ``(apex, dir)`` pairs to segment indices."""
    st = poly.structure
    out = set()
    for item in ids:
        if isinstance(item, int):
            if not 0 <= item < len(st.segments):
                raise KeyError(f"unknown segment index {item}")
            out.add(item)
        elif isinstance(item, tuple) and len(item) == 3:
            if item not in st.by_id:
                raise KeyError(f"unknown segment id {item}")
            out.add(st.by_id[item])
        else:
            apex, o = item
            if Point(*apex) not in st.vertex_of:
                raise KeyError(f"{tuple(apex)} is not a reflex vertex")
            out.add(st.segment_for(apex, o))
    return frozenset(out)


def read_partition(poly: Polygon, data: dict) -> ConformingPartition:
    items = []
    for entry in data.get("segments", []):
        d = entry.get("dir")
        if d not in ("H", "V"):
            raise ValueError(f"segment dir must be H or V, got {d!r}")
        items.append((tuple(entry["apex"]), d))
    return ConformingPartition(poly, resolve_ids(poly, items))


def check_conforming(poly: Polygon, chosen: Iterable) -> list[str]:
    """Empty list iff the chosen segments form a conforming partition."""
    st = poly.structure
    ids = resolve_ids(poly, chosen)
    problems = []
    for rv in st.reflex:
        if rv.h not in ids and rv.v not in ids:
            problems.append(f"uncovered reflex vertex ({rv.point.x},{rv.point.y})")
    for h, v in poly.crossings:
        if h in ids and v in ids:
            a, b = st.segments[h], st.segments[v]
            problems.append(f"intersecting segments {a.canonical_id} and {b.canonical_id}")
    return problems


def _grid_with(poly: Polygon, chosen: Iterable[int]) -> Grid:
    segs = poly.structure.segments
    return polygon_grid(poly, segments=[segs[i] for i in chosen])


def rectangles_of(poly: Polygon, cp: ConformingPartition) -> RectPartition:
    g = _grid_with(poly, cp.chosen)
    label, count = label_components(g, lambda owner: owner is not None)
    rects = []
    for box in component_boxes(g, label, count):
        if not box_is_full(g, box):
            raise AssertionError(f"non-rectangular face {box} for chosen {sorted(cp.chosen)}")
        i0, j0, i1, j1, _ = box
        rects.append((g.xs[i0], g.ys[j0], g.xs[i1 + 1], g.ys[j1 + 1]))
    return RectPartition(tuple(sorted(rects)))


def class_count(c: StabClass, chosen: frozenset[int]) -> int:
    return 1 + sum(1 for s in c.crossed_reflex if s in chosen)


def stabbing_number_conforming(pix: Pixelation, cp: ConformingPartition) -> StabReport:
    chosen = cp.chosen
    per_class = {}
    best = None
    for c in pix.classes:
        k = class_count(c, chosen)
        per_class[c.index] = k
        if best is None or k > per_class[best.index] or (k == per_class[best.index] and best.kind == "line" and c.kind == "strip"):
            best = c
    if best is None:
        return StabReport(0, None, per_class)
    value = per_class[best.index]
    tie = any(pix.classes[i].kind == "line" and k == value for i, k in per_class.items())
    return StabReport(value, best, per_class, tie)


def stabbing_number(poly: Polygon, chosen: Iterable, pix: Pixelation | None = None) -> int:
    pix = pix or Pixelation(poly)
    return stabbing_number_conforming(pix, ConformingPartition(poly, resolve_ids(poly, chosen))).value


def _rect_grid(poly: Polygon, rp: RectPartition) -> tuple[Grid, list[list[int]]]:
    xs = {p.x for p in poly.vertices()} | {r[0] for r in rp.rects} | {r[2] for r in rp.rects}
    ys = {p.y for p in poly.vertices()} | {r[1] for r in rp.rects} | {r[3] for r in rp.rects}
    g = polygon_grid(poly, xs, ys)
    owner = [[-1] * g.ny for _ in range(g.nx)]
    for k, (x0, y0, x1, y1) in enumerate(rp.rects):
        if not (x0 < x1 and y0 < y1):
            raise ValueError(f"degenerate rectangle {k}: {(x0, y0, x1, y1)}")
        for i in range(g.xi(x0), g.xi(x1)):
            for j in range(g.yi(y0), g.yi(y1)):
                if not g.inside[i][j]:
                    raise ValueError(f"rectangle {k} leaves the polygon")
                if owner[i][j] >= 0:
                    raise ValueError(f"rectangles {owner[i][j]} and {k} overlap")
                owner[i][j] = k
    for i in range(g.nx):
        for j in range(g.ny):
            if g.inside[i][j] and owner[i][j] < 0:
                raise ValueError(f"polygon area near {(g.xs[i], g.ys[j])} is not covered")
    return g, owner


def stabbing_number_rects(poly: Polygon, rp: RectPartition) -> StabReport:
    g, owner = _rect_grid(poly, rp)
    best_val = 0
    best = None
    for orient, nrows, ncells, cell, along, cross in (
        ("H", g.ny, g.nx, lambda i, j: owner[i][j], g.xs, g.ys),
        ("V", g.nx, g.ny, lambda j, i: owner[i][j], g.ys, g.xs),
    ):
        for r in range(nrows):
            seen: set[int] = set()
            start = None
            for k in range(ncells + 1):
                o = cell(k, r) if k < ncells else -1
                if o >= 0:
                    if start is None:
                        start = k
                    seen.add(o)
                elif start is not None:
                    if len(seen) > best_val:
                        best_val = len(seen)
                        rep = (cross[r] + cross[r + 1], 2 * along[start], 2 * along[k])
                        best = StabClass(0, orient, "strip", rep, (), ())
                    seen = set()
                    start = None
    return StabReport(best_val, best)


def is_minimal(poly: Polygon, cp: ConformingPartition) -> bool:
    st = poly.structure
    for s in cp.chosen:
        if all(
            (st.reflex[st.vertex_of[a]].v if st.segments[s].orientation == "H" else st.reflex[st.vertex_of[a]].h) in cp.chosen
            for a in st.segments[s].apexes
        ):
            return False
    return True


def _covered_segments(poly: Polygon, rects: list[tuple]) -> frozenset[int]:
    """Reflex segments whose whole extent lies on rectangle boundaries."""
    hcov: dict = {}
    vcov: dict = {}
    for x0, y0, x1, y1 in rects:
        for y in (y0, y1):
            hcov.setdefault(y, []).append((x0, x1))
        for x in (x0, x1):
            vcov.setdefault(x, []).append((y0, y1))

    def covered(intervals, lo, hi):
        pos = lo
        for a, b in sorted(intervals):
            if a > pos:
                break
            pos = max(pos, b)
            if pos >= hi:
                return True
        return pos >= hi

    out = set()
    for s in poly.structure.segments:
        table = hcov if s.orientation == "H" else vcov
        if covered(table.get(s.line, []), s.lo, s.hi):
            out.add(s.index)
    return frozenset(out)


def eliminate_steiner_thin(poly: Polygon, rp: RectPartition) -> ConformingPartition:
    """Merge rectangles across non-reflex shared sides until the partition conforms."""
    from .geom import is_thin

    if not is_thin(poly):
        raise ValueError("eliminate_steiner_thin needs a thin polygon: two reflex segments cross")
    original = stabbing_number_rects(poly, rp).value
    segs = poly.structure.segments
    rects = [tuple(r) for r in rp.rects]

    def side_on_reflex(orient, line, lo, hi):
        return any(s.orientation == orient and s.line == line and s.lo <= lo and hi <= s.hi for s in segs)

    def find_merge(allow_reflex: bool, covered: frozenset[int]):
        by_side: dict = {}
        for k, (x0, y0, x1, y1) in enumerate(rects):
            by_side.setdefault(("V", x1, y0, y1, "left"), []).append(k)
            by_side.setdefault(("V", x0, y0, y1, "right"), []).append(k)
            by_side.setdefault(("H", y1, x0, x1, "below"), []).append(k)
            by_side.setdefault(("H", y0, x0, x1, "above"), []).append(k)
        for (o, line, lo, hi, role), ks in sorted(by_side.items(), key=lambda kv: str(kv[0])):
            if role not in ("left", "below"):
                continue
            other = by_side.get((o, line, lo, hi, "right" if role == "left" else "above"))
            if not other:
                continue
            on_reflex = side_on_reflex(o, line, lo, hi)
            if on_reflex and not allow_reflex:
                continue
            if on_reflex:
                owner = [s for s in segs if s.orientation == o and s.line == line and s.lo <= lo and hi <= s.hi][0]
                if owner.index in covered:
                    continue
            return ks[0], other[0]
        return None

    while True:
        covered = _covered_segments(poly, rects)
        pair = find_merge(False, covered)
        if pair is None and check_conforming(poly, covered):
            pair = find_merge(True, covered)
        if pair is None:
            break
        a, b = pair
        ra, rb = rects[a], rects[b]
        merged = (min(ra[0], rb[0]), min(ra[1], rb[1]), max(ra[2], rb[2]), max(ra[3], rb[3]))
        rects = [r for k, r in enumerate(rects) if k not in (a, b)] + [merged]
    chosen = _covered_segments(poly, rects)
    problems = check_conforming(poly, chosen)
    if problems:
        raise AssertionError(f"merging stopped without a conforming partition: {problems}")
    # every chosen segment lies on rectangle sides, so each face is a union of
    # rectangles; dropping redundant segments only coarsens further
    for s in sorted(chosen):
        if not check_conforming(poly, chosen - {s}):
            chosen = chosen - {s}
    cp = ConformingPartition(poly, chosen)
    value = stabbing_number(poly, chosen)
    if value > original:
        raise AssertionError(f"stabbing number grew from {original} to {value}")
    return cp


def as_fraction_rects(rects: Iterable[Iterable]) -> RectPartition:
    return RectPartition(tuple(tuple(Fraction(c) for c in r) for r in rects))
