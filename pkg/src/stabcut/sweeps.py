"""Sweep-line constructions that avoid the compressed grid.

The faces of the horizontal decomposition (polygon plus all horizontal
reflex segments) are rectangles, and each one is exactly one horizontal
strip stab class: no vertical reflex segment ends inside a face.  The
vertical decomposition gives the vertical classes the same way.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from sortedcontainers import SortedKeyList

from .geom import Polygon
from .rayshoot import OrthogonalRayShooter


@dataclass(frozen=True)
class FaceStab:
    index: int
    orientation: str
    rect: tuple[int, int, int, int]  # xmin, ymin, xmax, ymax
    line: int  # doubled cross coordinate of the representative
    lo: int  # doubled extent along the stab
    hi: int


def _frame_faces(walls, upstarts) -> list[tuple[int, int, int, int]]:
    """Faces of a decomposition in a frame where walls are horizontal.

    ``walls`` holds ``(y, x0, x1, up, down)`` with ``up``/``down`` telling
    on which side the polygon interior lies; ``upstarts`` holds lower
    endpoints of the frame-vertical edges.  Returns ``(x0, y0, x1, y1)``.
    """
    by_level = defaultdict(list)
    for w in walls:
        by_level[w[0]].append(w)
    open_faces = SortedKeyList(key=lambda f: f[0])
    out = []
    for y in sorted(by_level):
        ws = sorted(by_level[y], key=lambda w: w[1])
        for _, a, b, _, _ in ws:
            i = max(open_faces.bisect_key_right(a) - 1, 0)
            while i < len(open_faces) and open_faces[i][0] < b:
                f = open_faces[i]
                if f[1] > a:
                    out.append((f[0], f[2], f[1], y))
                    del open_faces[i]
                else:
                    i += 1
        cur = None
        for _, a, b, up, _ in ws:
            if not up:
                continue
            if cur is not None and cur[1] == a and (a, y) not in upstarts:
                cur[1] = b
                continue
            if cur is not None:
                open_faces.add((cur[0], cur[1], y))
            cur = [a, b]
        if cur is not None:
            open_faces.add((cur[0], cur[1], y))
    if len(open_faces):
        raise AssertionError("decomposition sweep left faces open")
    return out


def decomposition_faces(poly: Polygon, orientation: str) -> list[tuple[int, int, int, int]]:
    """Rectangles of the decomposition by all reflex segments of ``orientation``."""
    segs = [s for s in poly.structure.segments if s.orientation == orientation]
    walls = []
    upstarts = set()
    if orientation == "H":
        for _, _, a, b in poly.edges():
            if a.y == b.y:
                walls.append((a.y, min(a.x, b.x), max(a.x, b.x), b.x > a.x, b.x < a.x))
            else:
                upstarts.add((a.x, min(a.y, b.y)))
        walls += [(s.line, s.lo, s.hi, True, True) for s in segs]
        return sorted(_frame_faces(walls, upstarts))
    # transpose: frame x = original y, frame y = original x
    for _, _, a, b in poly.edges():
        if a.x == b.x:
            walls.append((a.x, min(a.y, b.y), max(a.y, b.y), b.y < a.y, b.y > a.y))
        else:
            upstarts.add((a.y, min(a.x, b.x)))
    walls += [(s.line, s.lo, s.hi, True, True) for s in segs]
    return sorted((y0, x0, y1, x1) for x0, y0, x1, y1 in _frame_faces(walls, upstarts))


def face_stabs(poly: Polygon) -> list[FaceStab]:
    """One representative per strip stab class, horizontal classes first."""
    out = []
    for x0, y0, x1, y1 in decomposition_faces(poly, "H"):
        out.append(FaceStab(len(out), "H", (x0, y0, x1, y1), y0 + y1, 2 * x0, 2 * x1))
    for x0, y0, x1, y1 in decomposition_faces(poly, "V"):
        out.append(FaceStab(len(out), "V", (x0, y0, x1, y1), x0 + x1, 2 * y0, 2 * y1))
    return out


def edge_entries(poly: Polygon, orientation: str) -> list[tuple[int, int, int, int]]:
    """Closed doubled-coordinate polygon edges with ids ``-1, -2, ...``."""
    out = []
    for _, _, a, b in poly.edges():
        if (a.y == b.y) == (orientation == "H"):
            if orientation == "H":
                out.append((-1 - len(out), 2 * a.y, 2 * min(a.x, b.x), 2 * max(a.x, b.x)))
            else:
                out.append((-1 - len(out), 2 * a.x, 2 * min(a.y, b.y), 2 * max(a.y, b.y)))
    return out


def segment_entries(poly: Polygon, orientation: str, only=None) -> list[tuple[int, int, int, int]]:
    """Open reflex segments as shrunken closed doubled intervals."""
    return [
        (s.index, 2 * s.line, 2 * s.lo + 1, 2 * s.hi - 1)
        for s in poly.structure.segments
        if s.orientation == orientation and (only is None or s.index in only)
    ]


def walk(shooter: OrthogonalRayShooter, line: int, lo: int, orientation: str):
    """Yield stored ids hit along a ray, in order, until (and including) an edge id."""
    if orientation == "H":
        pos, d = (lo, line), "+x"
    else:
        pos, d = (line, lo), "+y"
    while True:
        hit = shooter.query(pos, d)
        if hit is None:
            return
        yield hit
        if hit < 0:
            return
        at = shooter.segment(hit)[0]
        pos = (at, line) if orientation == "H" else (line, at)


def fast_stabbing_number(poly: Polygon, chosen, stabs: list[FaceStab] | None = None) -> int:
    """Stabbing number of a conforming partition without building the grid."""
    chosen = frozenset(chosen)
    stabs = stabs if stabs is not None else face_stabs(poly)
    shooters = {
        o: OrthogonalRayShooter(o, segment_entries(poly, o, chosen) + edge_entries(poly, o))
        for o in ("H", "V")
    }
    best = 1
    for c in stabs:
        perp = "V" if c.orientation == "H" else "H"
        hits = sum(1 for h in walk(shooters[perp], c.line, c.lo, c.orientation) if h >= 0)
        best = max(best, hits + 1)
    return best


def chosen_cross(poly: Polygon, chosen) -> tuple[int, int] | None:
    """Some crossing pair among chosen segments, found with one query per segment."""
    chosen = frozenset(chosen)
    segs = poly.structure.segments
    shooters = {
        o: OrthogonalRayShooter(o, segment_entries(poly, o, chosen) + edge_entries(poly, o))
        for o in ("H", "V")
    }
    for s in sorted(chosen):
        sg = segs[s]
        perp = "V" if sg.orientation == "H" else "H"
        hit = next(walk(shooters[perp], 2 * sg.line, 2 * sg.lo, sg.orientation), None)
        if hit is not None and hit >= 0:
            return (s, hit) if sg.orientation == "H" else (hit, s)
    return None
