"""Pixelation of a polygon by its reflex segments, the graphs built on it,
and the equivalence classes of stabbing segments."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .geom import Point, Polygon, ReflexSegment, Structure
from .grid import EDGE, Grid, box_is_full, component_boxes, label_components, polygon_grid


@dataclass(frozen=True)
class Pixel:
    index: int
    rect: tuple[int, int, int, int]  # xmin, ymin, xmax, ymax
    # reflex segment indices on the bottom, right, top and left sides
    boundary_reflex: tuple[frozenset, frozenset, frozenset, frozenset]

    @property
    def area(self) -> int:
        x0, y0, x1, y1 = self.rect
        return (x1 - x0) * (y1 - y0)

    def corners(self) -> tuple[Point, Point, Point, Point]:
        x0, y0, x1, y1 = self.rect
        return Point(x0, y0), Point(x1, y0), Point(x1, y1), Point(x0, y1)


@dataclass(frozen=True)
class StabClass:
    """One equivalence class of maximal stabbing segments.

    ``representative`` is ``(line, lo, hi)`` in doubled coordinates: the
    segment lies on the fixed coordinate ``line`` and spans the open range
    ``(lo, hi)``.  ``kind`` is ``"strip"`` (odd line) or ``"line"`` (even).
    """

    index: int
    orientation: str
    kind: str
    representative: tuple[int, int, int]
    pixels: tuple[int, ...]
    crossed_reflex: tuple[int, ...]

    def to_json(self) -> dict:
        line, lo, hi = self.representative
        if self.orientation == "H":
            a, b = (lo / 2, line / 2), (hi / 2, line / 2)
        else:
            a, b = (line / 2, lo / 2), (line / 2, hi / 2)
        return {"orientation": self.orientation, "kind": self.kind, "from": a, "to": b}


@dataclass
class PixelationGraph:
    """Vertices are grid points where wall units meet non-collinearly or branch."""

    vertices: list[Point]
    index: dict[Point, int]
    # (u, v, owner, orientation): owner is EDGE or a reflex segment index
    edges: list[tuple[int, int, int, str]]
    on_boundary: list[bool]
    is_reflex_corner: list[bool]

    def degree(self) -> list[int]:
        deg = [0] * len(self.vertices)
        for u, v, _, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


@dataclass
class RadialGraph:
    """Bipartite vertex/pixel incidence graph with quadrant labels.

    Graph vertices ``0..nv-1`` are pixelation-graph vertices; ``nv + f`` is
    pixel ``f``.  An edge ``(f, v, q)`` says pixel ``f`` occupies quadrant
    ``q`` of vertex ``v`` (1 = upper right, then counterclockwise).
    """

    nv: int
    npix: int
    edges: list[tuple[int, int, int]]
    corner: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.nv + self.npix

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {i: set() for i in range(self.n)}
        for f, v, _ in self.edges:
            adj[self.nv + f].add(v)
            adj[v].add(self.nv + f)
        return adj


class Pixelation:
    """Pixels of a polygon plus derived graphs and stab classes."""

    def __init__(self, poly: Polygon):
        self.poly = poly
        st: Structure = poly.structure
        self.structure = st
        self.segments: list[ReflexSegment] = st.segments
        g = polygon_grid(poly, segments=st.segments)
        self.grid: Grid = g
        label, count = label_components(g, lambda owner: owner is not None)
        boxes = component_boxes(g, label, count)
        order = sorted(range(count), key=lambda c: (g.ys[boxes[c][1]], g.xs[boxes[c][0]]))
        remap = {c: k for k, c in enumerate(order)}
        self.cell_pixel = [[remap[c] if c >= 0 else -1 for c in col] for col in label]
        pixels = []
        for k, c in enumerate(order):
            box = boxes[c]
            if not box_is_full(g, box):
                raise AssertionError(f"pixel {k} is not a rectangle")
            i0, j0, i1, j1, _ = box
            bottom = frozenset(o for i in range(i0, i1 + 1) if (o := g.hwall[i][j0]) is not None and o >= 0)
            top = frozenset(o for i in range(i0, i1 + 1) if (o := g.hwall[i][j1 + 1]) is not None and o >= 0)
            left = frozenset(o for j in range(j0, j1 + 1) if (o := g.vwall[i0][j]) is not None and o >= 0)
            right = frozenset(o for j in range(j0, j1 + 1) if (o := g.vwall[i1 + 1][j]) is not None and o >= 0)
            pixels.append(Pixel(k, (g.xs[i0], g.ys[j0], g.xs[i1 + 1], g.ys[j1 + 1]), (bottom, right, top, left)))
        self.pixels = pixels

    def pixel_at(self, x2: int, y2: int) -> int:
        """Pixel containing a doubled-coordinate point in the interior of a pixel."""
        i, j = self.grid.cell_of_point(x2 / 2, y2 / 2)
        return self.cell_pixel[i][j]

    @cached_property
    def graph(self) -> PixelationGraph:
        g = self.grid
        st = self.structure
        verts = []
        index = {}
        on_boundary = []
        reflex_corner = []
        reflex_pts = set(st.vertex_of)
        for i in range(g.nx + 1):
            for j in range(g.ny + 1):
                left = g.hwall[i - 1][j] if i > 0 else None
                right = g.hwall[i][j] if i < g.nx else None
                down = g.vwall[i][j - 1] if j > 0 else None
                up = g.vwall[i][j] if j < g.ny else None
                hs = (left is not None) + (right is not None)
                vs = (down is not None) + (up is not None)
                if hs + vs >= 3 or (hs == 1 and vs == 1):
                    p = Point(g.xs[i], g.ys[j])
                    index[p] = len(verts)
                    verts.append(p)
                    on_boundary.append(EDGE in (left, right, down, up))
                    reflex_corner.append(p in reflex_pts)
        edges = []
        # walk along each grid line joining consecutive vertices
        for j in range(g.ny + 1):
            start = None
            for i in range(g.nx + 1):
                p = Point(g.xs[i], g.ys[j])
                if start is not None and p in index:
                    edges.append((index[start[0]], index[p], start[1], "H"))
                    start = None
                if p in index and i < g.nx and g.hwall[i][j] is not None:
                    start = (p, g.hwall[i][j])
        for i in range(g.nx + 1):
            start = None
            for j in range(g.ny + 1):
                p = Point(g.xs[i], g.ys[j])
                if start is not None and p in index:
                    edges.append((index[start[0]], index[p], start[1], "V"))
                    start = None
                if p in index and j < g.ny and g.vwall[i][j] is not None:
                    start = (p, g.vwall[i][j])
        return PixelationGraph(verts, index, edges, on_boundary, reflex_corner)

    @cached_property
    def reflex_index(self) -> dict[int, list[int]]:
        gp = self.graph
        res: dict[int, list[int]] = {s.index: [] for s in self.segments}
        for s in self.segments:
            a, b = s.a, s.b
            for v, p in enumerate(gp.vertices):
                if s.orientation == "H" and p.y == s.line and s.lo <= p.x <= s.hi:
                    res[s.index].append(v)
                elif s.orientation == "V" and p.x == s.line and s.lo <= p.y <= s.hi:
                    res[s.index].append(v)
            res[s.index].sort(key=lambda v: gp.vertices[v])
            assert gp.vertices[res[s.index][0]] == a and gp.vertices[res[s.index][-1]] == b
        return res

    @cached_property
    def radial(self) -> RadialGraph:
        gp = self.graph
        edges = []
        corner = {}
        on_sides: dict[int, set[int]] = {}
        for f in self.pixels:
            x0, y0, x1, y1 = f.rect
            for q, (x, y) in zip((1, 2, 3, 4), ((x0, y0), (x1, y0), (x1, y1), (x0, y1))):
                v = gp.index.get(Point(x, y))
                if v is None:
                    raise AssertionError(f"pixel {f.index} corner {(x, y)} is not a graph vertex")
                edges.append((f.index, v, q))
                corner[(f.index, q)] = v
        for v, p in enumerate(gp.vertices):
            # a vertex strictly inside a pixel side would break degree-4 pixels
            for f in self._pixels_touching(p):
                x0, y0, x1, y1 = self.pixels[f].rect
                if (p.x, p.y) not in ((x0, y0), (x1, y0), (x1, y1), (x0, y1)):
                    on_sides.setdefault(f, set()).add(v)
        if on_sides:
            raise AssertionError(f"graph vertices inside pixel sides: {on_sides}")
        return RadialGraph(len(gp.vertices), len(self.pixels), edges, corner)

    def _pixels_touching(self, p: Point) -> set[int]:
        g = self.grid
        i, j = g.xi(p.x), g.yi(p.y)
        res = set()
        for di in (-1, 0):
            for dj in (-1, 0):
                a, b = i + di, j + dj
                if 0 <= a < g.nx and 0 <= b < g.ny and self.cell_pixel[a][b] >= 0:
                    res.add(self.cell_pixel[a][b])
        return res

    def wedge_pixel(self, p) -> Pixel:
        st = self.structure
        p = Point(*p)
        if p not in st.vertex_of:
            raise ValueError(f"{tuple(p)} is not a reflex vertex")
        rv = st.reflex[st.vertex_of[p]]
        i = self.grid.xi(p.x) - (rv.hdir < 0)
        j = self.grid.yi(p.y) - (rv.vdir < 0)
        return self.pixels[self.cell_pixel[i][j]]

    @cached_property
    def classes(self) -> list[StabClass]:
        return _stab_classes(self)

    @cached_property
    def strip_classes(self) -> list[StabClass]:
        return [c for c in self.classes if c.kind == "strip"]

    @cached_property
    def max_cross(self) -> int:
        return max((len(c.crossed_reflex) for c in self.classes), default=0)


def pixelate(poly: Polygon) -> Pixelation:
    return Pixelation(poly)


def wedge_pixel(pix: Pixelation, p) -> Pixel:
    return pix.wedge_pixel(p)


def radial_graph(pix: Pixelation) -> RadialGraph:
    return pix.radial


def stab_classes(pix: Pixelation) -> list[StabClass]:
    return pix.classes


def _runs(cells: list[int]):
    """Maximal runs of consecutive inside cells along one row."""
    runs = []
    cur = None
    for k, c in enumerate(cells):
        if c < 0:
            if cur:
                runs.append(cur)
            cur = None
            continue
        if cur is None:
            cur = [k]
        else:
            cur.append(k)
    if cur:
        runs.append(cur)
    return runs


def _stab_classes(pix: Pixelation) -> list[StabClass]:
    g = pix.grid
    cp = pix.cell_pixel
    seen: set[tuple] = set()
    out: list[StabClass] = []

    def emit(orient, kind, rep, pixels, crossed):
        key = (orient, tuple(pixels))
        if key in seen:
            return
        seen.add(key)
        out.append(StabClass(len(out), orient, kind, rep, tuple(pixels), tuple(crossed)))

    def scan(orient, nrows, ncells, cell, wall, coords_along, coords_cross):
        for j in range(nrows):
            labels = [cell(i, j) for i in range(ncells)]
            for run in _runs(labels):
                pixels, crossed = [], []
                for k in run:
                    if pixels and pixels[-1] != labels[k]:
                        crossed.append(wall(k, j))
                    if not pixels or pixels[-1] != labels[k]:
                        pixels.append(labels[k])
                rep = (2 * coords_cross[j] + 1, 2 * coords_along[run[0]], 2 * coords_along[run[-1] + 1])
                emit(orient, "strip", rep, pixels, crossed)

    scan("H", g.ny, g.nx, lambda i, j: cp[i][j], lambda i, j: g.vwall[i][j], g.xs, g.ys)
    scan("V", g.nx, g.ny, lambda j, i: cp[i][j], lambda j, i: g.hwall[i][j], g.ys, g.xs)

    # grid-line classes on lines carrying a reflex segment, away from the segment
    hlines = sorted({s.line for s in pix.segments if s.orientation == "H"})
    vlines = sorted({s.line for s in pix.segments if s.orientation == "V"})
    for y in hlines:
        j = g.yi(y)
        _line_runs(pix, "H", j, g.nx, lambda i: (cp[i][j - 1], cp[i][j]), lambda i: g.hwall[i][j],
                   lambda i: (g.vwall[i][j - 1], g.vwall[i][j], g.hwall[i - 1][j], g.hwall[i][j]),
                   g.xs, y, emit)
    for x in vlines:
        i = g.xi(x)
        _line_runs(pix, "V", i, g.ny, lambda j: (cp[i - 1][j], cp[i][j]), lambda j: g.vwall[i][j],
                   lambda j: (g.hwall[i - 1][j], g.hwall[i][j], g.vwall[i][j - 1], g.vwall[i][j]),
                   g.ys, x, emit)
    return out


def _line_runs(pix, orient, fixed, nunits, sides, unit_wall, point_walls, along, line, emit):
    """Enumerate maximal interior segments on one grid line."""
    run: list[int] = []

    def flush():
        if not run:
            return
        if any(unit_wall(k) is not None for k in run):
            run.clear()
            return
        pixels, crossed = [], []
        for k in run:
            below, above = sides(k)
            assert below == above
            if pixels and pixels[-1] != below:
                # crossing point between units k-1 and k
                w = point_walls(k)
                crossed.append(w[0])
            if not pixels or pixels[-1] != below:
                pixels.append(below)
        emit(orient, "line", (2 * line, 2 * along[run[0]], 2 * along[run[-1] + 1]), pixels, crossed)
        run.clear()

    for k in range(nunits):
        a, b = sides(k)
        interior = a >= 0 and b >= 0 and unit_wall(k) != EDGE
        if not interior:
            flush()
            continue
        if run:
            walls = point_walls(k)
            if EDGE in walls:
                flush()
        run.append(k)
    flush()
