"""Compressed-grid helpers shared by the small-instance code paths.

A grid is the product of the sorted distinct x and y coordinates of a
polygon (plus any extra coordinates).  Cell (i, j) is the rectangle
[xs[i], xs[i+1]] x [ys[j], ys[j+1]].  Wall units along grid lines carry an
owner: ``EDGE`` for polygon boundary, a reflex segment index, or ``None``.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import deque
from typing import Callable, Iterable

from .geom import Point, Polygon, signed_area2

EDGE = -1


class Grid:
    def __init__(self, xs: Iterable[int], ys: Iterable[int]):
        self.xs = sorted(set(xs))
        self.ys = sorted(set(ys))
        self.nx = len(self.xs) - 1
        self.ny = len(self.ys) - 1
        self._xi = {x: i for i, x in enumerate(self.xs)}
        self._yi = {y: j for j, y in enumerate(self.ys)}
        # inside[i][j] for cells; vwall[i][j] is the unit on x = xs[i] over row j;
        # hwall[i][j] is the unit on y = ys[j] over column i
        self.inside = [[False] * self.ny for _ in range(self.nx)]
        self.vwall: list[list[int | None]] = [[None] * self.ny for _ in range(self.nx + 1)]
        self.hwall: list[list[int | None]] = [[None] * (self.ny + 1) for _ in range(self.nx)]

    def xi(self, x: int) -> int:
        return self._xi[x]

    def yi(self, y: int) -> int:
        return self._yi[y]

    def cell_of_point(self, x: float, y: float) -> tuple[int, int]:
        """Cell containing a point strictly inside a cell."""
        return bisect_left(self.xs, x) - 1, bisect_left(self.ys, y) - 1

    def cell_area(self, i: int, j: int) -> int:
        return (self.xs[i + 1] - self.xs[i]) * (self.ys[j + 1] - self.ys[j])

    def mark_vertical(self, x: int, y1: int, y2: int, owner: int) -> None:
        i = self._xi[x]
        for j in range(self._yi[min(y1, y2)], self._yi[max(y1, y2)]):
            self.vwall[i][j] = owner

    def mark_horizontal(self, y: int, x1: int, x2: int, owner: int) -> None:
        j = self._yi[y]
        for i in range(self._xi[min(x1, x2)], self._xi[max(x1, x2)]):
            self.hwall[i][j] = owner


def polygon_grid(poly: Polygon, extra_xs: Iterable[int] = (), extra_ys: Iterable[int] = (), segments=()) -> Grid:
    """Grid over a polygon with boundary walls and the given reflex segments."""
    xs = {p.x for p in poly.vertices()} | set(extra_xs)
    ys = {p.y for p in poly.vertices()} | set(extra_ys)
    g = Grid(xs, ys)
    toggles = [[0] * (g.ny + 1) for _ in range(g.nx)]
    for _, _, a, b in poly.edges():
        if a.y == b.y:
            g.mark_horizontal(a.y, a.x, b.x, EDGE)
            j = g.yi(a.y)
            for i in range(g.xi(min(a.x, b.x)), g.xi(max(a.x, b.x))):
                toggles[i][j] ^= 1
        else:
            g.mark_vertical(a.x, a.y, b.y, EDGE)
    for i in range(g.nx):
        state = 0
        col = g.inside[i]
        tog = toggles[i]
        for j in range(g.ny):
            state ^= tog[j]
            col[j] = bool(state)
    for s in segments:
        if s.orientation == "H":
            g.mark_horizontal(s.line, s.lo, s.hi, s.index)
        else:
            g.mark_vertical(s.line, s.lo, s.hi, s.index)
    return g


def label_components(g: Grid, blocks: Callable[[int | None], bool]) -> tuple[list[list[int]], int]:
    """Connected components of inside cells; a wall separates cells iff ``blocks(owner)``."""
    label = [[-1] * g.ny for _ in range(g.nx)]
    count = 0
    for i0 in range(g.nx):
        for j0 in range(g.ny):
            if not g.inside[i0][j0] or label[i0][j0] >= 0:
                continue
            label[i0][j0] = count
            queue = deque([(i0, j0)])
            while queue:
                i, j = queue.popleft()
                if i + 1 < g.nx and label[i + 1][j] < 0 and g.inside[i + 1][j] and not blocks(g.vwall[i + 1][j]):
                    label[i + 1][j] = count
                    queue.append((i + 1, j))
                if i > 0 and label[i - 1][j] < 0 and g.inside[i - 1][j] and not blocks(g.vwall[i][j]):
                    label[i - 1][j] = count
                    queue.append((i - 1, j))
                if j + 1 < g.ny and label[i][j + 1] < 0 and g.inside[i][j + 1] and not blocks(g.hwall[i][j + 1]):
                    label[i][j + 1] = count
                    queue.append((i, j + 1))
                if j > 0 and label[i][j - 1] < 0 and g.inside[i][j - 1] and not blocks(g.hwall[i][j]):
                    label[i][j - 1] = count
                    queue.append((i, j - 1))
            count += 1
    return label, count


def component_boxes(g: Grid, label: list[list[int]], count: int) -> list[tuple[int, int, int, int, int]]:
    """Per component: (imin, jmin, imax, jmax, area) over cell indices (inclusive)."""
    boxes = [[g.nx, g.ny, -1, -1, 0] for _ in range(count)]
    for i in range(g.nx):
        for j in range(g.ny):
            c = label[i][j]
            if c >= 0:
                b = boxes[c]
                b[0] = min(b[0], i)
                b[1] = min(b[1], j)
                b[2] = max(b[2], i)
                b[3] = max(b[3], j)
                b[4] += g.cell_area(i, j)
    return [tuple(b) for b in boxes]


def box_is_full(g: Grid, box) -> bool:
    i0, j0, i1, j1, area = box
    return (g.xs[i1 + 1] - g.xs[i0]) * (g.ys[j1 + 1] - g.ys[j0]) == area


def trace_cells(g: Grid, member: Callable[[int, int], bool]) -> Polygon:
    """Boundary of a connected set of cells as a Polygon (outer ring plus holes).

    Raises ``ValueError`` if the set is empty, disconnected, or pinched at a
    grid point (two rings touching).
    """
    # directed boundary units keep the region on their left
    out: dict[tuple[int, int], list[tuple[int, int]]] = {}

    def add(a, b):
        out.setdefault(a, []).append(b)

    any_cell = None
    for i in range(g.nx):
        for j in range(g.ny):
            if not member(i, j):
                continue
            any_cell = (i, j)
            if j == 0 or not member(i, j - 1):
                add((i, j), (i + 1, j))
            if i == g.nx - 1 or not member(i + 1, j):
                add((i + 1, j), (i + 1, j + 1))
            if j == g.ny - 1 or not member(i, j + 1):
                add((i + 1, j + 1), (i, j + 1))
            if i == 0 or not member(i - 1, j):
                add((i, j + 1), (i, j))
    if any_cell is None:
        raise ValueError("empty cell set")
    for a, targets in out.items():
        if len(targets) > 1:
            raise ValueError(f"cell set is pinched at {(g.xs[a[0]], g.ys[a[1]])}")
    rings = []
    seen = set()
    for start in sorted(out):
        if start in seen:
            continue
        pts = []
        cur = start
        while cur not in seen:
            seen.add(cur)
            pts.append(cur)
            cur = out[cur][0]
        ring = []
        m = len(pts)
        for k in range(m):
            a, b, c = pts[k - 1], pts[k], pts[(k + 1) % m]
            if not ((a[0] == b[0] == c[0]) or (a[1] == b[1] == c[1])):
                ring.append(Point(g.xs[b[0]], g.ys[b[1]]))
        rings.append(tuple(ring))
    outers = [r for r in rings if signed_area2(r) > 0]
    holes = [r for r in rings if signed_area2(r) < 0]
    if len(outers) != 1:
        raise ValueError(f"cell set has {len(outers)} components")
    # a hole ring with no enclosing piece would show up as a second outer ring
    poly = Polygon(outers[0], tuple(sorted(holes)))
    return poly


def union_polygons(polys: list[Polygon]) -> Polygon:
    """Union of interior-disjoint or overlapping polygons sharing edges."""
    xs = {p.x for P in polys for p in P.vertices()}
    ys = {p.y for P in polys for p in P.vertices()}
    g = Grid(xs, ys)
    covered = [[False] * g.ny for _ in range(g.nx)]
    for P in polys:
        x0, y0, x1, y1 = P.bbox()
        i0, i1, j0, j1 = g.xi(x0), g.xi(x1), g.yi(y0), g.yi(y1)
        toggles = [[0] * (j1 - j0) for _ in range(i1 - i0)]
        for _, _, a, b in P.edges():
            if a.y == b.y and a.y < y1:
                j = g.yi(a.y) - j0
                for i in range(g.xi(min(a.x, b.x)), g.xi(max(a.x, b.x))):
                    toggles[i - i0][j] ^= 1
        for i in range(i1 - i0):
            state = 0
            cov = covered[i + i0]
            tog = toggles[i]
            for j in range(j1 - j0):
                state ^= tog[j]
                if state:
                    cov[j + j0] = True
    return trace_cells(g, lambda i, j: covered[i][j])
