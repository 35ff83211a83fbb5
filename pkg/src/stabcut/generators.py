"""Seed-deterministic polygon families for tests and cross-validation."""

from __future__ import annotations

import random
from typing import Callable

from .fixtures import comb
from .geom import Point, Polygon, find_gates, is_general_position, is_thin, validate
from .grid import Grid, trace_cells

FAMILIES = ("thin", "general-position", "comb", "staircase", "random-holes", "random")


def _blocks(member: set, c: tuple[int, int]) -> bool:
    i, j = c
    return any(all((i + a, j + b) in member or (i + a, j + b) == c for a in (di, di + 1) for b in (dj, dj + 1))
               for di in (-1, 0) for dj in (-1, 0))


def _grow(rng: random.Random, w: int, h: int, cells: int, corridors: bool = False) -> set[tuple[int, int]]:
    """Random connected cell set; ``corridors`` forbids 2x2 blocks of cells."""
    start = (rng.randrange(w), rng.randrange(h))
    member = {start}
    frontier = [start]
    while len(member) < cells and frontier:
        i, j = rng.choice(frontier)
        nbrs = [(i + di, j + dj) for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1))]
        nbrs = [c for c in nbrs if 0 <= c[0] < w and 0 <= c[1] < h and c not in member
                and not (corridors and _blocks(member, c))]
        if not nbrs:
            frontier.remove((i, j))
            continue
        c = rng.choice(nbrs)
        member.add(c)
        frontier.append(c)
    return member


def _fill_holes(member: set, w: int, h: int) -> set:
    outside = set()
    stack = [(-1, -1)]
    while stack:
        c = stack.pop()
        if c in outside or c in member or not (-1 <= c[0] <= w and -1 <= c[1] <= h):
            continue
        outside.add(c)
        i, j = c
        stack += [(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)]
    return {(i, j) for i in range(w) for j in range(h) if (i, j) not in outside}


def _carve(rng: random.Random, member: set, count: int) -> set:
    """Remove up to ``count`` cells whose eight neighbours are all members."""
    member = set(member)
    for _ in range(count):
        inner = sorted(c for c in member
                       if all((c[0] + di, c[1] + dj) in member for di in (-1, 0, 1) for dj in (-1, 0, 1)))
        if not inner:
            break
        member.discard(rng.choice(inner))
    return member


def cell_polygon(member: set, w: int, h: int, xs: list[int] | None = None, ys: list[int] | None = None) -> Polygon:
    xs = xs or list(range(w + 1))
    ys = ys or list(range(h + 1))
    g = Grid(xs, ys)
    return trace_cells(g, lambda i, j: (i, j) in member)


def random_polygon(rng: random.Random, max_reflex: int = 12, holes: bool = False,
                   size: int = 6, tries: int = 200) -> Polygon:
    """A random cell polygon with at most ``max_reflex`` reflex vertices."""
    for _ in range(tries):
        lo = 3 if holes else 2
        w = rng.randint(lo, size)
        h = rng.randint(lo, size)
        member = _grow(rng, w, h, rng.randint(w * h // 2 if holes else 2, w * h))
        member = _fill_holes(member, w, h)
        if holes:
            member = _carve(rng, member, rng.randint(1, 3))
        xs = sorted(rng.sample(range(3 * (w + 1)), w + 1))
        ys = sorted(rng.sample(range(3 * (h + 1)), h + 1))
        try:
            poly = cell_polygon(member, w, h, xs, ys)
        except ValueError:
            continue  # pinched or disconnected cell sets
        if holes and not poly.holes:
            continue
        if len(poly.structure.reflex) <= max_reflex:
            return poly
    raise RuntimeError("could not generate a polygon with the requested parameters")


def corridor_polygon(rng: random.Random, max_reflex: int = 12, size: int = 7, tries: int = 200) -> Polygon:
    """Network of width-one corridors; such polygons are always thin."""
    for _ in range(tries):
        w = rng.randint(2, size)
        h = rng.randint(2, size)
        member = _grow(rng, w, h, rng.randint(2, w * h), corridors=True)
        xs = sorted(rng.sample(range(3 * (w + 1)), w + 1))
        ys = sorted(rng.sample(range(3 * (h + 1)), h + 1))
        try:
            poly = cell_polygon(member, w, h, xs, ys)
        except ValueError:
            continue
        if len(poly.structure.reflex) <= max_reflex:
            return poly
    raise RuntimeError("could not generate a polygon with the requested parameters")


def explode(poly: Polygon, rng: random.Random) -> Polygon:
    """Give every edge its own line by small distinct shifts, keeping the combinatorics."""
    n = poly.n
    scale = 4 * n + 4
    xs_used: dict[int, list[int]] = {}
    ys_used: dict[int, list[int]] = {}
    rings = []
    for ring in poly.rings():
        m = len(ring)
        shift_x = {}
        shift_y = {}
        for i in range(m):
            a, b = ring[i], ring[(i + 1) % m]
            if a.x == b.x:
                shift_x[i] = a.x
            else:
                shift_y[i] = a.y
        offs_x = {}
        offs_y = {}
        for i, x in shift_x.items():
            used = xs_used.setdefault(x, [])
            offs_x[i] = len(used)
            used.append(i)
        for i, y in shift_y.items():
            used = ys_used.setdefault(y, [])
            offs_y[i] = len(used)
            used.append(i)
        rings.append((ring, offs_x, offs_y))
    # randomize the order of shifts on each line
    perm_x = {x: rng.sample(range(len(v)), len(v)) for x, v in xs_used.items()}
    perm_y = {y: rng.sample(range(len(v)), len(v)) for y, v in ys_used.items()}
    out = []
    for ring, offs_x, offs_y in rings:
        m = len(ring)
        pts = []
        for i in range(m):
            # vertex i joins edge i-1 and edge i; exactly one of them is vertical
            prev, cur = (i - 1) % m, i
            v_edge = cur if cur in offs_x else prev
            h_edge = cur if cur in offs_y else prev
            p = ring[i]
            x = p.x * scale + perm_x[p.x][offs_x[v_edge]]
            y = p.y * scale + perm_y[p.y][offs_y[h_edge]]
            pts.append(Point(x, y))
        out.append(pts)
    res = Polygon.from_rings(out[0], out[1:])
    if not validate(res).ok:
        raise ValueError("explosion broke the polygon")
    return res


def staircase(steps: int, rise: int = 1, run: int = 1) -> Polygon:
    """A monotone staircase with ``steps`` reflex corners."""
    pts = [Point(0, 0), Point(run * (steps + 1), 0)]
    x, y = run * (steps + 1), 0
    for _ in range(steps):
        y += rise
        pts.append(Point(x, y))
        x -= run
        pts.append(Point(x, y))
    pts.append(Point(x, y + rise))
    pts.append(Point(0, y + rise))
    return Polygon.from_rings(pts)


def _filtered(rng: random.Random, make: Callable[[], Polygon], ok: Callable[[Polygon], bool], tries: int = 2000) -> Polygon:
    for _ in range(tries):
        try:
            p = make()
        except (RuntimeError, ValueError):
            continue
        if ok(p):
            return p
    raise RuntimeError("family predicate is too hard to satisfy with these parameters")


def generate(family: str, rng: random.Random, max_reflex: int = 12) -> Polygon:
    if family == "random":
        return random_polygon(rng, max_reflex, holes=rng.random() < 0.5)
    if family == "random-holes":
        return random_polygon(rng, max_reflex, holes=True)
    if family == "thin":
        if rng.random() < 0.5:
            return corridor_polygon(rng, max_reflex)
        return _filtered(rng, lambda: random_polygon(rng, max_reflex), is_thin)
    if family == "thin-gate-free":
        least = rng.randint(0, min(4, max_reflex))
        return _filtered(rng, lambda: random_polygon(rng, max_reflex, holes=rng.random() < 0.3),
                         lambda p: len(p.structure.reflex) >= least and is_thin(p) and not find_gates(p))
    if family == "general-position":
        least = rng.randint(0, min(4, max_reflex))
        return _filtered(rng, lambda: explode(random_polygon(rng, max_reflex, holes=rng.random() < 0.3), rng),
                         lambda p: len(p.structure.reflex) >= least and is_thin(p) and is_general_position(p))
    if family == "comb":
        return comb(rng.randint(1, max(1, max_reflex // 4)))
    if family == "staircase":
        return staircase(rng.randint(1, max(1, max_reflex)), rng.randint(1, 3), rng.randint(1, 3))
    raise ValueError(f"unknown family {family!r}")


def generate_corpus(family: str, count: int, seed: int, max_reflex: int = 12) -> list[Polygon]:
    rng = random.Random(f"{family}:{seed}")
    return [generate(family, rng, max_reflex) for _ in range(count)]
