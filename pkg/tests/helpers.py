"""Independent brute-force oracles and hypothesis strategies shared by the tests."""

from __future__ import annotations

import random
from itertools import product

from hypothesis import strategies as st

from stabcut.generators import generate
from stabcut.geom import Point, Polygon, locate
from stabcut.partition import ConformingPartition, check_conforming, is_minimal, rectangles_of

DIRS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def polygons(family: str, max_reflex: int = 12):
    """Strategy drawing seed-determined polygons of one generator family."""
    return st.integers(0, 2**32 - 1).map(lambda seed: generate(family, random.Random(seed), max_reflex))


def brute_reflex_vertices(poly: Polygon) -> set[Point]:
    out = set()
    for p in poly.vertices():
        inside = sum(locate(poly, 2 * p.x + dx, 2 * p.y + dy) == "inside" for dx in (-1, 1) for dy in (-1, 1))
        if inside == 3:
            out.add(p)
    return out


def brute_segments(poly: Polygon) -> set[tuple[Point, Point, str]]:
    """(apex, far end, orientation) for every reflex vertex, found by half-unit walks."""
    out = set()
    for p in brute_reflex_vertices(poly):
        for dx, dy in DIRS:
            if locate(poly, 2 * p.x + dx, 2 * p.y + dy) != "inside":
                continue
            x, y = 2 * p.x + dx, 2 * p.y + dy
            while locate(poly, x, y) == "inside":
                x, y = x + dx, y + dy
            assert x % 2 == 0 and y % 2 == 0
            out.add((p, Point(x // 2, y // 2), "H" if dy == 0 else "V"))
    return out


def brute_stabbing(poly: Polygon, chosen) -> int:
    """Max rectangles met by any maximal interior axis-parallel segment, scanning all doubled lines."""
    rects = rectangles_of(poly, ConformingPartition(poly, frozenset(chosen))).rects
    x0, y0, x1, y1 = poly.bbox()
    best = 0
    for horizontal in (True, False):
        lines = range(2 * y0 + 1, 2 * y1) if horizontal else range(2 * x0 + 1, 2 * x1)
        lo, hi = (2 * x0, 2 * x1) if horizontal else (2 * y0, 2 * y1)
        for line in lines:
            run = []
            for t in range(lo, hi + 1):
                pt = (t, line) if horizontal else (line, t)
                if locate(poly, *pt) == "inside":
                    run.append(t)
                    continue
                if run:
                    best = max(best, _met(rects, horizontal, line, run[0], run[-1]))
                run = []
    return best


def _met(rects, horizontal, line, a, b) -> int:
    n = 0
    for r in rects:
        rx0, ry0, rx1, ry1 = (2 * c for c in r)
        if horizontal:
            if ry0 < line < ry1 and a < rx1 and rx0 < b:
                n += 1
        elif rx0 < line < rx1 and a < ry1 and ry0 < b:
            n += 1
    return n


def naive_minimal(poly: Polygon) -> set[frozenset[int]]:
    """Minimal conforming partitions by trying every per-vertex choice."""
    stc = poly.structure
    found = set()
    for pick in product((0, 1, 2), repeat=len(stc.reflex)):
        chosen = set()
        for rv, c in zip(stc.reflex, pick):
            if c in (0, 2):
                chosen.add(rv.h)
            if c in (1, 2):
                chosen.add(rv.v)
        fs = frozenset(chosen)
        if fs in found or check_conforming(poly, fs):
            continue
        if is_minimal(poly, ConformingPartition(poly, fs)):
            found.add(fs)
    return found


def brute_two_sat(nvars: int, clauses) -> bool:
    for bits in product((False, True), repeat=nvars):
        if all(_lit(bits, a) or _lit(bits, b) for a, b, *_ in clauses):
            return True
    return False


def _lit(bits, lit: int) -> bool:
    v = lit // 2
    return bits[v] if lit % 2 == 0 else not bits[v]
