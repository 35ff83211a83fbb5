"""Small named polygons used throughout the tests and the CLI."""

from __future__ import annotations

from .geom import Point, Polygon


def rectangle(w: int = 1, h: int = 1) -> Polygon:
    return Polygon.from_rings([(0, 0), (w, 0), (w, h), (0, h)])


def l_shape() -> Polygon:
    return Polygon.from_rings([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])


def cross() -> Polygon:
    return Polygon.from_rings(
        [(1, 0), (2, 0), (2, 1), (3, 1), (3, 2), (2, 2), (2, 3), (1, 3), (1, 2), (0, 2), (0, 1), (1, 1)]
    )


def comb(t: int, two_sided: bool = True) -> Polygon:
    """Square body with ``t`` unit teeth on top and, if two-sided, ``t`` on the left.

    Teeth sit at odd offsets 1, 3, ..., 2t-1 so neighbouring teeth are one
    unit apart; the body is (2t+1) x (2t+1).
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    size = 2 * t + 1
    pts = [Point(0, 0), Point(size, 0), Point(size, size)]
    for i in reversed(range(t)):
        x = 2 * i + 1
        pts += [Point(x + 1, size), Point(x + 1, size + 1), Point(x, size + 1), Point(x, size)]
    pts.append(Point(0, size))
    if two_sided:
        for i in reversed(range(t)):
            y = 2 * i + 1
            pts += [Point(0, y + 1), Point(-1, y + 1), Point(-1, y), Point(0, y)]
    return Polygon.from_rings(pts)


def crossing_notches() -> Polygon:
    """A square with notches at two opposite corners whose reflex segments cross."""
    return Polygon.from_rings([(1, 0), (3, 0), (3, 2), (2, 2), (2, 3), (0, 3), (0, 1), (1, 1)])


FIXTURES = {
    "rectangle": rectangle,
    "L1": l_shape,
    "CROSS": cross,
    "notches": crossing_notches,
}
