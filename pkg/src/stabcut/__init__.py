"""Low stabbing number conforming rectangular partitions of rectilinear polygons."""

from .geom import (
    Diagnostics,
    Gate,
    Point,
    Polygon,
    ReflexSegment,
    find_gates,
    is_general_position,
    is_thin,
    reflex_segments,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "Diagnostics",
    "Gate",
    "Point",
    "Polygon",
    "ReflexSegment",
    "find_gates",
    "is_general_position",
    "is_thin",
    "reflex_segments",
    "validate",
]
