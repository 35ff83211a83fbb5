"""Deterministic SVG drawings of polygons, partitions and stab classes."""

from __future__ import annotations

from xml.sax.saxutils import quoteattr

from .geom import Polygon
from .partition import ConformingPartition
from .pixelation import StabClass

MARGIN = 1


def _ring_path(ring) -> str:
    return "M " + " L ".join(f"{p.x} {p.y}" for p in ring) + " Z"


def render_svg(poly: Polygon, cp: ConformingPartition | None = None, stab: StabClass | None = None,
               scale: int = 20, title: str | None = None) -> str:
    """SVG text; element order and number formatting are stable across runs.

    The y axis is flipped so that the drawing matches the usual math
    orientation.
    """
    x0, y0, x1, y1 = poly.bbox()
    w = (x1 - x0 + 2 * MARGIN) * scale
    h = (y1 - y0 + 2 * MARGIN) * scale
    tx, ty = MARGIN - x0, y1 + MARGIN
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
    ]
    if title:
        lines.append(f"<title>{title.replace('&', '&amp;').replace('<', '&lt;')}</title>")
    lines.append(f'<g id="frame" transform="scale({scale} {-scale}) translate({tx} {-ty})">')
    d = " ".join(_ring_path(r) for r in poly.rings())
    lines.append(f'<path id="polygon" d="{d}" fill="#f2f2f2" fill-rule="evenodd" stroke="#000" '
                 f'stroke-width="{2 / scale:.4f}"/>')
    if cp is not None:
        segs = poly.structure.segments
        lines.append('<g id="partition" stroke="#c0392b" fill="none" '
                     f'stroke-width="{1.5 / scale:.4f}">')
        for s in sorted(cp.chosen, key=lambda i: segs[i].canonical_id):
            sg = segs[s]
            a, b = sg.a, sg.b
            sid = "seg-{}-{}-{}".format(*sg.canonical_id)
            lines.append(f'<line id={quoteattr(sid)} x1="{a.x}" y1="{a.y}" x2="{b.x}" y2="{b.y}"/>')
        lines.append("</g>")
    if stab is not None:
        line, lo, hi = stab.representative
        if stab.orientation == "H":
            xa, ya, xb, yb = lo / 2, line / 2, hi / 2, line / 2
        else:
            xa, ya, xb, yb = line / 2, lo / 2, line / 2, hi / 2
        lines.append(f'<line id="stab-{stab.index}" x1="{xa:.1f}" y1="{ya:.1f}" x2="{xb:.1f}" y2="{yb:.1f}" '
                     f'stroke="#2471a3" stroke-dasharray="{4 / scale:.4f}" stroke-width="{1.5 / scale:.4f}"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
