from pathlib import Path

from stabcut.fixtures import cross, l_shape
from stabcut.partition import ConformingPartition, resolve_ids, stabbing_number_conforming
from stabcut.pixelation import Pixelation
from stabcut.render import render_svg

GOLDEN = Path(__file__).parent / "golden"


def _l1():
    p = l_shape()
    cp = ConformingPartition(p, resolve_ids(p, [((1, 1), "H")]))
    return p, cp, stabbing_number_conforming(Pixelation(p), cp).witness


def test_golden_svg():
    p, cp, stab = _l1()
    assert render_svg(p, cp, stab) == (GOLDEN / "l1_h.svg").read_text()


def test_render_is_stable_and_names_elements():
    c = cross()
    cp = ConformingPartition(c, frozenset(range(4)))
    a, b = render_svg(c, cp, scale=10), render_svg(c, cp, scale=10)
    assert a == b
    assert a.count("<line id=\"seg-") == 4 and 'id="polygon"' in a


def test_bare_polygon():
    svg = render_svg(l_shape(), title="L")
    assert 'id="partition"' not in svg and "stab-" not in svg
