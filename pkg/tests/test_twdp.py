import json
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import polygons
from stabcut.fixtures import comb, cross, crossing_notches, l_shape, rectangle
from stabcut.generators import cell_polygon, explode, staircase
from stabcut.geom import is_thin
from stabcut.oracle import decide_cstab_k_exact, min_conforming_stabbing
from stabcut.partition import stabbing_number
from stabcut.pixelation import Pixelation
from stabcut.twdp import (
    StateOverflow,
    TreeDecomposition,
    build_model,
    cutoff_length,
    decide_cstab_k_dp,
    decide_cstab_k_simple_gatefree,
    decompose_graph,
    max_reflex_length,
    nice_decomposition,
    validate_decomposition,
    write_td,
)


def test_cutoff_lengths():
    assert [cutoff_length(k) for k in (2, 3, 4)] == [25, 86, 243]


def test_small_widths():
    for make, limit in ((rectangle, 4), (l_shape, 6)):
        model = build_model(Pixelation(make()), 2)
        td = decompose_graph(model.graph)
        assert validate_decomposition(model.graph, td) == []
        assert td.width <= limit


def thin_staircase(steps):
    cells = {(s, s) for s in range(steps + 1)} | {(s + 1, s) for s in range(steps)}
    n = steps + 2
    return cell_polygon(cells, n, n, list(range(n + 1)), list(range(n + 1)))


def test_thin_staircase_width_stays_small():
    widths = []
    for steps in (2, 4, 8, 16, 32):
        p = thin_staircase(steps)
        assert is_thin(p)
        model = build_model(Pixelation(p), 2)
        td = decompose_graph(model.graph)
        assert validate_decomposition(model.graph, td) == []
        widths.append(td.width)
    assert max(widths) == max(widths[:2])


def test_validation_finds_broken_decompositions():
    g = nx.path_graph(4)
    good = TreeDecomposition([frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 3})], [(0, 1), (1, 2)])
    assert validate_decomposition(g, good) == []
    emptied = TreeDecomposition([frozenset({0, 1}), frozenset({1}), frozenset({2, 3})], [(0, 1), (1, 2)])
    assert "edge uncovered (1, 2)" in validate_decomposition(g, emptied)
    split = TreeDecomposition([frozenset({0, 1}), frozenset({2}), frozenset({1, 2, 3})], [(0, 1), (1, 2)])
    assert "occurrence subtree disconnected for vertex 1" in validate_decomposition(g, split)
    missing = TreeDecomposition([frozenset({0, 1}), frozenset({1, 2})], [(0, 1)])
    assert "vertex 3 in no bag" in validate_decomposition(g, missing)
    cyclic = TreeDecomposition([frozenset(range(4))] * 3, [(0, 1), (1, 2), (2, 0)])
    assert "bag graph is not a tree" in validate_decomposition(g, cyclic)


def test_invalid_decomposition_is_rejected():
    with pytest.raises(ValueError):
        decide_cstab_k_dp(l_shape(), 2, td=TreeDecomposition([frozenset({0})], []))
    with pytest.raises(ValueError):
        decide_cstab_k_dp(l_shape(), 0)


def test_nice_decomposition_shape():
    model = build_model(Pixelation(cross()), 3)
    nodes, root = nice_decomposition(decompose_graph(model.graph))
    assert nodes[root].bag == ()
    for nd in nodes:
        if nd.kind == "leaf":
            assert nd.bag == () and not nd.children
        elif nd.kind == "join":
            assert all(nodes[c].bag == nd.bag for c in nd.children) and len(nd.children) == 2
        elif nd.kind == "introduce":
            assert set(nd.bag) - set(nodes[nd.children[0]].bag) == {nd.var}
        else:
            assert set(nodes[nd.children[0]].bag) - set(nd.bag) == {nd.var}


@pytest.mark.parametrize("make,kstar", [(rectangle, 1), (l_shape, 2), (cross, 3), (crossing_notches, None)])
def test_fixture_verdicts(make, kstar):
    poly = make()
    kstar = kstar or min_conforming_stabbing(poly)[0]
    yes = decide_cstab_k_dp(poly, kstar)
    assert yes.witness is not None and stabbing_number(poly, yes.witness.chosen) <= kstar
    assert yes.max_states <= max(yes.bound, 2 ** (yes.width + 1))
    if kstar > 1:
        assert decide_cstab_k_dp(poly, kstar - 1).witness is None


def test_state_limit():
    with pytest.raises(StateOverflow):
        decide_cstab_k_dp(cross(), 3, max_states=3)


def test_max_reflex_length():
    assert max_reflex_length(l_shape()) == 0
    assert max_reflex_length(crossing_notches()) == 1
    lengths = [max_reflex_length(comb(t)) for t in (2, 4, 8)]
    assert lengths == sorted(lengths) and lengths[-1] >= 2 * lengths[0]


def test_gatefree_rejects_holes_and_gates():
    with pytest.raises(ValueError):
        decide_cstab_k_simple_gatefree(cross(), 2)
    from stabcut.gadgets import forcer
    with pytest.raises(ValueError):
        decide_cstab_k_simple_gatefree(forcer().polygon, 4)


@pytest.mark.parametrize("steps", [1, 2, 3, 5])
def test_gatefree_staircase_matches_oracle(steps):
    p = staircase(steps, 2, 1)
    for k in (1, 2, 3):
        assert (decide_cstab_k_simple_gatefree(p, k) is None) == (decide_cstab_k_exact(p, k) is None)


def test_long_segment_answers_no():
    p = explode(comb(13), random.Random(1))
    assert max_reflex_length(p) >= cutoff_length(2)
    assert decide_cstab_k_simple_gatefree(p, 2) is None
    assert decide_cstab_k_exact(p, 2, budget=200_000) is None


def test_write_td(tmp_path):
    model = build_model(Pixelation(l_shape()), 2)
    td = decompose_graph(model.graph)
    out = tmp_path / "td.json"
    write_td(td, str(out))
    data = json.loads(out.read_text())
    assert data["width"] == td.width and len(data["bags"]) == len(td.bags)


@settings(max_examples=200, deadline=None)
@given(polygons("random", 10), st.integers(2, 4))
def test_dp_matches_oracle(poly, k):
    pix = Pixelation(poly)
    res = decide_cstab_k_dp(poly, k, pix=pix)
    assert (res.witness is None) == (decide_cstab_k_exact(poly, k, pix=pix) is None)
    if res.witness is not None:
        # recount from the chosen segments, not from the labels
        for c in pix.classes:
            assert sum(s in res.witness.chosen for s in c.crossed_reflex) <= k - 1
