import random

import pytest

from stabcut.generators import FAMILIES, explode, generate, generate_corpus, staircase
from stabcut.fixtures import comb, l_shape
from stabcut.geom import find_gates, is_general_position, is_thin, validate


@pytest.mark.parametrize("family", FAMILIES + ("thin-gate-free",))
def test_corpora_are_deterministic(family):
    a = [p.to_json() for p in generate_corpus(family, 10, seed=3)]
    b = [p.to_json() for p in generate_corpus(family, 10, seed=3)]
    c = [p.to_json() for p in generate_corpus(family, 10, seed=4)]
    assert a == b and a != c


@pytest.mark.parametrize("family,ok", [
    ("thin", is_thin),
    ("thin-gate-free", lambda p: is_thin(p) and not find_gates(p)),
    ("general-position", lambda p: is_thin(p) and is_general_position(p)),
])
def test_family_predicates(family, ok):
    for p in generate_corpus(family, 100, seed=0, max_reflex=10):
        assert validate(p).ok and ok(p)
        assert len(p.structure.reflex) <= 10


def test_random_holes_are_valid():
    polys = generate_corpus("random-holes", 100, seed=0)
    assert all(validate(p).ok and p.holes for p in polys)


def test_reflex_limit():
    for p in generate_corpus("random", 100, seed=1, max_reflex=6):
        assert len(p.structure.reflex) <= 6


def test_staircase():
    p = staircase(3, 2, 1)
    assert validate(p).ok and len(p.structure.reflex) == 3 and not p.holes


def test_explode_keeps_combinatorics():
    for src in (l_shape(), comb(3)):
        q = explode(src, random.Random(0))
        assert q.n == src.n and len(q.structure.reflex) == len(src.structure.reflex)
        assert is_general_position(q)


def test_unknown_family():
    with pytest.raises(ValueError):
        generate("spiral", random.Random(0))
