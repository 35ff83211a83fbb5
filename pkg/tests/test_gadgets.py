import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stabcut.gadgets import (
    FOUR_VARIABLE_RPM,
    SINGLE_CLAUSE_RPM,
    LayoutError,
    PortMap,
    RpmInstance,
    Transform,
    build_hardness_polygon,
    clause_gadget,
    core_partitions,
    crossings_on,
    extract_assignment,
    forcer,
    forcer_internal,
    gadget_partitions,
    port_counts,
    split_gadget,
    variable_gadget,
    verify_witness,
    witness_partition,
)
from stabcut.geom import is_thin, validate
from stabcut.oracle import enumerate_minimal, min_conforming_stabbing
from stabcut.partition import ConformingPartition, resolve_ids, stabbing_number

transforms = st.builds(Transform, st.integers(0, 3), st.booleans(), st.integers(-20, 20), st.integers(-20, 20))


@settings(max_examples=200)
@given(transforms, transforms, st.tuples(st.integers(-30, 30), st.integers(-30, 30)))
def test_transform_composition(a, b, p):
    assert a.then(b).point(p) == b.point(a.point(p))
    assert a.then(b).orientation("H") == b.orientation(a.orientation("H"))


def test_placement_groups_are_enforced():
    with pytest.raises(ValueError):
        forcer(Transform(0, True))
    with pytest.raises(ValueError):
        variable_gadget(Transform(0, False, 0, 3))
    with pytest.raises(ValueError):
        split_gadget(Transform(1))
    with pytest.raises(ValueError):
        clause_gadget(1, 1, 0, 1, 1)
    with pytest.raises(ValueError):
        Transform(4)


@pytest.mark.parametrize("frag", [
    forcer(), forcer(Transform(1, False, 5, 5)), variable_gadget(), split_gadget(),
    clause_gadget(1, 1, 1, 1, 1), clause_gadget(2, 3, 1, 2, 4, Transform(0, True, 3, 0)),
])
def test_gadgets_are_valid_and_thin(frag):
    assert validate(frag.polygon).ok
    assert is_thin(frag.polygon)


def test_sizes():
    assert clause_gadget(1, 1, 1, 1, 1).polygon.n == 12
    f = forcer().polygon
    assert f.n == 44 and len(f.holes) == 9
    assert len(variable_gadget().parts) == 2 and len(split_gadget().parts) == 3


def test_forcer_internal_vertices():
    v = variable_gadget()
    inside = forcer_internal(v)
    assert len(inside) == 2 * len(forcer().polygon.structure.reflex) == 76
    assert inside <= set(v.polygon.structure.vertex_of)


def test_forcer_out_stab_is_always_loaded():
    f = forcer()
    assert min_conforming_stabbing(f.polygon)[0] == 4
    parts = list(enumerate_minimal(f.polygon, 4))
    assert len(parts) == 8
    assert all(crossings_on(f.polygon, cp.chosen, f.ports["out"].stab) >= 3 for cp in parts)


def test_clause_gadget_partitions():
    c0 = clause_gadget(1, 1, 1, 1, 1).polygon
    parts = list(enumerate_minimal(c0))
    assert len(parts) == 8
    assert sum(stabbing_number(c0, cp.chosen) > 4 for cp in parts) == 1
    counts = set().union(*core_partitions("clause", (1, 1, 1, 1, 1)).values())
    # every port pattern except "no true literal"
    assert {tuple(v for _, v in c) for c in counts} == {(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)} - {(0, 0, 0)}


def test_variable_gadget_partitions():
    assert len(gadget_partitions("variable")) == 192
    core = core_partitions("variable")
    assert len(core) == 3
    counts = {dict(c)["pos"] * 10 + dict(c)["neg"] for cs in core.values() for c in cs}
    assert counts == {32, 23, 33}


def test_split_gadget_partitions():
    core = core_partitions("split")
    assert len(core) == 5
    counts = [dict(c) for cs in core.values() for c in cs]
    assert all(c["left"] == c["right"] == 3 for c in counts if c["in"] == 0)
    assert {"in": 1, "left": 2, "right": 2} in counts


def test_rpm_round_trip_and_checks():
    rpm = RpmInstance.from_json(FOUR_VARIABLE_RPM)
    assert RpmInstance.from_json(rpm.to_json()) == rpm
    assert rpm.var_names == ["x1", "x2", "x3", "x4"]
    assert rpm.evaluate({"x1": 0, "x2": 1, "x3": 1, "x4": 0}) == []
    assert rpm.evaluate({"x1": 0, "x2": 0, "x3": 0, "x4": 0}) == ["C1", "C2"]
    bad = dict(SINGLE_CLAUSE_RPM, clauses=[dict(SINGLE_CLAUSE_RPM["clauses"][0], rect=[0, -5, 10, -3])])
    with pytest.raises(LayoutError, match="wrong side"):
        RpmInstance.from_json(bad)
    lits = [{"var": "x", "column": 1}] * 3
    with pytest.raises(LayoutError):
        RpmInstance.from_json(dict(SINGLE_CLAUSE_RPM, clauses=[dict(SINGLE_CLAUSE_RPM["clauses"][0], literals=lits)]))
    overlap = dict(SINGLE_CLAUSE_RPM, variables=SINGLE_CLAUSE_RPM["variables"] * 2)
    with pytest.raises(LayoutError):
        RpmInstance.from_json(overlap)


def test_single_clause_reduction():
    poly, pm = build_hardness_polygon(RpmInstance.from_json(SINGLE_CLAUSE_RPM))
    assert validate(poly).ok and is_thin(poly)
    cp = witness_partition(poly, pm, {"x": 1})
    assert verify_witness(poly, cp) <= 4
    assert extract_assignment(poly, pm, cp) == {"x": 1}
    with pytest.raises(ValueError, match="falsifies"):
        witness_partition(poly, pm, {"x": 0})
    with pytest.raises(ValueError, match="misses"):
        witness_partition(poly, pm, {})


def test_four_variable_reduction():
    start = time.perf_counter()
    rpm = RpmInstance.from_json(FOUR_VARIABLE_RPM)
    poly, pm = build_hardness_polygon(rpm)
    assert validate(poly).ok
    assignment = {"x1": 0, "x2": 1, "x3": 1, "x4": 0}
    cp = witness_partition(poly, pm, assignment)
    assert verify_witness(poly, cp) <= 4
    got = extract_assignment(poly, pm, cp)
    assert got == assignment and rpm.evaluate(got) == []
    counts = port_counts(poly, pm, cp)
    assert all(l.source in counts and l.target in counts for l in pm.links)
    assert time.perf_counter() - start < 60


def _standalone_map(frag):
    return PortMap(None, [frag], {"x": 0}, {}, [], {})


def test_assignment_extraction_on_variable_partitions():
    v = variable_gadget()
    pm = _standalone_map(v)
    seen = set()
    for counts, items in gadget_partitions("variable"):
        cp = ConformingPartition(v.polygon, resolve_ids(v.polygon, items))
        c = dict(counts)
        x1 = extract_assignment(v.polygon, pm, cp)["x"]
        x0 = extract_assignment(v.polygon, pm, cp, undetermined=0)["x"]
        if (c["pos"], c["neg"]) == (3, 3):
            assert (x1, x0) == (1, 0)
        else:
            assert x1 == x0 == (1 if c["pos"] == 2 else 0)
        seen.add((c["pos"], c["neg"]))
    assert seen == {(2, 3), (3, 2), (3, 3)}
    with pytest.raises(ValueError):
        extract_assignment(v.polygon, pm, ConformingPartition(v.polygon, frozenset()))
