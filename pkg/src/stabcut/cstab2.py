"""Deciders for conforming stabbing number two.

Two routes are offered.  The SAT route encodes every reflex segment as a
boolean and solves the full 2-CNF.  The fast route first propagates local
rules with deletable ray shooters, then solves a much smaller 2-CNF over the
segments left undecided.

Rules used by the fast route, for stabbing number two:

* two crossing reflex segments are both absent (seeded by one ray query per
  segment);
* a gate is present;
* if one segment at a reflex vertex is absent the other is present;
* a stab crossing a present segment crosses no other present segment.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx

from .geom import Polygon, find_gates, is_thin
from .grid import label_components, polygon_grid, trace_cells
from .partition import ConformingPartition, stabbing_number_conforming
from .pixelation import Pixelation
from .rayshoot import OrthogonalRayShooter
from .sweeps import FaceStab, edge_entries, face_stabs, segment_entries, walk

log = logging.getLogger(__name__)

UNDECIDED, FIXED, IMPOSSIBLE = "undecided", "fixed", "impossible"


# -- 2-SAT -------------------------------------------------------------------

def pos(v: int) -> int:
    return 2 * v


def neg(v: int) -> int:
    return 2 * v + 1


@dataclass
class TwoSatInstance:
    """Clauses are ``(lit, lit, kind)``; literal ``2v`` is x_v and ``2v+1`` its negation."""

    nvars: int
    clauses: list[tuple[int, int, str]] = field(default_factory=list)
    names: list = field(default_factory=list)

    def add(self, a: int, b: int, kind: str) -> None:
        self.clauses.append((a, b, kind))

    def count(self, kind: str) -> int:
        return sum(1 for c in self.clauses if c[2] == kind)

    def implication_graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(2 * self.nvars))
        for a, b, _ in self.clauses:
            g.add_edge(a ^ 1, b)
            g.add_edge(b ^ 1, a)
        return g


def solve_two_sat(inst: TwoSatInstance) -> list[bool] | None:
    """A satisfying assignment, or None when some literal shares a component with its negation."""
    g = inst.implication_graph()
    cond = nx.condensation(g)
    comp = cond.graph["mapping"]
    rank = {c: i for i, c in enumerate(nx.lexicographical_topological_sort(cond))}
    out = []
    for v in range(inst.nvars):
        a, b = comp[pos(v)], comp[neg(v)]
        if a == b:
            return None
        # the literal whose component comes later in topological order is true
        out.append(rank[a] > rank[b])
    return out


def build_two_sat(pix: Pixelation) -> TwoSatInstance:
    poly = pix.poly
    st = pix.structure
    inst = TwoSatInstance(len(st.segments), names=[s.canonical_id for s in st.segments])
    for rv in st.reflex:
        inst.add(pos(rv.h), pos(rv.v), "coverage")
    crossings = poly.crossings
    for h, v in crossings:
        inst.add(neg(h), neg(v), "conflict")
    seen = set()
    bound_excl = 0
    for c in pix.classes:
        segs = sorted(set(c.crossed_reflex))
        bound_excl += len(segs) * (len(segs) - 1) // 2
        for s, t in combinations(segs, 2):
            if (s, t) not in seen:
                seen.add((s, t))
                inst.add(neg(s), neg(t), "exclusion")
    bound = len(st.reflex) + len(crossings) + bound_excl
    assert len(inst.clauses) <= bound, "clause count exceeds construction bound"
    return inst


def decide_cstab2_sat(poly: Polygon, pix: Pixelation | None = None) -> ConformingPartition | None:
    """A witness with stabbing number at most 2, or None."""
    pix = pix or Pixelation(poly)
    if not pix.structure.segments:
        return ConformingPartition(poly, frozenset())
    sol = solve_two_sat(build_two_sat(pix))
    if sol is None:
        return None
    cp = ConformingPartition(poly, frozenset(i for i, x in enumerate(sol) if x))
    value = stabbing_number_conforming(pix, cp).value
    if value > 2:
        raise AssertionError(f"2-SAT witness has stabbing number {value}")
    return cp


# -- rule propagation ----------------------------------------------------------

@dataclass
class SegmentStatus:
    flags: list[str]
    fixed: list[int] = field(default_factory=list)
    impossible: list[int] = field(default_factory=list)
    r3: list[int] = field(default_factory=list)  # face stab indices
    trace: list[tuple[int, str, str, object]] = field(default_factory=list)
    contradiction: str | None = None
    stabs: list[FaceStab] = field(default_factory=list)
    alive_stabs: set[int] = field(default_factory=set)
    shooters: dict = field(default_factory=dict, repr=False)

    @property
    def undecided(self) -> list[int]:
        return [i for i, f in enumerate(self.flags) if f == UNDECIDED]

    def trace_json(self) -> list[dict]:
        return [{"segment": s, "flag": f, "rule": r, "cause": c} for s, f, r, c in self.trace]


class _Propagator:
    def __init__(self, poly: Polygon):
        self.poly = poly
        st = poly.structure
        self.st = st
        self.segs = st.segments
        self.partner = {}
        for rv in st.reflex:
            self.partner[(rv.h, rv.point)] = rv.v
            self.partner[(rv.v, rv.point)] = rv.h
        stabs = face_stabs(poly)
        # R holds reflex segments that are not impossible; S holds unprocessed stabs
        self.R = {o: OrthogonalRayShooter(o, segment_entries(poly, o) + edge_entries(poly, o)) for o in "HV"}
        self.S = {
            o: OrthogonalRayShooter(o, [(c.index, c.line, c.lo, c.hi) for c in stabs if c.orientation == o]
                                    + edge_entries(poly, o))
            for o in "HV"
        }
        self.status = SegmentStatus([UNDECIDED] * len(self.segs), stabs=stabs, alive_stabs={c.index for c in stabs})
        self.queue: deque[int] = deque()
        self.in_r3 = [False] * len(stabs)

    def set_flag(self, s: int, flag: str, rule: str, cause) -> bool:
        status = self.status
        cur = status.flags[s]
        if cur == flag:
            return True
        if cur != UNDECIDED:
            status.contradiction = (
                f"segment {self.segs[s].canonical_id} is both fixed and impossible ({rule} from {cause})"
            )
            return False
        status.flags[s] = flag
        status.trace.append((s, flag, rule, cause))
        if flag == FIXED:
            status.fixed.append(s)
        else:
            status.impossible.append(s)
            self.R[self.segs[s].orientation].delete(s)
        self.queue.append(s)
        return True

    def seed(self) -> bool:
        # all queries first: deleting a segment would hide it from its partner
        crossing = []
        for sg in self.segs:
            perp = "V" if sg.orientation == "H" else "H"
            hit = next(walk(self.R[perp], 2 * sg.line, 2 * sg.lo, sg.orientation), None)
            if hit is not None and hit >= 0:
                crossing.append((sg.index, hit))
        for s, hit in crossing:
            if not self.set_flag(s, IMPOSSIBLE, "R4", hit):
                return False
        for g in find_gates(self.poly):
            if not self.set_flag(g.segment.index, FIXED, "R5", None):
                return False
        return True

    def run(self) -> SegmentStatus:
        if not self.seed():
            return self.status
        while self.queue:
            s = self.queue.popleft()
            sg = self.segs[s]
            if self.status.flags[s] == IMPOSSIBLE:
                for a in sg.apexes:
                    if not self.set_flag(self.partner[(s, a)], FIXED, "R2", s):
                        return self.status
                continue
            perp = "V" if sg.orientation == "H" else "H"
            shooter = self.S[perp]
            found = []
            for c in walk(shooter, 2 * sg.line, 2 * sg.lo, sg.orientation):
                if c < 0:
                    break
                found.append(c)
            for c in found:
                shooter.delete(c)
                self.status.alive_stabs.discard(c)
                if not self.in_r3[c]:
                    self.in_r3[c] = True
                    self.status.r3.append(c)
                if not self.apply_r3(c, s):
                    return self.status
        self.status.shooters = self.R
        return self.status

    def apply_r3(self, ci: int, cause: int) -> bool:
        c = self.status.stabs[ci]
        perp = "V" if c.orientation == "H" else "H"
        for t in list(walk(self.R[perp], c.line, c.lo, c.orientation)):
            if t < 0:
                break
            if t == cause:
                continue
            if self.status.flags[t] == FIXED:
                self.status.contradiction = (
                    f"stab {c.rect} crosses fixed segments {self.segs[cause].canonical_id} and {self.segs[t].canonical_id}"
                )
                return False
            if not self.set_flag(t, IMPOSSIBLE, "R3", ("stab", ci)):
                return False
        return True


def propagate_rules(poly: Polygon) -> SegmentStatus:
    """Run the rules to quiescence; ``status.contradiction`` is set when no solution exists."""
    status = _Propagator(poly).run()
    counts = {}
    for s, _, _, _ in status.trace:
        counts[s] = counts.get(s, 0) + 1
    assert all(v == 1 for v in counts.values()), "a segment changed flag twice"
    return status


def residual_two_sat(poly: Polygon, status: SegmentStatus) -> tuple[TwoSatInstance, list[int], int]:
    """2-CNF over the undecided segments; also counts stabs crossing more than two of them."""
    flags = status.flags
    # undecided segments whose apexes are all covered are left out: they are
    # not reflex segments of any piece and omitting them never hurts
    open_vertices = [rv for rv in poly.structure.reflex if flags[rv.h] != FIXED and flags[rv.v] != FIXED]
    und = sorted({s for rv in open_vertices for s in (rv.h, rv.v)})
    var = {s: i for i, s in enumerate(und)}
    inst = TwoSatInstance(len(und), names=und)
    for rv in open_vertices:
        assert flags[rv.h] == flags[rv.v] == UNDECIDED
        inst.add(pos(var[rv.h]), pos(var[rv.v]), "coverage")
    violations = 0
    R = status.shooters
    for ci in sorted(status.alive_stabs):
        c = status.stabs[ci]
        perp = "V" if c.orientation == "H" else "H"
        hits = [t for t in walk(R[perp], c.line, c.lo, c.orientation) if t >= 0]
        assert all(flags[t] == UNDECIDED for t in hits), "unprocessed stab crosses a fixed segment"
        hits = [t for t in hits if t in var]
        if len(hits) > 2:
            violations += 1
            log.warning("stab %s crosses %d undecided segments", c.rect, len(hits))
        for a, b in combinations(hits, 2):
            inst.add(neg(var[a]), neg(var[b]), "exclusion")
    return inst, und, violations


@dataclass
class FastResult:
    witness: ConformingPartition | None
    status: SegmentStatus
    outcome: str  # contradiction | decided | pieces
    residual_vars: int = 0
    class_violations: int = 0


def decide_cstab2_fast_detail(poly: Polygon) -> FastResult:
    status = propagate_rules(poly)
    if status.contradiction:
        return FastResult(None, status, "contradiction")
    inst, und, violations = residual_two_sat(poly, status)
    outcome = "pieces" if und else "decided"
    sol = solve_two_sat(inst) if und else []
    if sol is None:
        log.info("residual pieces are unsatisfiable (%d variables)", len(und))
        return FastResult(None, status, outcome, len(und), violations)
    chosen = frozenset(status.fixed) | frozenset(s for s, x in zip(und, sol) if x)
    return FastResult(ConformingPartition(poly, chosen), status, outcome, len(und), violations)


def decide_cstab2_fast(poly: Polygon) -> ConformingPartition | None:
    return decide_cstab2_fast_detail(poly).witness


def decompose_pieces(poly: Polygon, status: SegmentStatus) -> list[Polygon]:
    """Faces left after inserting the fixed segments; each must be thin and gate-free."""
    if status.contradiction:
        raise ValueError("rules ended in a contradiction; there are no pieces")
    segs = poly.structure.segments
    g = polygon_grid(poly, segments=[segs[s] for s in status.fixed])
    label, count = label_components(g, lambda owner: owner is not None)
    pieces = []
    for k in range(count):
        piece = trace_cells(g, lambda i, j: label[i][j] == k)
        assert is_thin(piece), f"piece {k} is not thin"
        assert not find_gates(piece), f"piece {k} has a gate"
        pieces.append(piece)
    return pieces


def thin_gp_stabbing_number(poly: Polygon) -> int:
    """1, 2 or 3 for a thin gate-free polygon."""
    if not is_thin(poly):
        raise ValueError("polygon is not thin")
    if find_gates(poly):
        raise ValueError("polygon has gates")
    if not poly.structure.reflex:
        return 1
    return 2 if decide_cstab2_fast(poly) is not None else 3
