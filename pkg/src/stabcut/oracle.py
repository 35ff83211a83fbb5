"""Exact reference solvers by propagating branch and bound.

Only minimal conforming partitions are searched.  Removing a segment never
increases any class count, so some minimal partition is optimal and the
minimum over minimal partitions is the conforming stabbing number.

Branching visits reflex vertices in lexicographic order and tries, per
vertex, "horizontal only", "vertical only", then "both".  Three pruning
rules can be switched off independently:

* ``counters``: a class may cross at most ``k - 1`` chosen segments; once it
  reaches that many, its other crossed segments are forced out.
* ``conflicts``: choosing a segment forces out every segment it crosses.
* ``wedge``: for a pixel that is the wedge pixel of all of its reflex
  corners, the chosen segments on its sides must form a minimal cover of
  those corners.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

from .geom import Polygon
from .partition import ConformingPartition, is_minimal, stabbing_number_conforming, check_conforming
from .pixelation import Pixelation

UNKNOWN, IN, OUT = 0, 1, 2
ALL_RULES = frozenset({"counters", "conflicts", "wedge"})


class BudgetExceeded(Exception):
    def __init__(self, nodes: int, lower: int | None = None, incumbent: ConformingPartition | None = None,
                 incumbent_value: int | None = None):
        super().__init__(f"node budget exceeded after {nodes} nodes")
        self.nodes = nodes
        self.lower = lower
        self.incumbent = incumbent
        self.incumbent_value = incumbent_value


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0
    solutions: int = 0
    rejected_nonminimal: int = 0
    extra: dict = field(default_factory=dict)


class _Search:
    def __init__(self, pix: Pixelation, k: int | None, rules: frozenset, budget: int | None,
                 stats: SearchStats, forced: dict[int, int] | None = None):
        self.pix = pix
        st = pix.structure
        self.st = st
        nseg = len(st.segments)
        self.nseg = nseg
        self.k = k
        self.rules = rules
        self.budget = budget
        self.stats = stats
        self.state = [UNKNOWN] * nseg
        self.trail: list[int] = []
        self.cross = [[] for _ in range(nseg)]
        for h, v in pix.poly.crossings:
            self.cross[h].append(v)
            self.cross[v].append(h)
        classes = [c for c in pix.classes if c.crossed_reflex]
        self.class_segs = [c.crossed_reflex for c in classes]
        self.seg_classes = [[] for _ in range(nseg)]
        for ci, segs in enumerate(self.class_segs):
            for s in segs:
                self.seg_classes[s].append(ci)
        self.count = [0] * len(classes)
        # other segment at each apex, used for coverage propagation
        self.partner: list[list[int]] = [[] for _ in range(nseg)]
        for rv in st.reflex:
            self.partner[rv.h].append(rv.v)
            self.partner[rv.v].append(rv.h)
        self.shared = [s.shared for s in st.segments]
        self.order = sorted(range(len(st.reflex)), key=lambda i: st.reflex[i].point)
        self.wedge_rules: list[tuple[tuple[int, ...], list[frozenset]]] = []
        self.seg_wedge: list[list[int]] = [[] for _ in range(nseg)]
        if "wedge" in rules:
            self._build_wedge_rules()
        self.forced = forced or {}

    def _build_wedge_rules(self) -> None:
        st = self.st
        pix = self.pix
        wedge_of = {}
        for rv in st.reflex:
            wedge_of[rv.point] = pix.wedge_pixel(rv.point).index
        corners_by_pixel: dict[int, list[int]] = {}
        for f in pix.pixels:
            corners = [st.vertex_of[p] for p in f.corners() if p in st.vertex_of]
            if corners and all(wedge_of[st.reflex[c].point] == f.index for c in corners):
                corners_by_pixel[f.index] = corners
        for f, corners in corners_by_pixel.items():
            cset = {st.reflex[c].point for c in corners}
            segs = sorted({s for c in corners for s in (st.reflex[c].h, st.reflex[c].v)})
            if any(a not in cset for s in segs for a in st.segments[s].apexes):
                continue
            covers_of = {s: {st.vertex_of[a] for a in st.segments[s].apexes} for s in segs}
            minimal = []
            for r in range(1, len(segs) + 1):
                for combo in combinations(segs, r):
                    covered = set().union(*(covers_of[s] for s in combo))
                    if covered != set(corners):
                        continue
                    if any(set().union(*(covers_of[t] for t in combo if t != s)) >= set(corners) for s in combo):
                        continue
                    minimal.append(frozenset(combo))
            idx = len(self.wedge_rules)
            self.wedge_rules.append((tuple(segs), minimal))
            for s in segs:
                self.seg_wedge[s].append(idx)

    # -- propagation -------------------------------------------------------
    def assign(self, s: int, val: int) -> bool:
        queue = [(s, val)]
        state = self.state
        k = self.k
        use_counters = k is not None and "counters" in self.rules
        use_conflicts = "conflicts" in self.rules
        touched_wedges: set[int] = set()
        while queue:
            s, val = queue.pop()
            cur = state[s]
            if cur == val:
                continue
            if cur != UNKNOWN:
                return False
            state[s] = val
            self.trail.append(s)
            if val == IN:
                # counts must match the state before any early return, for undo
                for ci in self.seg_classes[s]:
                    self.count[ci] += 1
                for t in self.cross[s]:
                    if state[t] == IN:
                        return False
                    if use_conflicts and state[t] == UNKNOWN:
                        queue.append((t, OUT))
                for ci in self.seg_classes[s]:
                    if k is not None:
                        if self.count[ci] > k - 1:
                            return False
                        if use_counters and self.count[ci] == k - 1:
                            for t in self.class_segs[ci]:
                                if state[t] == UNKNOWN:
                                    queue.append((t, OUT))
            else:
                for t in self.partner[s]:
                    if state[t] == OUT:
                        return False
                    if state[t] == UNKNOWN:
                        queue.append((t, IN))
            touched_wedges.update(self.seg_wedge[s])
            if not queue and touched_wedges:
                for w in sorted(touched_wedges):
                    segs, covers = self.wedge_rules[w]
                    ok = [c for c in covers if all((state[t] == IN) == (t in c) for t in segs if state[t] != UNKNOWN)]
                    if not ok:
                        return False
                    for t in segs:
                        if state[t] == UNKNOWN:
                            if all(t in c for c in ok):
                                queue.append((t, IN))
                            elif all(t not in c for c in ok):
                                queue.append((t, OUT))
                touched_wedges.clear()
        return True

    def undo(self, mark: int) -> None:
        state = self.state
        while len(self.trail) > mark:
            s = self.trail.pop()
            if state[s] == IN:
                for ci in self.seg_classes[s]:
                    self.count[ci] -= 1
            state[s] = UNKNOWN

    # -- search ------------------------------------------------------------
    def options(self, vi: int) -> list[tuple[int, int]]:
        rv = self.st.reflex[self.order[vi]]
        h, v = rv.h, rv.v
        sh, sv = self.state[h], self.state[v]
        both_ok = self.shared[h] and self.shared[v]
        opts = []
        for hv, vv in ((IN, OUT), (OUT, IN), (IN, IN)):
            if (hv, vv) == (IN, IN) and not both_ok:
                continue
            if sh not in (UNKNOWN, hv) or sv not in (UNKNOWN, vv):
                continue
            opts.append((hv, vv))
        return opts

    def run(self) -> Iterator[frozenset[int]]:
        mark = len(self.trail)
        for s, val in sorted(self.forced.items()):
            if not self.assign(s, val):
                self.undo(mark)
                return
        yield from self._dfs(0)
        self.undo(mark)

    def _dfs(self, vi: int) -> Iterator[frozenset[int]]:
        stats = self.stats
        stats.nodes += 1
        if self.budget is not None and stats.nodes > self.budget:
            raise BudgetExceeded(stats.nodes)
        if vi == len(self.order):
            stats.leaves += 1
            chosen = frozenset(s for s in range(self.nseg) if self.state[s] == IN)
            if not is_minimal(self.pix.poly, ConformingPartition(self.pix.poly, chosen)):
                stats.rejected_nonminimal += 1
                return
            stats.solutions += 1
            yield chosen
            return
        rv = self.st.reflex[self.order[vi]]
        for hv, vv in self.options(vi):
            mark = len(self.trail)
            if self.assign(rv.h, hv) and self.assign(rv.v, vv):
                yield from self._dfs(vi + 1)
            self.undo(mark)


def _search(pix: Pixelation, k: int | None, rules, budget, stats, forced=None) -> Iterator[frozenset[int]]:
    return _Search(pix, k, frozenset(rules), budget, stats, forced).run()


def enumerate_minimal(poly: Polygon, max_k: int | None = None, budget: int | None = None,
                      rules=ALL_RULES, pix: Pixelation | None = None, stats: SearchStats | None = None,
                      forced: dict | None = None) -> Iterator[ConformingPartition]:
    """Every minimal conforming partition (stabbing <= max_k if given), in canonical order.

    ``forced`` maps segment indices to True/False to restrict the search.
    """
    if max_k is not None and max_k < 1:
        return
    pix = pix or Pixelation(poly)
    stats = stats if stats is not None else SearchStats()
    fixed = {s: (IN if v else OUT) for s, v in (forced or {}).items()}
    for chosen in _search(pix, max_k, rules, budget, stats, fixed):
        cp = ConformingPartition(poly, chosen)
        if max_k is not None and stabbing_number_conforming(pix, cp).value > max_k:
            raise AssertionError("search emitted a partition above the cutoff")
        yield cp


def decide_cstab_k_exact(poly: Polygon, k: int, budget: int | None = None, rules=ALL_RULES,
                         pix: Pixelation | None = None, stats: SearchStats | None = None,
                         forced: dict | None = None) -> ConformingPartition | None:
    """A witness with stabbing number <= k, or None if there is none."""
    for cp in enumerate_minimal(poly, k, budget, rules, pix, stats, forced):
        return cp
    return None


def min_conforming_stabbing(poly: Polygon, budget: int | None = None, rules=ALL_RULES,
                            pix: Pixelation | None = None,
                            stats: SearchStats | None = None) -> tuple[int, ConformingPartition]:
    """Exact conforming stabbing number and a witness, by increasing k."""
    pix = pix or Pixelation(poly)
    stats = stats if stats is not None else SearchStats()
    if not pix.segments:
        return 1, ConformingPartition(poly, frozenset())
    incumbent = None
    inc_val = None
    try:
        first = next(iter(enumerate_minimal(poly, None, budget, rules, pix, stats)))
        incumbent, inc_val = first, stabbing_number_conforming(pix, first).value
    except BudgetExceeded as exc:
        raise BudgetExceeded(exc.nodes, 2, None, None) from None
    for k in range(2, inc_val):
        try:
            cp = decide_cstab_k_exact(poly, k, budget, rules, pix, stats)
        except BudgetExceeded as exc:
            raise BudgetExceeded(exc.nodes, k, incumbent, inc_val) from None
        if cp is not None:
            return k, cp
    assert not check_conforming(poly, incumbent.chosen)
    return inc_val, incumbent
