"""CSTAB(k) by dynamic programming over a tree decomposition.

The constraint system lives on the radial graph.  Every pixelation-graph
vertex ``v`` carries two bits ``(h, v)``: whether it lies on a chosen
horizontal / vertical reflex segment.  Every pixel carries two count
indices ``(i, j)`` in ``1..k``: the number of rectangles a horizontal
(vertical) stab meets from the left (bottom) boundary up to and including
that pixel.  Constraints:

* the two corners of a pixel side lying on a reflex segment agree on that
  segment's bit, so a bit is constant along a segment;
* each reflex vertex carries a set bit (coverage);
* no crossing vertex carries both bits;
* a pixel whose left side is on the boundary has ``i = 1``; otherwise
  ``i`` is the left neighbour's ``i`` plus the bit of the shared side.
  Same for ``j`` from below.

Count indices are exact, hence "at most k" on every pixel is exactly
"stabbing number at most k".  Each constraint scope is made a clique of the
graph that gets decomposed, so some bag holds it.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from itertools import product

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_degree, treewidth_min_fill_in

from .geom import Polygon, find_gates
from .partition import ConformingPartition, check_conforming, stabbing_number_conforming
from .pixelation import Pixelation

log = logging.getLogger(__name__)

MIN_FILL_LIMIT = 1500  # min-fill is cubic-ish; above this only min-degree runs


def cutoff_length(k: int) -> int:
    """Reflex segment length that forces stabbing number above k on gate-free simple polygons."""
    return k * (2 ** (k + 2) - 4) + (k - 1)


# -- decompositions -----------------------------------------------------------

@dataclass
class TreeDecomposition:
    bags: list[frozenset]
    tree_edges: list[tuple[int, int]]
    heuristic: str = ""

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def to_json(self) -> dict:
        return {"width": self.width, "heuristic": self.heuristic,
                "bags": [sorted(b) for b in self.bags], "edges": [list(e) for e in self.tree_edges]}


def _from_nx(tree: nx.Graph, name: str) -> TreeDecomposition:
    nodes = sorted(tree.nodes, key=lambda b: sorted(b))
    idx = {b: i for i, b in enumerate(nodes)}
    edges = sorted(tuple(sorted((idx[a], idx[b]))) for a, b in tree.edges)
    return TreeDecomposition([frozenset(b) for b in nodes], edges, name)


def decompose_graph(g: nx.Graph) -> TreeDecomposition:
    """Min-fill decomposition, falling back to min-degree on large or wider cases."""
    if g.number_of_nodes() == 0:
        return TreeDecomposition([frozenset()], [], "empty")
    w_deg, t_deg = treewidth_min_degree(g)
    best = _from_nx(t_deg, "min-degree")
    if g.number_of_nodes() <= MIN_FILL_LIMIT:
        w_fill, t_fill = treewidth_min_fill_in(g)
        if w_fill <= w_deg:
            best = _from_nx(t_fill, "min-fill")
    return best


def validate_decomposition(g: nx.Graph, td: TreeDecomposition) -> list[str]:
    """Violations of the decomposition properties; empty when valid."""
    out = []
    n = len(td.bags)
    tree = nx.Graph()
    tree.add_nodes_from(range(n))
    tree.add_edges_from(td.tree_edges)
    if n and not nx.is_tree(tree):
        out.append("bag graph is not a tree")
    where: dict = {}
    for i, b in enumerate(td.bags):
        for v in b:
            where.setdefault(v, []).append(i)
    for v in sorted(g.nodes):
        occ = where.get(v)
        if not occ:
            out.append(f"vertex {v} in no bag")
        elif not nx.is_connected(tree.subgraph(occ)):
            out.append(f"occurrence subtree disconnected for vertex {v}")
    for u, v in sorted(tuple(sorted(e)) for e in g.edges):
        if not any(u in td.bags[i] and v in td.bags[i] for i in where.get(u, ())):
            out.append(f"edge uncovered ({u}, {v})")
    return out


# -- constraint system --------------------------------------------------------

@dataclass
class _Constraint:
    scope: tuple
    test: object  # callable on a dict var -> value
    kind: str


@dataclass
class DpModel:
    pix: Pixelation
    k: int
    domains: dict[int, list]
    constraints: list[_Constraint]
    graph: nx.Graph  # radial graph plus constraint cliques
    radial: nx.Graph
    h_seg: dict[int, int]  # vertex -> horizontal reflex segment through it
    v_seg: dict[int, int]


def build_model(pix: Pixelation, k: int) -> DpModel:
    gp = pix.graph
    rg = pix.radial
    nv = rg.nv
    h_seg: dict[int, int] = {}
    v_seg: dict[int, int] = {}
    for s, verts in pix.reflex_index.items():
        target = h_seg if pix.segments[s].orientation == "H" else v_seg
        for v in verts:
            target[v] = s
    st = pix.structure
    reflex_v = {gp.index[rv.point] for rv in st.reflex}
    domains: dict[int, list] = {}
    for v in range(nv):
        hs = (0, 1) if v in h_seg else (0,)
        vs = (0, 1) if v in v_seg else (0,)
        domains[v] = [(a, b) for a in hs for b in vs]
    cons: list[_Constraint] = []
    for v in sorted(reflex_v):
        cons.append(_Constraint((v,), lambda a, v=v: a[v][0] or a[v][1], "cover"))
    for v in range(nv):
        if v in h_seg and v in v_seg and v not in reflex_v and not gp.on_boundary[v]:
            cons.append(_Constraint((v,), lambda a, v=v: not (a[v][0] and a[v][1]), "cross"))

    right_of = {}
    above = {}
    for f in pix.pixels:
        x0, y0, x1, y1 = f.rect
        right_of[(x1, y0, y1)] = f.index
        above[(y1, x0, x1)] = f.index
    full = list(product(range(1, k + 1), repeat=2))
    for f in pix.pixels:
        x0, y0, x1, y1 = f.rect
        node = nv + f.index
        c = rg.corner
        bl, br, tr, tl = c[(f.index, 1)], c[(f.index, 2)], c[(f.index, 3)], c[(f.index, 4)]
        bottom, right, top, left = f.boundary_reflex
        for side, (p, q), bit in ((bottom, (bl, br), 0), (top, (tl, tr), 0), (left, (bl, tl), 1), (right, (br, tr), 1)):
            if side:
                cons.append(_Constraint((p, q), lambda a, p=p, q=q, b=bit: a[p][b] == a[q][b], "segment"))
        dom = full
        lnb = right_of.get((x0, y0, y1)) if left else None
        bnb = above.get((y0, x0, x1)) if bottom else None
        if left and lnb is None or bottom and bnb is None:
            raise AssertionError(f"pixel {f.index} has an interior side without a neighbour")
        if lnb is None:
            dom = [d for d in dom if d[0] == 1]
        else:
            ln = nv + lnb
            cons.append(_Constraint((node, ln, bl), lambda a, f=node, g=ln, c=bl: a[f][0] == a[g][0] + a[c][1], "hcount"))
        if bnb is None:
            dom = [d for d in dom if d[1] == 1]
        else:
            bn = nv + bnb
            cons.append(_Constraint((node, bn, bl), lambda a, f=node, g=bn, c=bl: a[f][1] == a[g][1] + a[c][0], "vcount"))
        domains[node] = dom

    radial = nx.Graph()
    radial.add_nodes_from(range(rg.n))
    radial.add_edges_from((nv + f, v) for f, v, _ in rg.edges)
    g = radial.copy()
    for con in cons:
        for i, u in enumerate(con.scope):
            for w in con.scope[i + 1:]:
                g.add_edge(u, w)
    return DpModel(pix, k, domains, cons, g, radial, h_seg, v_seg)


# -- nice decomposition -------------------------------------------------------

@dataclass
class NiceNode:
    kind: str  # leaf | introduce | forget | join
    bag: tuple
    var: int | None = None
    children: list[int] = field(default_factory=list)


def nice_decomposition(td: TreeDecomposition) -> tuple[list[NiceNode], int]:
    """Leaf / introduce / forget / join nodes with an empty root bag; returns ``(nodes, root)``."""
    nodes: list[NiceNode] = []
    adj: dict[int, list[int]] = {i: [] for i in range(len(td.bags))}
    for a, b in td.tree_edges:
        adj[a].append(b)
        adj[b].append(a)

    def chain(child: int, src: frozenset, dst: frozenset) -> int:
        cur, bag = child, set(src)
        for v in sorted(src - dst):
            bag.discard(v)
            nodes.append(NiceNode("forget", tuple(sorted(bag)), v, [cur]))
            cur = len(nodes) - 1
        for v in sorted(dst - src):
            bag.add(v)
            nodes.append(NiceNode("introduce", tuple(sorted(bag)), v, [cur]))
            cur = len(nodes) - 1
        return cur

    # iterative post-order from bag 0
    parent = {0: None}
    order = []
    stack = [0]
    while stack:
        u = stack.pop()
        order.append(u)
        for w in adj[u]:
            if w not in parent:
                parent[w] = u
                stack.append(w)
    built: dict[int, int] = {}
    for u in reversed(order):
        bag = td.bags[u]
        kids = [w for w in adj[u] if parent.get(w) == u]
        tops = [chain(built[w], td.bags[w], bag) for w in kids]
        if not tops:
            nodes.append(NiceNode("leaf", ()))
            tops = [chain(len(nodes) - 1, frozenset(), bag)]
        cur = tops[0]
        for other in tops[1:]:
            nodes.append(NiceNode("join", tuple(sorted(bag)), None, [cur, other]))
            cur = len(nodes) - 1
        built[u] = cur
    root = chain(built[0], td.bags[0], frozenset())
    return nodes, root


# -- dynamic program ----------------------------------------------------------

class StateOverflow(RuntimeError):
    def __init__(self, bag_size: int, states: int):
        super().__init__(f"state table exceeded the limit at a bag of size {bag_size} ({states} states)")
        self.bag_size = bag_size
        self.states = states


@dataclass
class DpResult:
    witness: ConformingPartition | None
    k: int
    width: int
    max_states: int
    states_per_node: list[int]
    td: TreeDecomposition

    @property
    def bound(self) -> int:
        """Per-bag state bound ``k^(2w+2)``."""
        return self.k ** (2 * self.width + 2)


def _run(model: DpModel, nodes: list[NiceNode], root: int, max_states: int | None):
    by_var: dict[int, list[_Constraint]] = {}
    for con in model.constraints:
        for u in set(con.scope):
            by_var.setdefault(u, []).append(con)
    tables: list[dict | None] = [None] * len(nodes)
    back: list[dict | None] = [None] * len(nodes)
    sizes = [0] * len(nodes)
    for t, nd in enumerate(nodes):
        if nd.kind == "leaf":
            tab = {(): None}
        elif nd.kind == "introduce":
            child = nodes[nd.children[0]]
            pos = nd.bag.index(nd.var)
            members = set(nd.bag)
            checks = [c for c in by_var.get(nd.var, ()) if members.issuperset(c.scope)]
            tab = {}
            for s in tables[nd.children[0]]:
                a = dict(zip(child.bag, s))
                for val in model.domains[nd.var]:
                    a[nd.var] = val
                    if all(c.test(a) for c in checks):
                        tab[s[:pos] + (val,) + s[pos:]] = None
        elif nd.kind == "forget":
            child = nodes[nd.children[0]]
            pos = child.bag.index(nd.var)
            tab = {}
            bp = {}
            for s in tables[nd.children[0]]:
                key = s[:pos] + s[pos + 1:]
                if key not in tab:
                    tab[key] = None
                    bp[key] = s
            back[t] = bp
        else:
            left, right = (tables[c] for c in nd.children)
            if len(left) > len(right):
                left, right = right, left
            tab = {s: None for s in left if s in right}
        sizes[t] = len(tab)
        if max_states is not None and len(tab) > max_states:
            raise StateOverflow(len(nd.bag), len(tab))
        tables[t] = tab
    if () not in tables[root]:
        return None, sizes
    # walk back down recording the value of every variable
    assign: dict[int, object] = {}
    stack = [(root, ())]
    while stack:
        t, s = stack.pop()
        nd = nodes[t]
        for v, val in zip(nd.bag, s):
            assign.setdefault(v, val)
        if nd.kind == "forget":
            stack.append((nd.children[0], back[t][s]))
        elif nd.kind == "introduce":
            pos = nd.bag.index(nd.var)
            stack.append((nd.children[0], s[:pos] + s[pos + 1:]))
        elif nd.kind == "join":
            stack.extend((c, s) for c in nd.children)
    return assign, sizes


def decide_cstab_k_dp(poly: Polygon, k: int, td: TreeDecomposition | None = None,
                      max_states: int | None = None, pix: Pixelation | None = None) -> DpResult:
    """Decide stabbing number <= k; ``result.witness`` is None for "no"."""
    if k < 1:
        raise ValueError("k must be positive")
    pix = pix or Pixelation(poly)
    model = build_model(pix, k)
    if td is None:
        td = decompose_graph(model.graph)
    problems = validate_decomposition(model.graph, td)
    if problems:
        raise ValueError(f"invalid tree decomposition: {problems[0]}")
    nodes, root = nice_decomposition(td)
    assign, sizes = _run(model, nodes, root, max_states)
    peak = max(sizes, default=0)
    if k >= 2 and peak > k ** (2 * td.width + 2):
        raise AssertionError("state table above the per-bag bound")
    log.info("dp k=%d width=%d nodes=%d peak states=%d", k, td.width, len(nodes), peak)
    witness = None
    if assign is not None:
        chosen = set()
        for v, s in model.h_seg.items():
            if assign[v][0]:
                chosen.add(s)
        for v, s in model.v_seg.items():
            if assign[v][1]:
                chosen.add(s)
        witness = ConformingPartition(poly, frozenset(chosen))
        problems = check_conforming(poly, witness.chosen)
        if problems:
            raise AssertionError(f"dp witness is not a conforming partition: {problems[0]}")
        if stabbing_number_conforming(pix, witness).value > k:
            raise AssertionError("dp witness exceeds the stabbing bound")
    return DpResult(witness, k, td.width, peak, sizes, td)


def max_reflex_length(poly: Polygon, pix: Pixelation | None = None) -> int:
    """Largest number of inner pixelation-graph vertices on one reflex segment."""
    pix = pix or Pixelation(poly)
    return max((len(vs) - 2 for vs in pix.reflex_index.values()), default=0)


def decide_cstab_k_simple_gatefree(poly: Polygon, k: int, cutoff: int | None = None,
                                   max_states: int | None = None) -> ConformingPartition | None:
    """Stabbing-number decision for simple gate-free polygons.

    A segment of length at least ``cutoff`` (default ``cutoff_length(k)``)
    answers "no" at once; otherwise the decomposition DP settles it.
    """
    if poly.holes:
        raise ValueError("polygon has holes")
    if find_gates(poly):
        raise ValueError("polygon has gates")
    pix = Pixelation(poly)
    limit = cutoff_length(k) if cutoff is None else cutoff
    if max_reflex_length(poly, pix) >= limit:
        return None
    return decide_cstab_k_dp(poly, k, max_states=max_states, pix=pix).witness


def write_td(td: TreeDecomposition, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(td.to_json(), fh, indent=1)
