"""Hardness gadgets for stabbing number four and the composed reduction polygon.

Gadget geometry is given in local coordinates and placed with a
:class:`Transform`.  Ports are stored in doubled coordinates so that the
half-unit stabbing segments stay integral.

Truth values travel along vertical stabbing segments: a stab crossing two
chosen segments propagates 1, one crossing three propagates 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .geom import Point, Polygon, is_thin, reflex_vertices, validate
from .grid import union_polygons
from .partition import ConformingPartition, check_conforming, resolve_ids, stabbing_number_conforming
from .pixelation import Pixelation

K = 4

F0_OUTER = [(3, 0), (3, 1), (7, 1), (7, 8), (0, 8), (0, 1), (2, 1), (2, 0)]
F0_HOLES = [[(a, b), (a + 1, b), (a + 1, b + 1), (a, b + 1)] for a in (1, 3, 5) for b in (2, 4, 6)]
V0_OUTER = [(1, 0), (2, 0), (2, 8), (10, 8), (10, 9), (9, 9), (9, 17), (8, 17), (8, 9), (0, 9), (0, 8), (1, 8)]
S0_OUTER = [(13, 0), (14, 0), (14, 9), (24, 9), (24, 20), (23, 20), (23, 10),
            (6, 10), (6, 20), (5, 20), (5, 10), (4, 10), (4, 9), (13, 9)]


def c0_outer(a: int, b: int, c: int, d: int, e: int) -> list[tuple[int, int]]:
    return [(0, 0), (0, -c - 1), (1, -c - 1), (1, -1), (a + 1, -1), (a + 1, -d - 1),
            (a + 2, -d - 1), (a + 2, -1), (a + b + 2, -1), (a + b + 2, -e - 1),
            (a + b + 3, -e - 1), (a + b + 3, 0)]


class LayoutError(ValueError):
    pass


# -- transforms --------------------------------------------------------------

@dataclass(frozen=True)
class Transform:
    """``p -> rotate(reflect(p)) + (dx, dy)``; reflection maps y to -y."""

    rot: int = 0  # counterclockwise quarter turns
    reflect: bool = False
    dx: int = 0
    dy: int = 0

    def __post_init__(self):
        if self.rot not in (0, 1, 2, 3):
            raise ValueError(f"rotation must be 0..3 quarter turns, got {self.rot}")

    def _linear(self, x: int, y: int) -> tuple[int, int]:
        if self.reflect:
            y = -y
        for _ in range(self.rot):
            x, y = -y, x
        return x, y

    def point(self, p: Iterable[int]) -> Point:
        x, y = self._linear(*p)
        return Point(x + self.dx, y + self.dy)

    def point2(self, p: Iterable[int]) -> tuple[int, int]:
        """Same map on doubled coordinates."""
        x, y = self._linear(*p)
        return (x + 2 * self.dx, y + 2 * self.dy)

    def orientation(self, o: str) -> str:
        if self.rot % 2 == 0:
            return o
        return "V" if o == "H" else "H"

    def then(self, outer: "Transform") -> "Transform":
        """Apply ``self`` first, then ``outer``."""
        # outer(self(p)) = Ro Fo (Rs Fs p + ts) + to ; F R^r = R^-r F
        refl = self.reflect != outer.reflect
        rot = (self.rot * (-1 if outer.reflect else 1) + outer.rot) % 4
        dx, dy = outer.point((self.dx, self.dy))
        return Transform(rot, refl, dx, dy)


IDENTITY = Transform()


def _check_group(kind: str, t: Transform) -> None:
    if kind == "forcer":
        if t.reflect:
            raise ValueError("forcer placements allow rotations and translations only")
    elif kind == "variable":
        if t.rot or t.reflect or t.dy:
            raise ValueError("variable placements allow horizontal translation only")
    elif kind in ("split", "clause"):
        if t.rot:
            raise ValueError(f"{kind} placements allow translation and reflection only")
    else:
        raise ValueError(f"unknown gadget kind {kind!r}")


# -- fragments ---------------------------------------------------------------

@dataclass(frozen=True)
class Port:
    name: str
    connection: tuple[Point, Point]
    stab: tuple[tuple[int, int], tuple[int, int]]  # doubled coordinates

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "connection": [list(p) for p in self.connection],
            "stab": [[c / 2 for c in p] for p in self.stab],
        }


@dataclass
class Fragment:
    kind: str
    transform: Transform
    polygon: Polygon
    ports: dict[str, Port]
    params: tuple = ()
    parts: list["Fragment"] = field(default_factory=list)


def _ports(t: Transform, spec: dict) -> dict[str, Port]:
    out = {}
    for name, (conn, stab) in spec.items():
        out[name] = Port(name, tuple(t.point(p) for p in conn), tuple(t.point2(p) for p in stab))
    return out


def _ring(t: Transform, pts) -> list[Point]:
    return [t.point(p) for p in pts]


def forcer(t: Transform = IDENTITY) -> Fragment:
    _check_group("forcer", t)
    poly = Polygon.from_rings(_ring(t, F0_OUTER), [_ring(t, h) for h in F0_HOLES])
    ports = _ports(t, {"out": (((2, 0), (3, 0)), ((5, 16), (5, 0)))})
    return Fragment("forcer", t, poly, ports)


# forcer placements as (rotation, translation) in gadget coordinates
_V_FORCERS = [Transform(3, False, 2, 7), Transform(1, False, 8, 10)]
_S_FORCERS = [Transform(2, False, 7, 9), Transform(3, False, 6, 18), Transform(1, False, 23, 13)]


def _compose(kind: str, t: Transform, base: list, placements: list[Transform], ports: dict,
             params: tuple = ()) -> Fragment:
    parts = [forcer(p.then(t)) for p in placements]
    body = Polygon.from_rings(_ring(t, base))
    poly = union_polygons([body] + [f.polygon for f in parts])
    return Fragment(kind, t, poly, _ports(t, ports), params, parts)


def variable_gadget(t: Transform = IDENTITY) -> Fragment:
    _check_group("variable", t)
    ports = {
        "neg": (((1, 0), (2, 0)), ((3, 18), (3, 0))),
        "pos": (((9, 17), (8, 17)), ((17, 16), (17, 34))),
    }
    return _compose("variable", t, V0_OUTER, _V_FORCERS, ports)


def split_gadget(t: Transform = IDENTITY) -> Fragment:
    _check_group("split", t)
    ports = {
        "in": (((13, 0), (14, 0)), ((27, 0), (27, 20))),
        "left": (((5, 20), (6, 20)), ((11, 18), (11, 40))),
        "right": (((23, 20), (24, 20)), ((47, 18), (47, 40))),
    }
    return _compose("split", t, S0_OUTER, _S_FORCERS, ports)


def clause_gadget(a: int, b: int, c: int, d: int, e: int, t: Transform = IDENTITY) -> Fragment:
    _check_group("clause", t)
    if min(a, b, c, d, e) < 1:
        raise ValueError("clause parameters must be positive integers")
    ports = {
        "left": (((0, -c - 1), (1, -c - 1)), ((1, 0), (1, -2 * c - 2))),
        "center": (((a + 1, -d - 1), (a + 2, -d - 1)), ((2 * a + 3, 0), (2 * a + 3, -2 * d - 2))),
        "right": (((a + b + 2, -e - 1), (a + b + 3, -e - 1)), ((2 * a + 2 * b + 5, 0), (2 * a + 2 * b + 5, -2 * e - 2))),
    }
    poly = Polygon.from_rings(_ring(t, c0_outer(a, b, c, d, e)))
    return Fragment("clause", t, poly, _ports(t, ports), (a, b, c, d, e))


def inner_stab(frag: Fragment) -> tuple[tuple[int, int], tuple[int, int]]:
    """Doubled endpoints of the gadget's horizontal inner stab."""
    t = frag.transform
    if frag.kind == "variable":
        ends = ((0, 17), (20, 17))
    elif frag.kind == "split":
        ends = ((8, 19), (48, 19))
    elif frag.kind == "clause":
        a, b = frag.params[:2]
        ends = ((0, -1), (2 * a + 2 * b + 6, -1))
    else:
        raise ValueError(f"{frag.kind} has no inner stab")
    return t.point2(ends[0]), t.point2(ends[1])


# -- crossing counts ---------------------------------------------------------

def crossings_on(poly: Polygon, chosen: Iterable[int], stab) -> int:
    """Chosen segments crossed transversally by a doubled-coordinate stab."""
    (x1, y1), (x2, y2) = stab
    segs = poly.structure.segments
    n = 0
    if x1 == x2:
        lo, hi = sorted((y1, y2))
        for s in chosen:
            sg = segs[s]
            if sg.orientation == "H" and lo < 2 * sg.line < hi and 2 * sg.lo < x1 < 2 * sg.hi:
                n += 1
    else:
        lo, hi = sorted((x1, x2))
        for s in chosen:
            sg = segs[s]
            if sg.orientation == "V" and lo < 2 * sg.line < hi and 2 * sg.lo < y1 < 2 * sg.hi:
                n += 1
    return n


# -- RPM drawings ------------------------------------------------------------

@dataclass(frozen=True)
class Literal:
    var: str
    column: int


@dataclass(frozen=True)
class Clause:
    name: str
    sign: str  # "+" or "-"
    rect: tuple[int, int, int, int]
    literals: tuple[Literal, ...]


@dataclass(frozen=True)
class RpmInstance:
    variables: tuple[tuple[str, tuple[int, int, int, int]], ...]
    clauses: tuple[Clause, ...]

    @classmethod
    def from_json(cls, data: dict | str) -> "RpmInstance":
        if isinstance(data, str):
            data = json.loads(data)
        variables = tuple((v["name"], tuple(v["rect"])) for v in data["variables"])
        clauses = []
        for i, c in enumerate(data["clauses"]):
            lits = tuple(sorted((Literal(l["var"], int(l["column"])) for l in c["literals"]), key=lambda l: l.column))
            clauses.append(Clause(c.get("name", f"C{i + 1}"), c["sign"], tuple(c["rect"]), lits))
        inst = cls(variables, tuple(clauses))
        inst.check()
        return inst

    def to_json(self) -> dict:
        return {
            "variables": [{"name": n, "rect": list(r)} for n, r in self.variables],
            "clauses": [
                {"name": c.name, "sign": c.sign, "rect": list(c.rect),
                 "literals": [{"var": l.var, "column": l.column} for l in c.literals]}
                for c in self.clauses
            ],
        }

    @property
    def var_names(self) -> list[str]:
        return [n for n, _ in sorted(self.variables, key=lambda v: v[1][0])]

    def check(self) -> None:
        rects = {n: r for n, r in self.variables}
        if len(rects) != len(self.variables):
            raise LayoutError("duplicate variable names")
        for n, (x0, y0, x1, y1) in rects.items():
            if not (x0 < x1 and y0 < 0 < y1):
                raise LayoutError(f"variable {n}: rectangle must straddle the x-axis")
        all_rects = [(f"variable {n}", r) for n, r in rects.items()] + [(f"clause {c.name}", c.rect) for c in self.clauses]
        for i, (na, a) in enumerate(all_rects):
            if not (a[0] < a[2] and a[1] < a[3]):
                raise LayoutError(f"{na}: degenerate rectangle")
            for nb, b in all_rects[i + 1:]:
                if a[0] < b[2] and b[0] < a[2] and a[1] < b[3] and b[1] < a[3]:
                    raise LayoutError(f"{na} and {nb} overlap")
        top = max(r[3] for r in rects.values())
        bottom = min(r[1] for r in rects.values())
        used: set[tuple[str, str, int]] = set()
        for c in self.clauses:
            if c.sign not in "+-" or len(c.sign) != 1:
                raise LayoutError(f"clause {c.name}: sign must be + or -")
            if len(c.literals) != 3:
                raise LayoutError(f"clause {c.name}: needs exactly three literals")
            if c.sign == "+" and c.rect[1] <= top or c.sign == "-" and c.rect[3] >= bottom:
                raise LayoutError(f"clause {c.name}: rectangle on the wrong side of the variables")
            for lit in c.literals:
                if lit.var not in rects:
                    raise LayoutError(f"clause {c.name}: unknown variable {lit.var}")
                vr = rects[lit.var]
                if not (vr[0] <= lit.column < vr[2] and c.rect[0] <= lit.column < c.rect[2]):
                    raise LayoutError(f"clause {c.name}: column {lit.column} leaves its rectangles")
                key = (lit.var, c.sign, lit.column)
                if key in used:
                    raise LayoutError(f"clause {c.name}: column {lit.column} reused")
                used.add(key)
                # the column runs from the variable rectangle to the clause rectangle
                ya, yb = (vr[3], c.rect[1]) if c.sign == "+" else (c.rect[3], vr[1])
                for name, r in all_rects:
                    if r[0] <= lit.column < r[2] and ya < r[3] and r[1] < yb:
                        raise LayoutError(f"clause {c.name}: column {lit.column} crosses {name}")
            if len(set(l.column for l in c.literals)) != 3:
                raise LayoutError(f"clause {c.name}: literal columns must differ")

    def evaluate(self, assignment: dict[str, int]) -> list[str]:
        """Names of clauses the assignment falsifies."""
        bad = []
        for c in self.clauses:
            want = 1 if c.sign == "+" else 0
            if not any(assignment[l.var] == want for l in c.literals):
                bad.append(c.name)
        return bad


# -- composition -------------------------------------------------------------

@dataclass
class Link:
    """An out-stab joined to an in-stab across a connection edge."""

    source: tuple[int, str]  # (gadget index, port)
    target: tuple[int, str]


@dataclass
class PortMap:
    rpm: RpmInstance
    gadgets: list[Fragment]
    variables: dict[str, int]  # variable name -> gadget index
    clauses: dict[str, int]
    links: list[Link]
    feeds: dict[tuple[int, str], tuple[int, str]]  # in-port -> feeding out-port

    def to_json(self) -> dict:
        return {
            "gadgets": [
                {"index": i, "kind": g.kind, "transform": [g.transform.rot, g.transform.reflect, g.transform.dx, g.transform.dy],
                 "params": list(g.params), "ports": [p.to_json() for p in g.ports.values()]}
                for i, g in enumerate(self.gadgets)
            ],
            "variables": self.variables,
            "clauses": self.clauses,
            "links": [{"from": list(l.source), "to": list(l.target)} for l in self.links],
        }


def _bbox(frag: Fragment) -> tuple[int, int, int, int]:
    return frag.polygon.bbox()


def build_hardness_polygon(rpm: RpmInstance) -> tuple[Polygon, PortMap]:
    """The composed polygon for a drawing, with its port map.

    Orders are taken from the drawing (variables by rectangle, literals by
    column, clauses by distance from the axis); coordinates are recomputed so
    that every corridor is one unit wide and neighbouring gadgets keep a gap.
    """
    rpm.check()
    gadgets: list[Fragment] = []
    links: list[Link] = []
    var_index: dict[str, int] = {}
    # outputs[(var, sign)] = list of (gadget index, port, column x, top y) left to right
    outputs: dict[tuple[str, str], list[tuple[int, str, int, int]]] = {}
    counts = {(n, s): sum(1 for c in rpm.clauses if c.sign == s for l in c.literals if l.var == n)
              for n in rpm.var_names for s in "+-"}

    cursor = None
    for name in rpm.var_names:
        local: list[tuple[Fragment, tuple | None]] = []
        frags = [variable_gadget()]
        chain_specs = []
        for sign in "+-":
            m = counts[(name, sign)]
            refl = sign == "-"
            col = 8 if sign == "+" else 1
            y = 17 if sign == "+" else 0
            prev = (0, "pos" if sign == "+" else "neg")
            outs = []
            if m == 1:
                outs.append((prev[0], prev[1], col, y))
            for i in range(m - 1):
                t = Transform(0, refl, col - 13, y)
                frags.append(split_gadget(t))
                gi = len(frags) - 1
                chain_specs.append((prev, (gi, "in")))
                nxt = y + 20 if sign == "+" else y - 20
                outs.append((gi, "left", col - 8, nxt))
                prev = (gi, "right")
                col, y = col + 10, nxt
                if i == m - 2:
                    outs.append((gi, "right", col, y))
            local.append((sign, outs))
        xmin = min(_bbox(f)[0] for f in frags)
        xmax = max(_bbox(f)[2] for f in frags)
        shift = 0 if cursor is None else cursor + 2 - xmin
        base = len(gadgets)
        for f in frags:
            gadgets.append(_shifted(f, shift))
        var_index[name] = base
        for (src, dst) in chain_specs:
            links.append(Link((base + src[0], src[1]), (base + dst[0], dst[1])))
        for sign, outs in local:
            outputs[(name, sign)] = [(base + g, p, x + shift, y) for g, p, x, y in outs]
        cursor = xmax + shift

    # obstacles per side: (x0, x1, extreme y), extreme = top for "+", -bottom for "-"
    obstacles = {"+": [], "-": []}
    for g in gadgets:
        x0, y0, x1, y1 = _bbox(g)
        if g.kind == "variable":
            obstacles["+"].append((x0, x1, y1))
            obstacles["-"].append((x0, x1, -y0))
        elif g.transform.reflect:
            obstacles["-"].append((x0, x1, -y0))
        else:
            obstacles["+"].append((x0, x1, y1))

    # assign literal occurrences to outputs in column order
    taken: dict[tuple[str, str], list] = {k: [] for k in outputs}
    for c in rpm.clauses:
        for lit in c.literals:
            taken[(lit.var, c.sign)].append((lit.column, c.name))
    slot_of: dict[tuple[str, int], tuple[int, str, int, int]] = {}
    for key, occ in taken.items():
        for (col, cname), out in zip(sorted(occ), outputs[key]):
            slot_of[(cname, col, key[0])] = out

    clause_index: dict[str, int] = {}
    for sign in "+-":
        side = [c for c in rpm.clauses if c.sign == sign]
        side.sort(key=lambda c: c.rect[1] if sign == "+" else -c.rect[3])
        for c in side:
            outs = [slot_of[(c.name, l.column, l.var)] for l in c.literals]
            outs.sort(key=lambda o: o[2])
            xs = [o[2] for o in outs]
            ys = [o[3] if sign == "+" else -o[3] for o in outs]
            x_lo, x_hi = xs[0], xs[2] + 1
            level = max([h for a, b, h in obstacles[sign] if a <= x_hi and x_lo <= b] + ys)
            top = level + 2
            a, b = xs[1] - xs[0] - 1, xs[2] - xs[1] - 1
            if a < 1 or b < 1:
                raise LayoutError(f"clause {c.name}: literal columns too close")
            cl, d, e = (top - 1 - y for y in ys)
            t = Transform(0, sign == "-", xs[0], top if sign == "+" else -top)
            frag = clause_gadget(a, b, cl, d, e, t)
            gadgets.append(frag)
            gi = len(gadgets) - 1
            clause_index[c.name] = gi
            for o, port in zip(outs, ("left", "center", "right")):
                links.append(Link((o[0], o[1]), (gi, port)))
            obstacles[sign].append((x_lo, x_hi, top))

    for l in links:
        sp = gadgets[l.source[0]].ports[l.source[1]].connection
        tp = gadgets[l.target[0]].ports[l.target[1]].connection
        if set(sp) != set(tp):
            raise LayoutError(f"connection edges do not meet: {l}")
    poly = union_polygons([g.polygon for g in gadgets])
    diag = validate(poly)
    if not diag.ok:
        raise LayoutError(f"composed polygon is invalid: {diag.violations[0]}")
    feeds = {l.target: l.source for l in links}
    return poly, PortMap(rpm, gadgets, var_index, clause_index, links, feeds)


def _shifted(f: Fragment, dx: int) -> Fragment:
    t = Transform(f.transform.rot, f.transform.reflect, f.transform.dx + dx, f.transform.dy)
    if f.kind == "variable":
        return variable_gadget(t)
    if f.kind == "split":
        return split_gadget(t)
    raise AssertionError(f.kind)


# -- standalone partitions ---------------------------------------------------

def _local_items(frag_local: Fragment, cp: ConformingPartition) -> list[tuple[tuple[int, int], str]]:
    segs = frag_local.polygon.structure.segments
    return sorted(((segs[s].apex.x, segs[s].apex.y), segs[s].orientation) for s in cp.chosen)


@lru_cache(maxsize=None)
def gadget_partitions(kind: str, params: tuple = ()) -> tuple:
    """Minimal partitions of a standalone gadget with stabbing <= 4, keyed by port counts.

    Returns ``((counts, items), ...)`` where counts map port name to the
    number of chosen segments crossing that port's stab and items are
    ``(apex, dir)`` pairs in local coordinates.
    """
    from .oracle import enumerate_minimal

    frag = _standalone(kind, params)
    out = []
    for cp in enumerate_minimal(frag.polygon, K):
        counts = tuple(sorted((n, crossings_on(frag.polygon, cp.chosen, p.stab)) for n, p in frag.ports.items()))
        out.append((counts, tuple(_local_items(frag, cp))))
    return tuple(out)


def _standalone(kind: str, params: tuple = ()) -> Fragment:
    if kind == "clause":
        return clause_gadget(*params)
    return {"variable": variable_gadget, "split": split_gadget, "forcer": forcer}[kind]()


def forcer_internal(frag: Fragment) -> frozenset[Point]:
    """Reflex vertices of a gadget that are images of forcer reflex vertices."""
    own = set(frag.polygon.structure.vertex_of)
    base = reflex_vertices(forcer().polygon)
    return frozenset(q for part in frag.parts for p in base if (q := part.transform.point(p)) in own)


def core_partitions(kind: str, params: tuple = ()) -> dict[frozenset, set]:
    """Stabbing-<=4 partitions up to choices inside the forcers.

    Maps each distinct set of chosen segments having an apex outside the
    forcers to the set of port-count tuples seen with it.
    """
    frag = _standalone(kind, params)
    st = frag.polygon.structure
    inside = forcer_internal(frag)
    out: dict[frozenset, set] = {}
    for counts, items in gadget_partitions(kind, params):
        core = set()
        for apex, o in items:
            seg = st.segments[st.segment_for(apex, o)]
            if any(a not in inside for a in seg.apexes):
                core.add((apex, o))
        out.setdefault(frozenset(core), set()).add(counts)
    return out


def _pick(kind: str, params: tuple, want: dict[str, int]) -> tuple:
    for counts, items in gadget_partitions(kind, params):
        c = dict(counts)
        if all(c[k] == v for k, v in want.items()):
            return items
    raise LookupError(f"{kind}{params}: no stabbing-4 partition with port counts {want}")


def witness_partition(poly: Polygon, pm: PortMap, assignment: dict[str, int]) -> ConformingPartition:
    """Assemble a stabbing-4 partition from per-gadget choices for a satisfying assignment."""
    missing = [n for n in pm.rpm.var_names if n not in assignment]
    if missing:
        raise ValueError(f"assignment misses variables {missing}")
    bad = pm.rpm.evaluate(assignment)
    if bad:
        raise ValueError(f"assignment falsifies clauses {bad}")
    # value carried by each out-port: 1 or 0
    value: dict[tuple[int, str], int] = {}
    items: list[tuple[tuple[int, int], str]] = []

    def place(gi: int, local: tuple) -> None:
        t = pm.gadgets[gi].transform
        for apex, o in local:
            items.append((tuple(t.point(apex)), t.orientation(o)))

    for name, gi in pm.variables.items():
        x = assignment[name]
        want = {"pos": 2, "neg": 3} if x else {"pos": 3, "neg": 2}
        place(gi, _pick("variable", (), want))
        value[(gi, "pos")] = x
        value[(gi, "neg")] = 1 - x
    for gi, g in enumerate(pm.gadgets):
        if g.kind != "split":
            continue
        v = value[pm.feeds[(gi, "in")]]
        place(gi, _pick("split", (), {"in": 1, "left": 2, "right": 2} if v else {"in": 0, "left": 3, "right": 3}))
        value[(gi, "left")] = value[(gi, "right")] = v
    for cname, gi in pm.clauses.items():
        g = pm.gadgets[gi]
        want = {p: value[pm.feeds[(gi, p)]] for p in ("left", "center", "right")}
        if not any(want.values()):
            raise AssertionError(f"clause {cname} receives no true literal")
        place(gi, _pick("clause", g.params, want))
    cp = ConformingPartition(poly, resolve_ids(poly, items))
    problems = check_conforming(poly, cp.chosen)
    if problems:
        raise AssertionError(f"assembled partition is not conforming: {problems[:3]}")
    return cp


def port_counts(poly: Polygon, pm: PortMap, cp: ConformingPartition) -> dict[tuple[int, str], int]:
    return {(gi, n): crossings_on(poly, cp.chosen, p.stab) for gi, g in enumerate(pm.gadgets) for n, p in g.ports.items()}


def extract_assignment(poly: Polygon, pm: PortMap, cp: ConformingPartition,
                       undetermined: int = 1) -> dict[str, int]:
    """Read each variable from its out-stabs; ``undetermined`` is used when both propagate 0."""
    out = {}
    for name, gi in pm.variables.items():
        g = pm.gadgets[gi]
        pos = crossings_on(poly, cp.chosen, g.ports["pos"].stab)
        neg = crossings_on(poly, cp.chosen, g.ports["neg"].stab)
        if pos not in (2, 3) or neg not in (2, 3) or pos == neg == 2:
            raise ValueError(f"variable {name}: malformed out-stab counts pos={pos} neg={neg}")
        if pos == 2:
            out[name] = 1
        elif neg == 2:
            out[name] = 0
        else:
            out[name] = undetermined
    return out


def verify_witness(poly: Polygon, cp: ConformingPartition, pix: Pixelation | None = None) -> int:
    pix = pix or Pixelation(poly)
    return stabbing_number_conforming(pix, cp).value


FOUR_VARIABLE_RPM = {
    "variables": [
        {"name": "x1", "rect": [0, -1, 10, 1]},
        {"name": "x2", "rect": [12, -1, 22, 1]},
        {"name": "x3", "rect": [24, -1, 34, 1]},
        {"name": "x4", "rect": [36, -1, 46, 1]},
    ],
    "clauses": [
        {"name": "C1", "sign": "+", "rect": [1, 6, 40, 8],
         "literals": [{"var": "x1", "column": 1}, {"var": "x3", "column": 30}, {"var": "x4", "column": 38}]},
        {"name": "C2", "sign": "+", "rect": [4, 3, 28, 5],
         "literals": [{"var": "x1", "column": 4}, {"var": "x2", "column": 16}, {"var": "x3", "column": 26}]},
        {"name": "C3", "sign": "-", "rect": [2, -5, 42, -3],
         "literals": [{"var": "x1", "column": 2}, {"var": "x2", "column": 14}, {"var": "x4", "column": 40}]},
    ],
}

SINGLE_CLAUSE_RPM = {
    "variables": [{"name": "x", "rect": [0, -1, 10, 1]}],
    "clauses": [
        {"name": "C1", "sign": "+", "rect": [0, 3, 10, 5],
         "literals": [{"var": "x", "column": 1}, {"var": "x", "column": 4}, {"var": "x", "column": 7}]},
    ],
}
