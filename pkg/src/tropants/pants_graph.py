"""Trivalent graphs with a signed double cover, and the gluing atlas over them.

Half-edges are named "e{i}.0" / "e{i}.1" for the two ends of edge i and
"l{i}" for leg i. A sheet-point is a (half-edge, sign) pair with sign "+"
or "-". At a vertex the six sheet-points are joined by three arcs; the
admissible patterns are exactly those induced by a cyclic order
(h1, h2, h3): arcs (h1-, h2+), (h2-, h3+), (h3-, h1+).
"""
from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from ._linalg import frac
from .matrix_factorization import CoefRing, SignedAlgebraElement, signed_window_basis, tau12_check
from .reports import StructuralError, ValidationReport

SIGNS = ("+", "-")


def _flip(s: str) -> str:
    return "-" if s == "+" else "+"


@dataclass(frozen=True)
class Edge:
    ends: tuple
    length: Fraction = Fraction(1)
    sheet_swap: bool = False


@dataclass
class TrivalentGraph:
    vertices: list
    edges: list = field(default_factory=list)
    legs: list = field(default_factory=list)  # vertex of each leg

    @classmethod
    def from_json(cls, data: dict) -> "TrivalentGraph":
        verts = [str(v) for v in data.get("vertices", [])]
        edges = []
        for i, e in enumerate(data.get("edges", [])):
            ends = tuple(str(v) for v in e.get("ends", ()))
            if len(ends) != 2:
                raise StructuralError(f"edge {i} must have two endpoints")
            for v in ends:
                if v not in verts:
                    raise StructuralError(f"edge {i} ends at unknown vertex {v!r}")
            edges.append(Edge(ends, frac(e.get("length", 1)), bool(e.get("sheet_swap", False))))
        legs = []
        for i, l in enumerate(data.get("legs", [])):
            v = str(l["vertex"] if isinstance(l, dict) else l)
            if v not in verts:
                raise StructuralError(f"leg {i} is attached to unknown vertex {v!r}")
            legs.append(v)
        return cls(verts, edges, legs)

    def half_edges(self) -> dict:
        """Half-edge name -> vertex."""
        out = {}
        for i, e in enumerate(self.edges):
            out[f"e{i}.0"] = e.ends[0]
            out[f"e{i}.1"] = e.ends[1]
        for i, v in enumerate(self.legs):
            out[f"l{i}"] = v
        return out

    def incident(self, v) -> list:
        return sorted(h for h, w in self.half_edges().items() if w == v)

    def partner(self, h: str) -> str | None:
        if h.startswith("l"):
            return None
        i, end = h[1:].split(".")
        return f"e{i}.{1 - int(end)}"

    def edge_of(self, h: str) -> Edge | None:
        return None if h.startswith("l") else self.edges[int(h[1:].split(".")[0])]

    def components(self) -> list:
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            parent[find(e.ends[0])] = find(e.ends[1])
        groups: dict = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())


def validate_graph(g: TrivalentGraph) -> ValidationReport:
    rep = ValidationReport()
    rep.add("has_vertices", bool(g.vertices), "no vertices: a closed loop without a vertex is not trivalent")
    deg = Counter(g.half_edges().values())
    bad = [v for v in g.vertices if deg[v] != 3]
    rep.add("trivalent", not bad, ", ".join(f"vertex {v!r} has degree {deg[v]}" for v in bad))
    nonpos = [i for i, e in enumerate(g.edges) if e.length <= 0]
    rep.add("positive_lengths", not nonpos, f"edges {nonpos} have non-positive length")
    comps = g.components() if g.vertices else []
    rep.add("connected", len(comps) <= 1, f"{len(comps)} components: {comps}")
    rep.artifacts["components"] = comps
    return rep


# -- covers -----------------------------------------------------------------------


def induced_matching(order) -> frozenset:
    """Arcs of the vertex model attached to a cyclic order of half-edges."""
    h = list(order)
    return frozenset(frozenset({(h[i], "-"), (h[(i + 1) % 3], "+")}) for i in range(3))


def order_of_matching(arcs) -> tuple | None:
    """The cyclic order inducing an admissible matching, or None."""
    hs = sorted({h for arc in arcs for h, _ in arc})
    if len(hs) != 3:
        return None
    for perm in ((hs[0], hs[1], hs[2]), (hs[0], hs[2], hs[1])):
        if induced_matching(perm) == frozenset(frozenset(a) for a in arcs):
            return perm
    return None


def _canonical_order(order) -> tuple:
    i = order.index(min(order))
    return tuple(order[i:]) + tuple(order[:i])


def is_admissible_matching(arcs, half_edges) -> bool:
    """Triangle type with each arc joining opposite signs of distinct half-edges."""
    arcs = [tuple(a) for a in arcs]
    pts = [p for a in arcs for p in a]
    if len(arcs) != 3 or any(len(a) != 2 for a in arcs):
        return False
    if sorted(pts) != sorted((h, s) for h in half_edges for s in SIGNS):
        return False
    for (h1, s1), (h2, s2) in arcs:
        if h1 == h2 or s1 == s2:
            return False
    pattern = {frozenset((a[0][0], a[1][0])) for a in arcs}
    return len(pattern) == 3


@dataclass
class SignedCover:
    matchings: dict  # vertex -> frozenset of arcs

    @classmethod
    def from_orders(cls, g: TrivalentGraph, orders: dict) -> "SignedCover":
        return cls({v: induced_matching(orders[v]) for v in g.vertices})

    @classmethod
    def from_json(cls, g: TrivalentGraph, data: dict) -> "SignedCover":
        raw = data.get("vertex_matchings")
        if raw is None:
            return cls.from_orders(g, data["cyclic_orders"])
        out = {}
        for v, arcs in raw.items():
            try:
                out[str(v)] = frozenset(frozenset((p[0], p[1]) for p in arc) for arc in arcs)
            except (TypeError, IndexError) as exc:
                raise StructuralError(f"malformed arcs at vertex {v!r}") from exc
        return cls(out)

    def edge_image(self, g: TrivalentGraph, h: str, s: str) -> tuple | None:
        p = g.partner(h)
        if p is None:
            return None
        return (p, _flip(s) if g.edge_of(h).sheet_swap else s)


def default_orders(g: TrivalentGraph) -> dict:
    return {v: tuple(g.incident(v)) for v in g.vertices}


def validate_cover(g: TrivalentGraph, cover: SignedCover) -> ValidationReport:
    rep = ValidationReport()
    bad = []
    for v in g.vertices:
        arcs = cover.matchings.get(v)
        if arcs is None:
            bad.append(f"vertex {v!r} has no matching")
            continue
        arcs = [tuple(sorted(a)) for a in arcs]
        if any(len(a) != 2 for a in arcs) or not is_admissible_matching(arcs, g.incident(v)):
            bad.append(f"vertex {v!r}: matching {sorted(arcs)} is not of triangle type")
    rep.add("vertex_matchings", not bad, "; ".join(bad))
    extra = set(cover.matchings) - set(g.vertices)
    rep.add("known_vertices", not extra, f"matchings given for unknown vertices {sorted(extra)}")
    return rep


def all_vertex_matchings(half_edges) -> list:
    """All 15 perfect matchings of the six sheet-points at a vertex."""
    pts = [(h, s) for h in half_edges for s in SIGNS]

    def rec(rest):
        if not rest:
            yield []
            return
        a = rest[0]
        for i in range(1, len(rest)):
            for m in rec(rest[1:i] + rest[i + 1 :]):
                yield [(a, rest[i])] + m

    return list(rec(pts))


def _sheet_graph(g: TrivalentGraph, cover: SignedCover) -> dict:
    nbr: dict = {}
    for v in g.vertices:
        for a in cover.matchings[v]:
            p, q = tuple(a)
            nbr.setdefault(p, []).append(q)
            nbr.setdefault(q, []).append(p)
    for h in g.half_edges():
        for s in SIGNS:
            img = cover.edge_image(g, h, s)
            if img is not None:
                nbr.setdefault((h, s), []).append(img)
    return nbr


def cover_components(g: TrivalentGraph, cover: SignedCover) -> tuple[int, int]:
    """(closed circles, open arcs) of the one-manifold over the graph, by walking it."""
    nbr = _sheet_graph(g, cover)
    seen = set()
    circles = arcs = 0
    # strands through leg sheet-points are open, the rest close up
    starts = sorted(p for p in nbr if len(nbr[p]) == 1) + sorted(nbr)
    for start in starts:
        if start in seen:
            continue
        stack = [start]
        while stack:
            p = stack.pop()
            if p not in seen:
                seen.add(p)
                stack.extend(nbr[p])
        if len(nbr[start]) == 1:
            arcs += 1
        else:
            circles += 1
    return circles, arcs


def union_find_components(g: TrivalentGraph, cover: SignedCover) -> tuple[int, int]:
    """Independent count over the same incidence data."""
    pts = [(h, s) for h in g.half_edges() for s in SIGNS]
    parent = {p: p for p in pts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p, qs in _sheet_graph(g, cover).items():
        for q in qs:
            parent[find(p)] = find(q)
    roots = {find(p) for p in pts}
    open_roots = {find((h, s)) for h in g.half_edges() if h.startswith("l") for s in SIGNS}
    return len(roots - open_roots), len(open_roots)


@dataclass
class SurfaceInvariants:
    genus: int | None
    ends: int
    euler: int
    cover_circles: int
    components: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "ends": self.ends,
            "euler": self.euler,
            "cover_circles": self.cover_circles,
            "components": self.components,
        }


def surface_invariants(g: TrivalentGraph, cover: SignedCover | None = None) -> SurfaceInvariants:
    rep = validate_graph(g)
    if not (rep.checks["trivalent"] and rep.checks["has_vertices"]):
        raise StructuralError("; ".join(rep.messages))
    if cover is None:
        cover = SignedCover.from_orders(g, default_orders(g))
    comps = []
    for comp in g.components():
        V = len(comp)
        L = sum(1 for v in g.legs if v in comp)
        two_g = 2 + V - L
        if two_g % 2:
            raise StructuralError(f"component {comp} has odd 2 + V - L")
        comps.append({"vertices": comp, "genus": two_g // 2, "ends": L, "euler": -V})
    circles, _ = cover_components(g, cover)
    genus = comps[0]["genus"] if len(comps) == 1 else None
    return SurfaceInvariants(genus, len(g.legs), -len(g.vertices), circles, comps if len(comps) > 1 else [])


# -- atlas ------------------------------------------------------------------------


@dataclass(frozen=True)
class Transition:
    """Comparison map on a half-edge: phi_k for its slot k in the cyclic order,
    with rows (E_{k+1}, E_{k+2}) placed on the sheets so that row 1 sits on
    ``row1_sheet``."""

    vertex: str
    half_edge: str
    slot: int
    map: str
    pair: tuple
    row1_sheet: str


@dataclass
class GluingAtlas:
    graph: TrivalentGraph
    cover: SignedCover
    orders: dict
    charts: list
    transitions: list

    def transition(self, h: str) -> Transition:
        for t in self.transitions:
            if t.half_edge == h:
                return t
        raise KeyError(h)

    def canonical(self) -> tuple:
        """Description invariant under renaming edges.

        Renaming edges can rotate the slot numbering at a vertex, so the
        minimum over all rotations is taken (3^V candidates; fine for the
        small graphs used here).
        """
        g = self.graph
        verts = list(g.vertices)
        slot = {(t.vertex, t.half_edge): t.slot for t in self.transitions}
        hv = g.half_edges()
        rows = []
        for t in self.transitions:
            e = g.edge_of(t.half_edge)
            if e is None:
                rows.append((t.vertex, t.slot, t.row1_sheet, None, None, None))
            else:
                p = g.partner(t.half_edge)
                rows.append((t.vertex, t.slot, t.row1_sheet, hv[p], slot[(hv[p], p)], (e.length, e.sheet_swap)))
        best = None
        for rot in itertools.product(range(3), repeat=len(verts)):
            r = dict(zip(verts, rot))

            def sl(v, k):
                return (k - 1 + r[v]) % 3 + 1

            cand = tuple(
                sorted(
                    (
                        (v, sl(v, k), f"phi{sl(v, k)}", row1, w, None if w is None else sl(w, kw), data)
                        for v, k, row1, w, kw, data in rows
                    ),
                    key=repr,
                )
            )
            if best is None or repr(cand) < repr(best):
                best = cand
        return best

    def to_dict(self) -> dict:
        return {
            "charts": self.charts,
            "transitions": [
                {
                    "vertex": t.vertex,
                    "half_edge": t.half_edge,
                    "slot": t.slot,
                    "map": t.map,
                    "pair": list(t.pair),
                    "row1_sheet": t.row1_sheet,
                }
                for t in self.transitions
            ],
        }


def _row1_sheet(order, h: str, arcs) -> str:
    # row 1 is the sheet whose arc comes from the predecessor in the order
    i = order.index(h)
    pred = order[(i - 1) % 3]
    for a in arcs:
        pts = dict((x, s) for x, s in a)
        if h in pts and pred in pts:
            return pts[h]
    raise StructuralError(f"no arc joins {pred} to {h}")


def build_atlas(g: TrivalentGraph, cover: SignedCover, cyclic_orders: dict, check: bool = True) -> GluingAtlas:
    rep = validate_graph(g)
    if not (rep.checks["trivalent"] and rep.checks["has_vertices"]):
        raise StructuralError("; ".join(rep.messages))
    crep = validate_cover(g, cover)
    if not crep.ok:
        raise StructuralError("; ".join(crep.messages))
    orders = {}
    for v in g.vertices:
        if v not in cyclic_orders:
            raise StructuralError(f"no cyclic order at vertex {v!r}")
        order = tuple(cyclic_orders[v])
        if sorted(order) != g.incident(v):
            raise StructuralError(f"cyclic order at {v!r} must list {g.incident(v)}")
        if check and induced_matching(order) != cover.matchings[v]:
            raise StructuralError(f"cyclic order at vertex {v!r} is inconsistent with its matching")
        orders[v] = _canonical_order(order)
    charts = [{"kind": "vertex", "vertex": v, "model": "End(E1+E2+E3)", "rank": 6} for v in g.vertices]
    charts += [{"kind": "edge", "edge": i, "model": "signed 2x2", "length": str(e.length)} for i, e in enumerate(g.edges)]
    charts += [{"kind": "leg", "leg": i, "model": "signed 2x2"} for i in range(len(g.legs))]
    trans = []
    for v in g.vertices:
        order = orders[v]
        for k, h in enumerate(order, start=1):
            pair = (f"E{k % 3 + 1}", f"E{(k + 1) % 3 + 1}")
            trans.append(Transition(v, h, k, f"phi{k}", pair, _row1_sheet(order, h, cover.matchings[v])))
    return GluingAtlas(g, cover, orders, charts, trans)


def _to_strands(x: SignedAlgebraElement, row1: str) -> dict:
    lab = {1: row1, 2: _flip(row1)}
    return {(lab[i], lab[j]): dict(v) for (i, j), v in x.entries.items()}


def _from_strands(m: dict, row1: str) -> SignedAlgebraElement:
    idx = {row1: 1, _flip(row1): 2}
    return SignedAlgebraElement({(idx[a], idx[b]): dict(v) for (a, b), v in m.items()})


def edge_twist(atlas: GluingAtlas, i: int, N: int = 3) -> bool:
    """Whether the two transitions over edge i differ by the covering involution.

    Strands of the edge are named by their sheet at end 0. Each end places
    row 1 of its chart on one strand; pushing the window basis through one
    chart and pulling it back through the other gives either the identity
    or the row/column swap.
    """
    g = atlas.graph
    a, b = atlas.transition(f"e{i}.0"), atlas.transition(f"e{i}.1")
    # the strand carrying b's row 1, named by its sheet at end 0
    b_row1 = atlas.cover.edge_image(g, f"e{i}.1", b.row1_sheet)[1]
    basis = signed_window_basis(N)
    images = [_from_strands(_to_strands(x, b_row1), a.row1_sheet) for x in basis]
    if all(y == x for x, y in zip(basis, images)):
        return False
    if all(y == x.swap() for x, y in zip(basis, images)):
        return True
    raise AssertionError("composite is neither the identity nor the involution")


def validate_atlas(atlas: GluingAtlas, N: int = 3) -> ValidationReport:
    if N < 2:
        raise ValueError("window too small: need N >= 2")
    rep = ValidationReport()
    g = atlas.graph
    clash = sorted({t.vertex for t in atlas.transitions if t.row1_sheet != "+"})
    rep.add("chirality", not clash, ", ".join(f"vertex {v!r} has chirality opposite to its matching" for v in clash))
    bad = []
    twists = {}
    for i, e in enumerate(g.edges):
        tw = edge_twist(atlas, i, N)
        twists[f"e{i}"] = tw
        if tw != e.sheet_swap:
            ends = sorted(set(e.ends) & set(clash)) or list(e.ends)
            bad.append(f"edge e{i}: twist {tw} but sheet_swap {e.sheet_swap} (vertices {', '.join(map(repr, ends))})")
    rep.add("edges", not bad, "; ".join(bad))
    rep.add("tau12", tau12_check(CoefRing(2, N)).ok, "involution is not intertwined by phi3")
    rep.artifacts["twists"] = twists
    rep.artifacts["failing_vertices"] = clash
    return rep


# -- fixtures and random graphs --------------------------------------------------------


def pants_graph() -> TrivalentGraph:
    return TrivalentGraph(["v"], [], ["v", "v", "v"])


def theta_graph(swap=()) -> TrivalentGraph:
    return TrivalentGraph(["a", "b"], [Edge(("a", "b"), Fraction(1), i in swap) for i in range(3)])


def dumbbell_graph() -> TrivalentGraph:
    return TrivalentGraph(["a", "b"], [Edge(("a", "a")), Edge(("a", "b")), Edge(("b", "b"))])


def random_graph(rng: random.Random, max_vertices: int = 8) -> tuple[TrivalentGraph, SignedCover]:
    """Configuration-model trivalent graph with random legs, chiralities and swaps."""
    V = rng.randint(1, max_vertices)
    stubs = [f"v{i}" for i in range(V) for _ in range(3)]
    rng.shuffle(stubs)
    L = rng.choice([x for x in range(0, min(len(stubs), 4) + 1) if (len(stubs) - x) % 2 == 0])
    legs, rest = stubs[:L], stubs[L:]
    edges = [Edge((rest[j], rest[j + 1]), Fraction(rng.randint(1, 4)), rng.random() < 0.4) for j in range(0, len(rest), 2)]
    g = TrivalentGraph([f"v{i}" for i in range(V)], edges, legs)
    orders = {}
    for v in g.vertices:
        hs = g.incident(v)
        orders[v] = tuple(hs) if rng.random() < 0.5 else (hs[0], hs[2], hs[1])
    return g, SignedCover.from_orders(g, orders)


def graph_to_json(g: TrivalentGraph, orders: dict | None = None) -> dict:
    out = {
        "vertices": list(g.vertices),
        "edges": [{"ends": list(e.ends), "length": str(e.length), "sheet_swap": e.sheet_swap} for e in g.edges],
        "legs": [{"vertex": v} for v in g.legs],
    }
    if orders is not None:
        out["cyclic_orders"] = {v: list(o) for v, o in orders.items()}
    return out
