import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropants import pants_graph as pg
from tropants.fixtures import load
from tropants.pants_graph import (
    Edge,
    SignedCover,
    TrivalentGraph,
    all_vertex_matchings,
    build_atlas,
    cover_components,
    dumbbell_graph,
    induced_matching,
    is_admissible_matching,
    order_of_matching,
    pants_graph,
    random_graph,
    surface_invariants,
    theta_graph,
    union_find_components,
    validate_atlas,
    validate_cover,
    validate_graph,
)
from tropants.reports import StructuralError


def nx_components(g, cover):
    """(closed circles, open arcs) of the sheet graph, via networkx."""
    G = nx.Graph()
    for h in g.half_edges():
        for s in "+-":
            G.add_node((h, s))
    for v, arcs in cover.matchings.items():
        for arc in arcs:
            a, b = tuple(arc)
            G.add_edge(a, b)
    for i, e in enumerate(g.edges):
        for s in "+-":
            t = s if not e.sheet_swap else {"+": "-", "-": "+"}[s]
            G.add_edge((f"e{i}.0", s), (f"e{i}.1", t))
    closed = opened = 0
    for comp in nx.connected_components(G):
        if any(h.startswith("l") for h, _ in comp):
            opened += 1
        else:
            closed += 1
    return closed, opened


def fixture(name):
    data = load(name)
    g = TrivalentGraph.from_json(data)
    return g, SignedCover.from_json(g, data), data["cyclic_orders"]


# -- graphs ------------------------------------------------------------------------


def test_valid_graphs():
    assert validate_graph(theta_graph()).ok
    assert validate_graph(pants_graph()).ok
    assert validate_graph(dumbbell_graph()).ok


def test_four_valent_rejected():
    g = TrivalentGraph(["a", "b"], [Edge(("a", "b"))] * 3, ["a"])
    rep = validate_graph(g)
    assert not rep.checks["trivalent"]
    assert "vertex 'a' has degree 4" in rep.messages[0]


def test_loop_without_vertex():
    g = TrivalentGraph([], [], [])
    assert not validate_graph(g).ok
    with pytest.raises(StructuralError):
        build_atlas(g, SignedCover({}), {})


def test_unknown_vertex():
    with pytest.raises(StructuralError):
        TrivalentGraph.from_json({"vertices": ["a"], "edges": [{"ends": ["a", "b"]}]})


# -- matchings ---------------------------------------------------------------------------


def test_exhaustive_matchings():
    hs = ["x", "y", "z"]
    everything = all_vertex_matchings(hs)
    assert len(everything) == 15
    accepted = {frozenset(frozenset(a) for a in m) for m in everything if is_admissible_matching(m, hs)}
    triangles = {induced_matching(("x", "y", "z")), induced_matching(("x", "z", "y"))}
    assert accepted == triangles
    for m in accepted:
        assert induced_matching(order_of_matching(m)) == m


def test_same_half_edge_rejected():
    arcs = [(("x", "+"), ("x", "-")), (("y", "+"), ("z", "-")), (("z", "+"), ("y", "-"))]
    assert not is_admissible_matching(arcs, ["x", "y", "z"])
    g = pants_graph()
    bad = SignedCover({"v": frozenset(frozenset(a) for a in arcs)})
    rep = validate_cover(g, bad)
    assert not rep.ok and "'v'" in rep.messages[0]


def test_both_chiralities_valid():
    g = pants_graph()
    for order in (("l0", "l1", "l2"), ("l0", "l2", "l1")):
        assert validate_cover(g, SignedCover.from_orders(g, {"v": order})).ok


def test_theta_planar_cover():
    g, cover, _ = fixture("theta")
    assert validate_cover(g, cover).ok


# -- invariants and components ---------------------------------------------------------


@pytest.mark.parametrize("name, genus, ends", [("pants", 0, 3), ("theta", 2, 0), ("dumbbell", 2, 0)])
def test_invariants(name, genus, ends):
    g, cover, _ = fixture(name)
    inv = surface_invariants(g, cover)
    assert (inv.genus, inv.ends) == (genus, ends)
    assert inv.euler == 2 - 2 * inv.genus - inv.ends


def test_pants_components():
    g, cover, _ = fixture("pants")
    assert cover_components(g, cover) == (0, 3) == nx_components(g, cover)


def test_theta_components_with_swap():
    g, cover, orders = fixture("theta")
    straight = cover_components(g, cover)
    assert straight == nx_components(g, cover) == union_find_components(g, cover)
    swapped = theta_graph(swap=(0,))
    cover2 = SignedCover.from_orders(swapped, orders)
    twisted = cover_components(swapped, cover2)
    assert twisted == nx_components(swapped, cover2)
    assert twisted != straight


def test_random_graphs_against_oracles():
    rng = random.Random(11)
    for _ in range(100):
        g, cover = random_graph(rng)
        got = cover_components(g, cover)
        assert got == union_find_components(g, cover) == nx_components(g, cover)


@given(st.integers(0, 10**6))
def test_euler_relation(seed):
    g, cover = random_graph(random.Random(seed))
    if not validate_graph(g).ok:
        return
    inv = surface_invariants(g, cover)
    assert inv.euler == -len(g.vertices) == 2 - 2 * inv.genus - inv.ends
    if not g.legs:
        assert len(g.vertices) % 2 == 0


# -- atlases ------------------------------------------------------------------------------


def test_pants_atlas():
    g, cover, orders = fixture("pants")
    atlas = build_atlas(g, cover, orders)
    assert sorted(t.map for t in atlas.transitions) == ["phi1", "phi2", "phi3"]
    assert validate_atlas(atlas).ok


def test_theta_atlas():
    g, cover, orders = fixture("theta")
    atlas = build_atlas(g, cover, orders)
    assert len(atlas.transitions) == 6
    rep = validate_atlas(atlas)
    assert rep.ok and not any(rep.artifacts["twists"].values())


def test_swapped_edge_twists():
    _, _, orders = fixture("theta")
    g = theta_graph(swap=(1,))
    atlas = build_atlas(g, SignedCover.from_orders(g, orders), orders)
    rep = validate_atlas(atlas)
    assert rep.ok
    assert rep.artifacts["twists"] == {"e0": False, "e1": True, "e2": False}


def test_chirality_clash():
    g, cover, orders = fixture("theta")
    clash = dict(orders)
    clash["b"] = list(reversed(orders["b"]))
    with pytest.raises(StructuralError, match="'b'"):
        build_atlas(g, cover, clash)
    rep = validate_atlas(build_atlas(g, cover, clash, check=False))
    assert not rep.ok
    assert rep.artifacts["failing_vertices"] == ["b"]
    assert "vertex 'b'" in " ".join(rep.messages)


def _flip_cover(cover):
    sw = {"+": "-", "-": "+"}
    return SignedCover({v: frozenset(frozenset((h, sw[s]) for h, s in arc) for arc in arcs) for v, arcs in cover.matchings.items()})


@pytest.mark.parametrize("clash_at", [None, "a", "b"])
def test_global_chirality_flip(clash_at):
    g, cover, orders = fixture("theta")
    orders = {v: list(o) for v, o in orders.items()}
    if clash_at:
        orders[clash_at] = list(reversed(orders[clash_at]))
    rep = validate_atlas(build_atlas(g, cover, orders, check=False))
    flipped = {v: list(reversed(o)) for v, o in orders.items()}
    rep2 = validate_atlas(build_atlas(g, _flip_cover(cover), flipped, check=False))
    assert rep.ok == rep2.ok
    assert rep.artifacts == rep2.artifacts


@given(st.permutations([0, 1, 2]), st.lists(st.booleans(), min_size=3, max_size=3))
def test_atlas_canonical_under_edge_permutation(perm, swaps):
    _, _, orders = fixture("theta")
    g = TrivalentGraph(["a", "b"], [Edge(("a", "b"), Fraction(i + 1), swaps[i]) for i in range(3)])
    atlas = build_atlas(g, SignedCover.from_orders(g, orders), orders)
    # edge i of g becomes edge perm[i] of h
    h = TrivalentGraph(["a", "b"], [g.edges[perm.index(j)] for j in range(3)])

    def rename(name):
        i, end = name[1:].split(".")
        return f"e{perm[int(i)]}.{end}"

    h_orders = {v: [rename(x) for x in o] for v, o in orders.items()}
    atlas2 = build_atlas(h, SignedCover.from_orders(h, h_orders), h_orders)
    assert atlas.canonical() == atlas2.canonical()
    assert validate_atlas(atlas).ok == validate_atlas(atlas2).ok
    assert sorted(validate_atlas(atlas).artifacts["twists"].values()) == sorted(
        validate_atlas(atlas2).artifacts["twists"].values()
    )


def test_atlas_deterministic():
    g, cover, orders = fixture("dumbbell")
    assert build_atlas(g, cover, orders).to_dict() == build_atlas(g, cover, orders).to_dict()


def test_graph_json_roundtrip():
    g, _, orders = fixture("dumbbell")
    again = TrivalentGraph.from_json(pg.graph_to_json(g, orders))
    assert again == g
