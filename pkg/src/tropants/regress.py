"""The acceptance suite over the bundled examples, shared by the CLI and the tests."""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import matrix_factorization as mf
from . import novikov_floer as nf
from . import pants_graph as pg
from ._linalg import frac, quad, solve
from .fixtures import lift_from_json, load
from .periodic_av import (
    QuasiPeriodicLift,
    periodic_central_fiber,
    periodic_genus,
    periodic_subdivision,
    periodic_subdivision_check,
    ring_presentation_mod_t,
    theta_exponent_check,
)
from .toric_degen import build_fan, central_fiber, chart_superpotential_check, genus_and_ends, smoothness_check
from .tropical_core import check_unimodular_regular, induced_subdivision, legendre_transform


@dataclass
class CriterionResult:
    number: int
    title: str
    ok: bool
    seconds: float
    limit: float
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} criterion {self.number}: {self.title} ({self.seconds:.2f}s, limit {self.limit:g}s)"

    def to_dict(self, timing: bool = True) -> dict:
        out = {"number": self.number, "title": self.title, "ok": self.ok, "limit": self.limit, "detail": self.detail}
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


def _timed(number, title, limit, fn) -> CriterionResult:
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    if dt >= limit:
        detail["time_exceeded"] = True
    return CriterionResult(number, title, bool(ok) and dt < limit, dt, limit, detail)


# -- 1, 2: the genus-2 polytope ----------------------------------------------------


def genus2_structure(data=None) -> tuple[bool, dict]:
    lift, tri, gram = lift_from_json(data or load("genus2"))
    rep = check_unimodular_regular(lift, tri)
    genus, ends, pants = genus_and_ends(lift)
    psi = legendre_transform(lift, gram)
    cells = psi.maximal_cells
    compact = [c for c in cells if c.compact]
    names = [comp.surface for comp in central_fiber(psi).components if comp.compact]
    detail = {
        "checks": rep.checks,
        "genus": genus,
        "ends": ends,
        "pants": pants,
        "maximal_cells": len(cells),
        "compact_cells": len(compact),
        "compact_surfaces": names,
    }
    ok = (
        rep.ok
        and (genus, ends, pants) == (2, 6, 8)
        and len(cells) == 8
        and len(compact) == 2
        and names == ["Bl1(P1xP1)"] * 2
    )
    return ok, detail


def genus2_fan(data=None) -> tuple[bool, dict]:
    lift, _, _ = lift_from_json(data or load("genus2"))
    fan = build_fan(induced_subdivision(lift))
    smooth = [smoothness_check(c) for c in fan]
    chart = [chart_superpotential_check(c) if s else False for c, s in zip(fan, smooth)]
    return all(smooth) and all(chart), {"cones": len(fan), "smooth": all(smooth), "chart_W": all(chart)}


# -- 3, 4, 5: the periodic examples --------------------------------------------------


def _periodic(name):
    data = load(name)
    return data, QuasiPeriodicLift.from_json(data)


def oracle_legendre(lift: QuasiPeriodicLift, w, radius: int = 6) -> Fraction:
    """Brute-force max over a large box of <w, g u> - phi(u)."""
    best = None
    for u in itertools.product(*[range(c - radius, c + radius + 1) for c in w]):
        val = frac(quad(lift.av.gram, w, u)) - lift(u)
        best = val if best is None or val > best else best
    return best


def oracle_envelope(values: dict, x) -> Fraction:
    """Lower convex envelope at x of integer heights, by trying every simplex."""
    n = len(x)
    pts = [p for p in values if all(abs(a - b) <= 2 for a, b in zip(p, x))]
    best = None
    for S in itertools.combinations(pts, n + 1):
        rows = [[p[i] for p in S] for i in range(n)] + [[1] * (n + 1)]
        lam = solve(rows, list(x) + [1])
        if lam is None or any(l < 0 for l in lam):
            continue
        v = sum(l * values[p] for l, p in zip(lam, S))
        best = v if best is None or v < best else best
    return best


def hilbert_oracle(lift: QuasiPeriodicLift, k: int) -> int:
    """Height-zero classes of degree k, counted without the ring machinery.

    A class is an x in (1/k)Z^n modulo Gamma whose envelope value is in (1/k)Z.
    """
    av = lift.av
    box = av.box(2)
    values = {w: oracle_legendre(lift, w) for w in itertools.product(*[range(lo, hi + 1) for lo, hi in box])}
    count = 0
    B = [list(r) for r in zip(*av.gamma_basis)] if av.n > 1 else [[av.gamma_basis[0][0]]]
    lo = [min(0, *[b[i] for b in av.gamma_basis]) for i in range(av.n)]
    hi = [max(sum(max(0, b[i]) for b in av.gamma_basis), 1) for i in range(av.n)]
    for num in itertools.product(*[range(l * k, h * k + 1) for l, h in zip(lo, hi)]):
        x = tuple(Fraction(c, k) for c in num)
        t = solve(B, list(x))
        if t is None or any(c < 0 or c >= 1 for c in t):
            continue
        if (oracle_envelope(values, x) * k).denominator == 1:
            count += 1
    return count


def node_ring(max_degree: int = 6) -> tuple[bool, dict]:
    _, lift = _periodic("node")
    pres = ring_presentation_mod_t(lift, max_degree)
    want = {(1, (0, 0)), (2, (Fraction(1, 2), Fraction(1, 2))), (3, (Fraction(1, 3), Fraction(1, 3)))}
    got = {(g[1], g[2].v) for g in pres.generators}
    names = {(g[1], g[2].v): g[0] for g in pres.generators}
    rel_ok = False
    if want <= got:
        a, b, c = (names[w] for w in sorted(want))
        idx = {g[0]: i for i, g in enumerate(pres.generators)}

        def mono(**e):
            m = [0] * len(pres.generators)
            for k, v in e.items():
                m[idx[k]] = v
            return tuple(m)

        rel = {mono(**{a: 1, b: 1, c: 1}): 1, mono(**{b: 3}): -1, mono(**{c: 2}): -1}
        rel_ok = pres.in_relation_space(rel)
    oracle = [hilbert_oracle(lift, k) for k in range(1, max_degree + 1)]
    return want <= got and rel_ok and pres.hilbert == oracle, {
        "generators": [f"{g[0]}: {g[2].label()}" for g in pres.generators],
        "relations": [pres.format_relation(r) for _, r in pres.relations],
        "relation_abc_b3_c2": rel_ok,
        "hilbert": pres.hilbert,
        "hilbert_oracle": oracle,
    }


def genus5_structure(name: str = "genus5") -> tuple[bool, dict]:
    data, lift = _periodic(name)
    fund = [[tuple(p) for p in c] for c in data["fundamental_triangulation"]]
    rep = periodic_subdivision_check(lift, fund)
    genus = periodic_genus(len(fund))
    sub = periodic_subdivision(lift)
    fiber = periodic_central_fiber(sub)
    surfaces = [c["surface"] for c in fiber]
    hexagons = [c["degree"] == 6 for c in fiber]
    detail = {
        "checks": rep.checks,
        "messages": rep.messages,
        "given_triangles": len(fund),
        "induced_cells": rep.artifacts.get("triangles"),
        "genus": genus,
        "vertex_classes": len(sub.vertex_classes),
        "surfaces": surfaces,
    }
    ok = (
        rep.ok
        and rep.artifacts.get("triangles") == 8
        and genus == 5
        and len(sub.vertex_classes) == 4
        and all(hexagons)
        and surfaces == ["Bl3P2"] * 4
    )
    return ok, detail


def theta_suite(radius: int = 5) -> tuple[bool, dict]:
    detail = {}
    ok = True
    for name in ("node", "genus5"):
        _, lift = _periodic(name)
        for gamma in lift.av.gamma_basis:
            res = theta_exponent_check(lift, lift.av, gamma, radius)
            detail[f"{name} {list(gamma)}"] = res.ok
            ok &= res.ok
    return ok, detail


# -- 6, 7: sections and chords -------------------------------------------------------


def novikov_suite(random_specs: int = 50, seed: int = 2024) -> tuple[bool, dict]:
    data = load("novikov")
    examples = []
    ok = True
    for ex in data["examples"]:
        spec = nf.ValuationSpec.from_json(ex["spec"])
        U = nf.Region.from_json(ex["region"])
        exact = nf.section_membership(spec, U).ok
        oracle = nf.brute_force_membership(spec, U)
        examples.append({"name": ex["name"], "member": exact, "oracle": oracle})
        ok &= exact == oracle == ex["expected"]
    rng = random.Random(seed)
    agree = members = 0
    for i in range(random_specs):
        spec, U = nf.random_spec(rng, 1 + i % 3)
        exact = nf.section_membership(spec, U).ok
        agree += exact == nf.brute_force_membership(spec, U)
        members += exact
    disc = nf.punctured_disc_report([frac(r) for r in data["punctured_disc"]["rate_samples"]])
    ok &= agree == random_specs and disc["ok"]
    return ok, {
        "examples": examples,
        "random_agreement": f"{agree}/{random_specs}",
        "random_members": members,
        "punctured_disc": disc["ok"],
    }


def chord_suite() -> tuple[bool, dict]:
    data = load("chords")
    ok = True
    detail = {}
    for h in data["hamiltonians"]:
        H = nf.ConvexHamiltonian.from_json(h["hamiltonian"])
        if H.kind == "quadratic":
            chords = nf.enumerate_chords(H, h["window"])
            exact = all((c.b, c.action) == nf.quadratic_closed_form(H, c.v) and c.index == 0 for c in chords)
            detail[h["name"]] = {"chords": len(chords), "closed_form": exact}
            ok &= exact
        else:
            rep = nf.cf_correspondence_report(H, h["window"])
            detail[h["name"]] = {k: rep[k] for k in ("chords", "bridge_ok", "all_index_zero", "radial_ok", "ok")}
            ok &= rep["ok"]
    return ok, detail


# -- 8, 9: matrix factorizations and graphs ----------------------------------------------


def mf_suite(D: int = 4, N: int = 6) -> tuple[bool, dict]:
    rep = mf.mf_report(D, N)
    return rep["ok"], {"checks": rep["checks"], "messages": rep["messages"]}


def graph_fixture(name: str):
    data = load(name)
    g = pg.TrivalentGraph.from_json(data)
    return g, pg.SignedCover.from_json(g, data), data["cyclic_orders"]


def pants_suite(random_graphs: int = 100, seed: int = 7) -> tuple[bool, dict]:
    detail = {}
    g, cover, _ = graph_fixture("pants")
    inv = pg.surface_invariants(g, cover)
    detail["pants"] = {"genus": inv.genus, "ends": inv.ends, "components": pg.cover_components(g, cover)}
    ok = (inv.genus, inv.ends) == (0, 3)
    for name in ("theta", "dumbbell"):
        g, cover, _ = graph_fixture(name)
        inv = pg.surface_invariants(g, cover)
        detail[name] = {"genus": inv.genus, "ends": inv.ends}
        ok &= inv.genus == 2
    hs = ["h0", "h1", "h2"]
    accepted = [m for m in pg.all_vertex_matchings(hs) if pg.is_admissible_matching(m, hs)]
    triangle = {pg.induced_matching(o) for o in itertools.permutations(hs)}
    exhaustive = len(accepted) == 2 and {frozenset(frozenset(a) for a in m) for m in accepted} == triangle
    detail["matchings_accepted"] = f"{len(accepted)}/{len(pg.all_vertex_matchings(hs))}"
    ok &= exhaustive
    rng = random.Random(seed)
    agree = 0
    for _ in range(random_graphs):
        rg, rc = pg.random_graph(rng)
        agree += pg.cover_components(rg, rc) == pg.union_find_components(rg, rc)
    detail["union_find_agreement"] = f"{agree}/{random_graphs}"
    ok &= agree == random_graphs
    g, cover, orders = graph_fixture("theta")
    good = pg.validate_atlas(pg.build_atlas(g, cover, orders))
    clash_orders = dict(orders)
    a = clash_orders["a"]
    clash_orders["a"] = [a[0], a[2], a[1]]
    bad = pg.validate_atlas(pg.build_atlas(g, cover, clash_orders, check=False))
    detail["atlas_compatible"] = good.ok
    detail["atlas_clash_vertices"] = bad.artifacts["failing_vertices"]
    ok &= good.ok and not bad.ok and bad.artifacts["failing_vertices"] == ["a"]
    return ok, detail


CRITERIA = [
    (1, "genus-2 pants decomposition and compact components", 1.0, genus2_structure),
    (2, "genus-2 fan smoothness and chart superpotential", 1.0, genus2_fan),
    (3, "node ring generators, relation and Hilbert dimensions", 5.0, node_ring),
    (4, "genus-5 periodic triangulation and central fibre", 5.0, genus5_structure),
    (5, "theta exponent identity", 1.0, theta_suite),
    (6, "section membership against the counting oracle", 10.0, novikov_suite),
    (7, "Floer chords", 1.0, chord_suite),
    (8, "matrix factorization suite", 30.0, mf_suite),
    (9, "pants graph suite", 5.0, pants_suite),
]


def run_criterion(number: int) -> CriterionResult:
    for num, title, limit, fn in CRITERIA:
        if num == number:
            return _timed(num, title, limit, fn)
    raise KeyError(number)


def regress() -> list[CriterionResult]:
    return [_timed(num, title, limit, fn) for num, title, limit, fn in CRITERIA]
