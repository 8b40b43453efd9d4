"""Command-line front end: every command reads a JSON fixture (a path or a
bundled name) and writes a deterministic JSON report."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, is_dataclass
from fractions import Fraction

from . import matrix_factorization as mf
from . import novikov_floer as nf
from . import pants_graph as pg
from . import regress as rg
from ._linalg import dot, matvec
from .fixtures import InputError, lift_from_json, load_json, require
from .periodic_av import (
    QuasiPeriodicLift,
    extend_lift,
    periodic_central_fiber,
    periodic_genus,
    periodic_subdivision,
    periodic_subdivision_check,
    ring_presentation_mod_t,
    theta_exponent_check,
)
from .reports import StructuralError, ValidationReport
from .toric_degen import central_fiber, cstar_weight, degeneration_report, genus_and_ends, multiply, ring_basis
from .tropical_core import check_unimodular_regular, dual_cell, induced_subdivision, legendre_transform

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _plain(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((_plain(v) for v in x), key=repr)
    if is_dataclass(x) and not isinstance(x, type):
        return _plain(asdict(x))
    if hasattr(x, "item"):  # numpy scalars
        return x.item()
    return x


def dumps(report: dict) -> str:
    return json.dumps(_plain(report), sort_keys=True, indent=2)


def _kind(data: dict) -> str:
    if "gamma_basis" in data:
        return "periodic"
    if "support" in data:
        return "polytope-lift"
    if "edges" in data and "vertices" in data:
        return "graph"
    if "spec" in data or "examples" in data:
        return "novikov"
    if "hamiltonian" in data or "hamiltonians" in data:
        return "chords"
    raise InputError("cannot tell the fixture kind: expected 'support', 'gamma_basis', 'edges', 'spec' or 'hamiltonian'")


def _expect(data, *kinds):
    k = _kind(data)
    if k not in kinds:
        raise InputError(f"this command needs a {' or '.join(kinds)} fixture, got {k}")
    return k


def _report(ok, **body) -> tuple[bool, dict]:
    return bool(ok), {"ok": bool(ok), **body}


# -- commands --------------------------------------------------------------------


def cmd_validate(data, args):
    kind = _expect(data, "polytope-lift", "periodic", "graph")
    if kind == "graph":
        g = pg.TrivalentGraph.from_json(data)
        rep = pg.validate_graph(g)
        if rep.ok:
            crep = pg.validate_cover(g, pg.SignedCover.from_json(g, data))
            rep.checks.update(crep.checks)
            rep.messages.extend(crep.messages)
        return rep.ok, rep.to_dict()
    if kind == "periodic":
        lift = QuasiPeriodicLift.from_json(data)
        tri = data.get("fundamental_triangulation")
        rep = periodic_subdivision_check(lift, None if tri is None else [[tuple(p) for p in c] for c in tri])
        return rep.ok, rep.to_dict()
    lift, tri, _ = lift_from_json(data)
    rep = check_unimodular_regular(lift, tri if tri is not None else induced_subdivision(lift))
    genus, ends, pants = genus_and_ends(lift)
    return _report(rep.ok, checks=rep.checks, messages=rep.messages, genus=genus, ends=ends, pants=pants)


def cmd_legendre(data, args):
    _expect(data, "polytope-lift")
    lift, _, gram = lift_from_json(data)
    psi = legendre_transform(lift, gram)
    conv = psi.verify_convexity()
    cells = [
        {
            "label": c.label,
            "vertices": c.vertices,
            "rays": c.rays,
            "gradient": c.gradient,
            "constant": c.constant,
            "compact": c.compact,
            "maximal": c.maximal,
        }
        for c in psi.cells
    ]
    # each maximal cell is where the pairing bound psi(v) + phi(w) >= <v, g w> is tight
    duality = []
    for c in psi.maximal_cells:
        d = dual_cell(lift, gram, c.label)
        tight = all(psi(v) + lift(c.label) == dot(v, matvec(psi.gram, c.label)) for v in d.vertices)
        if d != c or not tight:
            duality.append(c.label)
    return _report(
        conv.ok and not duality,
        cells=cells,
        walls=psi.walls,
        convexity_failures=conv.failures,
        duality_failures=duality,
    )


def cmd_degenerate(data, args):
    _expect(data, "polytope-lift")
    lift, _, gram = lift_from_json(data)
    rep = degeneration_report(lift, gram)
    psi = legendre_transform(lift, gram)
    pts = lift.support
    window = [(min(p[i] for p in pts), max(p[i] for p in pts)) for i in range(lift.dim)]
    slices = {k: ring_basis(psi, k, 0, window).basis for k in range(1, args.max_degree + 1)}
    # degree-one products land on or above the graph, with additive weights
    products_ok = True
    for a in slices[1]:
        for b in slices[1]:
            p, tpow = multiply(a, b, psi)
            products_ok &= tpow >= 0 and cstar_weight(p) == cstar_weight(a) + cstar_weight(b)
    rep["ring"] = {"window": window, "height_zero_points": {k: len(v) for k, v in slices.items()}, "products_ok": products_ok}
    return _report(rep["smooth"] and rep["chart_W"] and rep["regular"]["ok"] and products_ok, **rep)


def cmd_central_fiber(data, args):
    kind = _expect(data, "polytope-lift", "periodic")
    if kind == "periodic":
        sub = periodic_subdivision(QuasiPeriodicLift.from_json(data))
        comps = periodic_central_fiber(sub)
        adjacency = []
    else:
        lift, _, gram = lift_from_json(data)
        fib = central_fiber(legendre_transform(lift, gram)).to_dict()
        comps, adjacency = fib["components"], fib["adjacency"]
    singular = [c["label"] for c in comps if str(c["surface"]).startswith("singular")]
    return _report(not singular, components=comps, adjacency=adjacency, singular=singular)


def cmd_periodic(data, args):
    _expect(data, "periodic")
    lift = QuasiPeriodicLift.from_json(data)
    rep = periodic_subdivision_check(lift)
    body = {"subdivision": rep.to_dict()}
    if "fundamental_triangulation" in data and lift.av.n == 2:
        body["genus"] = periodic_genus(len(data["fundamental_triangulation"]))
    if rep.checks.get("quasi_periodic"):
        pres = ring_presentation_mod_t(lift, args.max_degree)
        body["generators"] = [{"name": n, "degree": d, "class": p.label()} for n, d, p in pres.generators]
        body["hilbert"] = pres.hilbert
        body["relations"] = [{"degree": d, "relation": pres.format_relation(r) + " = 0"} for d, r in pres.relations]
    return rep.ok, {"ok": rep.ok, **body}


def cmd_theta(data, args):
    _expect(data, "periodic")
    lift = QuasiPeriodicLift.from_json(data)
    rows = []
    reach = max(abs(c) for g in lift.av.gamma_basis for c in g)
    values = extend_lift(lift, args.window + reach)
    for gamma in lift.av.gamma_basis:
        res = theta_exponent_check(values, lift.av, gamma, args.window)
        rows.append({"gamma": gamma, "ok": res.ok, "failures": res.failures[:10]})
    ok = all(r["ok"] for r in rows)
    return _report(ok, window=args.window, gammas=rows)


def _novikov_case(case):
    require(case, "spec", "region")
    spec = nf.ValuationSpec.from_json(case["spec"])
    U = nf.Region.from_json(case["region"])
    res = nf.section_membership(spec, U)
    oracle = nf.brute_force_membership(spec, U)
    row = {"name": case.get("name"), "member": res.ok, "oracle": oracle, "certificate": res.certificate}
    ok = res.ok == oracle
    if "expected" in case:
        row["expected"] = case["expected"]
        ok &= res.ok == case["expected"]
    row["ok"] = ok
    return row


def _scalar(data):
    return nf.NovikovScalar([(r, c) for r, c in data["terms"]], data.get("trunc"))


def _novikov_arith(case):
    require(case, "a", "b")
    a, b = _scalar(case["a"]), _scalar(case["b"])
    s, p = nf.nov_add(a, b), nf.nov_mul(a, b)
    row = {"sum": s.terms, "product": p.terms, "val_sum": str(s.val()), "val_product": str(p.val())}
    ok = True
    for key, got in (("sum", s), ("product", p)):
        if key in case:
            ok &= got == _scalar(case[key])
    row["ok"] = ok
    return row


def cmd_novikov(data, args):
    _expect(data, "novikov")
    rows = [_novikov_case(c) for c in data.get("examples", [data])]
    body = {"cases": rows}
    ok = all(r["ok"] for r in rows)
    if "arithmetic" in data:
        arith = [_novikov_arith(c) for c in data["arithmetic"]]
        body["arithmetic"] = arith
        ok &= all(r["ok"] for r in arith)
    if "punctured_disc" in data:
        disc = nf.punctured_disc_report(data["punctured_disc"].get("rate_samples", (-1, 0, 1)))
        body["punctured_disc"] = disc
        ok &= disc["ok"]
    return _report(ok, **body)


def _chord_case(case, window):
    require(case, "hamiltonian")
    H = nf.ConvexHamiltonian.from_json(case["hamiltonian"])
    w = window if window is not None else int(case.get("window", 2))
    if H.kind == "quadratic":
        chords = nf.enumerate_chords(H, w)
        exact = all((c.b, c.action) == nf.quadratic_closed_form(H, c.v) for c in chords)
        return {
            "name": case.get("name"),
            "ok": exact,
            "chords": [{"v": c.v, "b": c.b, "action": c.action, "index": c.index} for c in chords],
        }
    rep = nf.cf_correspondence_report(H, w)
    return {"name": case.get("name"), **rep}


def cmd_chords(data, args):
    _expect(data, "chords")
    rows = [_chord_case(c, args.window) for c in data.get("hamiltonians", [data])]
    return _report(all(r["ok"] for r in rows), cases=rows)


def cmd_mf(data, args):
    try:
        rep = mf.mf_report(args.D, args.N, args.trunc)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return rep["ok"], rep


def _graph(data):
    _expect(data, "graph")
    g = pg.TrivalentGraph.from_json(data)
    return g, pg.SignedCover.from_json(g, data)


def cmd_graph(data, args):
    g, cover = _graph(data)
    rep = pg.validate_graph(g)
    if not rep.ok:
        return False, rep.to_dict()
    crep = pg.validate_cover(g, cover)
    inv = pg.surface_invariants(g, cover)
    circles, arcs = pg.cover_components(g, cover)
    return _report(
        rep.ok and crep.ok,
        checks={**rep.checks, **crep.checks},
        messages=rep.messages + crep.messages,
        invariants=inv.to_dict(),
        cover_circles=circles,
        cover_arcs=arcs,
    )


def cmd_atlas(data, args):
    g, cover = _graph(data)
    orders = data.get("cyclic_orders") or pg.default_orders(g)
    atlas = pg.build_atlas(g, cover, orders, check=False)
    rep = pg.validate_atlas(atlas, args.N)
    return rep.ok, {**rep.to_dict(), "atlas": atlas.to_dict()}


COMMANDS = {
    "validate": cmd_validate,
    "legendre": cmd_legendre,
    "degenerate": cmd_degenerate,
    "central-fiber": cmd_central_fiber,
    "periodic": cmd_periodic,
    "theta-check": cmd_theta,
    "novikov-check": cmd_novikov,
    "chords": cmd_chords,
    "mf-verify": cmd_mf,
    "graph": cmd_graph,
    "atlas": cmd_atlas,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tropants", description=__doc__.split(":")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--json", action="store_true", help="machine-readable output (always on for fixture commands)")

    for name in COMMANDS:
        sp = sub.add_parser(name)
        if name != "mf-verify":
            sp.add_argument("fixture", help="JSON file or bundled fixture name")
        common(sp)
        if name in ("periodic", "degenerate"):
            sp.add_argument("--max-degree", type=int, default=6 if name == "periodic" else 2)
        if name == "theta-check":
            sp.add_argument("--window", type=int, default=5)
        if name == "chords":
            sp.add_argument("--window", type=int, default=None)
        if name in ("mf-verify", "atlas"):
            sp.add_argument("--D", type=int, default=4)
            sp.add_argument("--N", type=int, default=6 if name == "mf-verify" else 3)
        if name == "mf-verify":
            sp.add_argument("--trunc", "--novikov-trunc", dest="trunc", type=Fraction, default=None)
    sp = sub.add_parser("regress", help="run the acceptance suite on the bundled fixtures")
    common(sp)
    sp.add_argument("--timing", action="store_true", help="include wall-clock seconds in --json output")
    return p


def _emit(text: str, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.command == "regress":
        results = rg.regress()
        ok = all(r.ok for r in results)
        if args.json:
            text = dumps({"ok": ok, "criteria": [r.to_dict(timing=args.timing) for r in results]})
        else:
            text = "\n".join(r.line() for r in results)
        _emit(text, args.out)
        return EXIT_OK if ok else EXIT_FAIL
    try:
        data = {} if args.command == "mf-verify" else load_json(args.fixture)
        if not isinstance(data, dict):
            raise InputError("fixture must be a JSON object")
        ok, report = COMMANDS[args.command](data, args)
    except KeyError as exc:
        print(f"error: missing field {exc.args[0]!r}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, StructuralError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not isinstance(report, dict):
        report = ValidationReport(report).to_dict()
    fixture = getattr(args, "fixture", None)
    _emit(dumps({"command": args.command, "fixture": fixture, **report}), args.out)
    return EXIT_OK if ok else EXIT_FAIL


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
