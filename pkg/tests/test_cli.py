import json

import pytest

from tropants import cli
from tropants.cli import run

FIXTURE_RUNS = [
    (["validate", "genus2"], 0),
    (["validate", "node"], 0),
    (["validate", "genus5"], 1),
    (["validate", "genus5_a2"], 0),
    (["validate", "theta"], 0),
    (["legendre", "genus2"], 0),
    (["degenerate", "genus2"], 0),
    (["central-fiber", "genus2"], 0),
    (["central-fiber", "genus5_a2"], 0),
    (["central-fiber", "genus5"], 1),
    (["periodic", "node"], 0),
    (["periodic", "genus5_a2", "--max-degree", "2"], 0),
    (["theta-check", "node"], 0),
    (["theta-check", "genus5_a2", "--window", "3"], 0),
    (["novikov-check", "novikov"], 0),
    (["chords", "chords"], 0),
    (["mf-verify", "--D", "4", "--N", "3"], 0),
    (["graph", "pants"], 0),
    (["graph", "theta"], 0),
    (["atlas", "theta"], 0),
    (["atlas", "dumbbell"], 0),
    (["atlas", "pants"], 0),
]


def call(argv, capsys):
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("argv, code", FIXTURE_RUNS, ids=[" ".join(a) for a, _ in FIXTURE_RUNS])
def test_commands(argv, code, capsys):
    got, out, err = call(argv, capsys)
    assert got == code, err
    report = json.loads(out)
    assert report["command"] == argv[0]
    assert report["ok"] is (code == 0)


def test_deterministic_output(tmp_path, capsys):
    for argv, _ in FIXTURE_RUNS:
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(argv + ["--out", str(a)])
        run(argv + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes(), argv
    assert capsys.readouterr().out == ""


def test_out_file_matches_stdout(tmp_path, capsys):
    target = tmp_path / "r.json"
    assert run(["graph", "theta", "--json", "--out", str(target)]) == 0
    assert run(["graph", "theta"]) == 0
    assert capsys.readouterr().out == target.read_text()


def test_path_and_bundled_name_agree(tmp_path, capsys):
    from tropants.fixtures import bundled_path

    src = bundled_path("theta")
    copy = tmp_path / "theta.json"
    copy.write_text(src.read_text())
    run(["atlas", str(copy)])
    a = json.loads(capsys.readouterr().out)
    run(["atlas", "fixtures/theta.json"])
    b = json.loads(capsys.readouterr().out)
    a.pop("fixture"), b.pop("fixture")
    assert a == b


def test_node_relation_in_report(capsys):
    run(["periodic", "node"])
    rep = json.loads(capsys.readouterr().out)
    assert [g["name"] for g in rep["generators"]] == ["a", "b", "c"]
    assert rep["hilbert"] == [1, 2, 3, 4, 5, 6]
    assert {"degree": 6, "relation": "b^3 - abc + c^2 = 0"} in rep["relations"]


def test_genus5_validate_reports_failure(capsys):
    code, out, _ = call(["validate", "genus5"], capsys)
    rep = json.loads(out)
    assert code == 1
    assert rep["checks"]["unimodular"] is False


def test_atlas_clash_exit_code(tmp_path, capsys):
    from tropants.fixtures import load
    from tropants.pants_graph import induced_matching

    data = load("theta")
    data["cyclic_orders"]["a"] = list(reversed(data["cyclic_orders"]["a"]))
    # the matchings still come from the original orders
    theta = load("theta")
    data["vertex_matchings"] = {
        v: [sorted([list(p) for p in arc]) for arc in induced_matching(o)] for v, o in theta["cyclic_orders"].items()
    }
    path = tmp_path / "clash.json"
    path.write_text(json.dumps(data))
    code, out, _ = call(["atlas", str(path)], capsys)
    rep = json.loads(out)
    assert code == 1
    assert rep["failing_vertices"] == ["a"]
    assert rep["checks"]["chirality"] is False


@pytest.mark.parametrize(
    "argv",
    [
        ["validate", "does/not/exist.json"],
        ["mf-verify", "--D", "2", "--N", "1"],
        ["legendre", "pants"],
        ["frobnicate"],
        ["validate"],
    ],
)
def test_input_errors(argv, capsys):
    code, out, err = call(argv, capsys)
    assert code == 2
    assert out == ""


def test_malformed_json_location(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"support": [[0, 0],\n  [1, 0]]\n  "values": []}')
    code, _, err = call(["validate", str(bad)], capsys)
    assert code == 2
    assert "line 3 column 3" in err


def test_missing_field(tmp_path, capsys):
    p = tmp_path / "m.json"
    p.write_text(json.dumps({"support": [[0, 0], [1, 0], [0, 1]]}))
    code, _, err = call(["validate", str(p)], capsys)
    assert code == 2
    assert "values" in err


def test_main_exits(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["graph", "pants"])
    assert exc.value.code == 0
    capsys.readouterr()


OPERATIONS = {
    "tropical_core": [
        "lattice_points",
        "normalized_volume",
        "induced_subdivision",
        "check_unimodular_regular",
        "legendre_transform",
        "dual_cell",
    ],
    "toric_degen": [
        "ring_basis",
        "multiply",
        "cstar_weight",
        "build_fan",
        "smoothness_check",
        "chart_superpotential_check",
        "central_fiber",
        "surface_id",
        "genus_and_ends",
    ],
    "periodic_av": [
        "extend_lift",
        "periodic_subdivision_check",
        "class_normal_form",
        "multiply",
        "ring_presentation_mod_t",
        "theta_exponent_check",
        "periodic_genus",
    ],
    "novikov_floer": ["nov_add", "nov_mul", "section_membership", "enumerate_chords", "cf_correspondence_report"],
    "matrix_factorization": [
        "make_E",
        "hom_differential",
        "contract_E3",
        "phi3",
        "verify_phi3",
        "tau12_check",
        "restrict_to_tropical_pants",
    ],
    "pants_graph": [
        "validate_graph",
        "validate_cover",
        "surface_invariants",
        "cover_components",
        "build_atlas",
        "validate_atlas",
    ],
    "regress": ["regress"],
}


def test_every_operation_reachable_from_cli(monkeypatch, capsys):
    import importlib
    import pkgutil

    import tropants

    modules = [importlib.import_module(f"tropants.{m.name}") for m in pkgutil.iter_modules(tropants.__path__)]
    seen = set()

    def spy(key, fn):
        def wrapper(*a, **kw):
            seen.add(key)
            return fn(*a, **kw)

        return wrapper

    for mod, names in OPERATIONS.items():
        home = importlib.import_module(f"tropants.{mod}")
        for name in names:
            if mod == "periodic_av" and name == "multiply":
                cls = home.PeriodicRing
                monkeypatch.setattr(cls, "multiply", spy((mod, name), cls.multiply))
                continue
            fn = getattr(home, name)
            wrapped = spy((mod, name), fn)
            # rebind every import of the same function object
            for m in modules:
                for attr, val in list(vars(m).items()):
                    if val is fn:
                        monkeypatch.setattr(m, attr, wrapped)
    for argv, _ in FIXTURE_RUNS + [(["regress"], None)]:
        run(argv)
    capsys.readouterr()
    missing = [f"{m}.{f}" for m, names in OPERATIONS.items() for f in names if (m, f) not in seen]
    assert not missing
