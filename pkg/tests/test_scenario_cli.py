import csv
import io
import json
import subprocess
import sys

import pytest

from genk import checks, cli
from genk import scenario as sc_mod
from genk.errors import DegreeError, InstantonGateError, ScenarioError
from genk.report import Report

H123 = {"dim": 4, "terms": [{"indices": [1, 2, 3], "re": 1.0, "im": 0.0}]}


def write(tmp_path, data, name="s.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def test_shipped_scenarios_load():
    names = sc_mod.shipped_scenarios()
    assert {"flat_kahler_u1", "u1_twisted", "su2_commuting", "reduction_demo"} <= set(names)
    for n in names:
        if n == "su2_nonflat":
            with pytest.raises(InstantonGateError):
                sc_mod.load(n)
        else:
            assert sc_mod.load(n).name == n


@pytest.mark.parametrize(
    "data, err",
    [
        ({"tiers": ["fiber"], "bogus": 1}, ScenarioError),
        ({"tiers": ["nope"]}, ScenarioError),
        ({"tiers": []}, ScenarioError),
        ({"tiers": ["gk-lab"]}, ScenarioError),
        ({"tiers": ["gk-lab"], "gk": {"recipe": "flat_kahler"}, "H": H123}, ScenarioError),
        ({"tiers": ["reduction"]}, ScenarioError),
        ({"tiers": ["fiber"], "metric": [[1, 0], [0, 1]]}, ScenarioError),
        ({"tiers": ["fiber"], "orientation": 2}, ScenarioError),
        ({"tiers": ["fiber"], "gk": {"recipe": "hyperkahler"}}, ScenarioError),
        ({"tiers": ["metric-lab"], "H": {"dim": 4, "terms": [{"indices": [1, 2], "re": 1.0}]}}, DegreeError),
    ],
)
def test_rejects_invalid(data, err):
    with pytest.raises(err):
        sc_mod.from_dict(data)


def test_loads_rejects_bad_json():
    with pytest.raises(ScenarioError):
        sc_mod.loads("{not json")
    with pytest.raises(ScenarioError):
        sc_mod.load("/nonexistent/scenario.json")


def test_overrides_and_rng():
    s = sc_mod.load("u1_twisted")
    t = s.with_overrides(radius=1, tol=1e-3, seed=5)
    assert (t.radius, t.seed, t.threshold("anything", 1.0)) == (1, 5, 1e-3)
    assert s.threshold("star_law", 0.5) == 0.5
    assert s.rng("a").random() == s.rng("a").random() != s.rng("b").random()


def test_catalog():
    assert len(checks.CATALOG) == 18
    tiers = {c.tier for c in checks.CATALOG.values()}
    assert tiers == set(sc_mod.TIERS)
    assert all(c.anchor and c.threshold >= 0 for c in checks.CATALOG.values())


def test_list_checks(capsys):
    assert cli.main(["list-checks"]) == 0
    out = capsys.readouterr().out
    assert "18 checks" in out
    assert "In a generalized Hermitian manifold" in out
    assert "all the Laplacians preserve the" in out


@pytest.mark.parametrize(
    "name, n_checks",
    [("u1_twisted", 10), ("reduction_demo", 4), ("su2_nonflat_ibp", 5)],
)
def test_run_passes(tmp_path, capsys, name, n_checks):
    out = tmp_path / "r.json"
    code = cli.main(["run", "--scenario", name, "--radius", "1", "--output", str(out)])
    assert code == 0
    rep = Report.loads(out.read_text())
    assert len(rep.checks) == n_checks
    assert "checks passed" in capsys.readouterr().out


def test_flat_kahler_runs_fourteen_checks(tmp_path):
    out = tmp_path / "r.json"
    code = cli.main(["run", "--scenario", "flat_kahler_u1", "--radius", "1", "--output", str(out)])
    rep = Report.loads(out.read_text())
    assert len(rep.checks) == 14 and not any(c.skipped for c in rep.checks)
    failed = [c.name for c in rep.checks if not c.passed]
    # the odd-slot Laplacian identity with factor 2 does not hold
    assert failed == ["laplacians"]
    assert code == 1


def test_moment_gate_exit(capsys):
    assert cli.main(["run", "--scenario", "su2_nonflat"]) == 2
    assert "moment map nonzero" in capsys.readouterr().err


def test_invalid_input_exits_two(tmp_path, capsys):
    bad = write(tmp_path, {"tiers": ["metric-lab"], "H": {"dim": 4, "terms": [{"indices": [1, 2], "re": 1.0}]}})
    assert cli.main(["run", "--scenario", bad]) == 2
    assert cli.main(["run", "--scenario", str(tmp_path / "missing.json")]) == 2
    assert cli.main(["run"]) == 2
    assert cli.main(["export", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()


def test_tight_tolerance_fails_with_one(tmp_path):
    code = cli.main(["run", "--scenario", "u1_twisted", "--radius", "1", "--tol", "-1", "--output", str(tmp_path / "r.json")])
    assert code == 1


def test_report_determinism_and_roundtrip(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert cli.main(["run", "--scenario", "reduction_demo", "--seed", "3", "--output", str(p)]) == 0
    assert a.read_text() == b.read_text()
    data = json.loads(a.read_text())
    assert data["environment"]["seed"] == 3 and data["environment"]["arithmetic"] == "float"
    rep = Report.loads(a.read_text())
    assert rep.dumps() == a.read_text()


def test_csv_export(tmp_path, capsys):
    src = tmp_path / "r.json"
    cli.main(["run", "--scenario", "u1_twisted", "--radius", "1", "--output", str(src)])
    capsys.readouterr()
    assert cli.main(["export", str(src), "--format", "csv"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    rep = Report.loads(src.read_text())
    expected = sum(max(len(c.per_mode), 1) for c in rep.checks)
    assert len(rows) == expected
    assert {r["check"] for r in rows} == {c.name for c in rep.checks}
    assert any(r["mode"] == "(0, 0, 0, 0)" for r in rows)


def test_exact_mode(tmp_path):
    out = tmp_path / "r.json"
    assert cli.main(["run", "--scenario", "reduction_demo", "--exact", "--output", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["environment"]["arithmetic"] == "rational"
    b = next(c for c in rep["checks"] if c["name"] == "b_theta")
    assert b["residual"] == 0 and b["threshold"] == 0


def test_console_script_entry(tmp_path):
    r = subprocess.run(
        [sys.executable, "-m", "genk.cli", "run", "--scenario", "su2_nonflat"],
        capture_output=True, text=True, cwd=tmp_path,
    )
    assert r.returncode == 2 and "moment map nonzero" in r.stderr
