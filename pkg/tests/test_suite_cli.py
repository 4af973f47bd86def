import csv
import json

import pytest

from sendov import cli, suite
from sendov.instance import CheckResult

FAST = dict(count=6, n=9, seed=5, quad_nodes=4096)


def body(path):
    with open(path) as fh:
        doc = json.load(fh)
    doc.pop("meta", None)
    return json.dumps(doc, sort_keys=True)


@pytest.fixture(scope="module")
def report():
    return suite.run_check_suite(suite.RunConfig(**FAST))


# --- suite


def test_aggregates_add_up(report):
    assert report.aggregates
    for agg in report.aggregates:
        assert agg.runs == agg.passes + agg.failures + agg.vacuous
        assert agg.runs >= FAST["count"]
    assert report.exit_code == 0 and not report.findings


def test_every_section_contributes(report):
    ids = {a.check_id for a in report.aggregates}
    for cid in ("gauss_lucas", "theorem_1", "quartic_identity", "bisector_identity",
                "bruijn_springer", "lemma_4_1", "lemma_4_2", "theorem_3"):
        assert cid in ids


def test_tiny_tolerance_fails(report):
    cfg = suite.RunConfig(**dict(FAST, tol=1e-20))
    strict = suite.run_check_suite(cfg)
    assert strict.failures > 0 and strict.exit_code == 2


def test_sections_filter():
    rep = suite.run_check_suite(suite.RunConfig(**dict(FAST, sections=("geometry",))))
    ids = {a.check_id for a in rep.aggregates}
    assert "gauss_lucas" not in ids and "theorem_1" in ids


@pytest.mark.parametrize("kw", [dict(count=0), dict(n=13), dict(sections=("nope",)), dict(workers=0)])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        suite.RunConfig(**kw)


def test_injected_instance(rou):
    rep = suite.run_check_suite(suite.RunConfig(**FAST), [rou])
    assert rep.config["count"] == 1 and len(rep.config["instances"]) == 1
    assert rep.exit_code == 0


def test_conjecture_critical_finding_sets_exit_3(monkeypatch):
    bad = CheckResult("planted", True, False, 0.5, "planted failure", critical=True)
    monkeypatch.setattr(suite.checks, "distance_bounds_check", lambda inst, tol: bad)
    rep = suite.run_check_suite(suite.RunConfig(**dict(FAST, count=2, sections=("metrics",))))
    assert rep.exit_code == 3
    assert [f["instance"] for f in rep.findings] == [0, 1]
    assert rep.findings[0]["check_id"] == "planted" and "zeros" in rep.findings[0]


def test_emit_and_load_round_trip(report, tmp_path):
    path = tmp_path / "r.json"
    jpath, cpath = suite.emit_report(report, str(path), {"note": "x"})
    loaded = suite.load_report(jpath)
    assert loaded.to_json() == report.to_json()
    with open(cpath) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == len(report.rows)
    per = {}
    for r in rows:
        per[r["check_id"]] = per.get(r["check_id"], 0) + 1
    assert per["gauss_lucas"] == FAST["count"]


def test_empty_report_skeleton():
    rep = suite.RunReport(config={"seed": 1})
    assert rep.to_json() == {"config": {"seed": 1}, "checks": [], "conjecture_critical": [],
                             "certificates": []}
    assert rep.exit_code == 0


def test_unwritable_report_path(report):
    with pytest.raises(OSError, match="cannot write"):
        suite.emit_report(report, "/nonexistent/dir/r.json")


def test_report_independent_of_workers(report):
    par = suite.run_check_suite(suite.RunConfig(**dict(FAST, workers=2)))
    assert suite.dumps_report(par) == suite.dumps_report(report)


# --- command line


def test_cli_check(tmp_path):
    out = tmp_path / "c.json"
    args = ["check", "--count", "4", "--seed", "2", "--nodes", "4096", "--out", str(out)]
    assert cli.main(args) == 0
    first = body(out)
    assert cli.main(args) == 0
    assert body(out) == first
    assert cli.main(args + ["--workers", "2"]) == 0
    assert body(out) == first
    assert (tmp_path / "c.csv").exists()


def test_cli_check_failure_exit(tmp_path):
    out = tmp_path / "c.json"
    assert cli.main(["check", "--count", "2", "--tol", "1e-20", "--sections", "metrics",
                     "--out", str(out)]) == 2


def test_cli_check_instance_file(tmp_path, rou):
    inst = tmp_path / "i.json"
    inst.write_text(json.dumps(rou.to_json()))
    out = tmp_path / "c.json"
    assert cli.main(["check", "--instance", str(inst), "--nodes", "4096", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["config"]["count"] == 1


@pytest.mark.parametrize("argv", [
    ["check", "--count", "x"],
    ["bogus"],
    ["certify", "--claims", "C99"],
    ["certify", "--max-depth", "0"],
    ["check", "--sections", "nope"],
    ["check", "--count", "1", "--out", "/nonexistent/dir/r.json"],
    ["measure", "--poly", "/nonexistent.json"],
    ["measure", "--poly", "x.json", "--rho", "-1"],
    ["search", "--restarts", "0"],
])
def test_cli_usage_errors(argv, capsys):
    assert cli.main(argv) == 1
    assert capsys.readouterr().err


def test_cli_certify(tmp_path):
    out = tmp_path / "k.json"
    args = ["certify", "--claims", "C1,C7", "--out", str(out)]
    assert cli.main(args) == 0
    first = body(out)
    assert cli.main(args + ["--workers", "2"]) == 0
    assert body(out) == first
    doc = json.loads(out.read_text())
    assert doc["all_certified"] and [c["claim"] for c in doc["certificates"]] == ["C1", "C7"]


def test_cli_certify_starved_depth(tmp_path):
    assert cli.main(["certify", "--claims", "C5", "--max-depth", "2",
                     "--out", str(tmp_path / "k.json")]) == 4


def test_cli_search(tmp_path):
    out = tmp_path / "s.json"
    args = ["search", "--n", "5", "--restarts", "3", "--seed", "1", "--out", str(out)]
    assert cli.main(args) == 0
    first = body(out)
    assert cli.main(args + ["--workers", "2"]) == 0
    assert body(out) == first
    assert json.loads(first)["result"]["best_I"] <= 1 + 1e-6


def test_cli_search_flag_exit(tmp_path, monkeypatch):
    monkeypatch.setattr("sendov.search.FLAG_MARGIN", -0.5)
    assert cli.main(["search", "--n", "4", "--restarts", "1", "--out", str(tmp_path / "s.json")]) == 3


def test_cli_measure_polynomial(tmp_path, capsys):
    poly = tmp_path / "p.json"
    poly.write_text(json.dumps({"coeffs": [[-2, 0], [1, 0]]}))
    assert cli.main(["measure", "--poly", str(poly)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["closed_form"] == pytest.approx(2.0) and doc["abs_diff"] <= 1e-10


def test_cli_measure_instance(tmp_path, rou):
    inst = tmp_path / "i.json"
    inst.write_text(json.dumps(rou.to_json()))
    out = tmp_path / "m.json"
    args = ["measure", "--poly", str(inst), "--rho", "1", "--m", "1", "--out", str(out)]
    assert cli.main(args) == 0
    doc = json.loads(out.read_text())
    assert doc["lemma_4_1_formula"] == pytest.approx(9.0)
    assert doc["theorem_3"]["lhs"] == pytest.approx(doc["theorem_3"]["rhs"])
    first = out.read_text()
    assert cli.main(args) == 0 and out.read_text() == first


def test_cli_measure_rejects_other_json(tmp_path):
    p = tmp_path / "x.json"
    p.write_text(json.dumps({"hello": 1}))
    assert cli.main(["measure", "--poly", str(p)]) == 1

