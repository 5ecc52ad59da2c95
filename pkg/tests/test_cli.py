import csv
import io
import json
from fractions import Fraction

import pytest

from compdyn.cli import run


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_corollary32_certify(capsys):
    code, out, _ = _run(capsys, "certify-transitive", "--model", "shift:corollary32", "--epsilon", "0.3", "--p", "1", "--k-max", "200")
    report = json.loads(out)
    assert code == 0
    assert report["verdict"] == "CertifiedWithinHorizon"
    assert set(report) >= {"model", "config", "verdict", "certificate", "horizon", "fingerprint"}
    assert report["horizon"]["tail_mass"] == "inf"


def test_runaway_sweep_csv(capsys):
    code, out, _ = _run(capsys, "runaway-sweep", "--model", "odometer:4", "--epsilon", "0.1", "--k-max", "48", "--format", "csv")
    rows = {r["k"]: r for r in csv.DictReader(io.StringIO(out))}
    assert code == 2
    assert rows["24"]["max_mass"] == "1/2" and rows["24"]["verdict"] == "refuted"


def test_rn_derivative_all(capsys):
    code, out, _ = _run(capsys, "rn-derivative", "--model", "odometer:5", "--all", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 479
    values = [Fraction(r["rn_derivative"]) for r in rows]
    assert min(values) == Fraction(1, 7)


def test_disk_and_interval_reports(capsys):
    code, out, _ = _run(capsys, "disk-report", "--model", "disk:0.5,0")
    assert code == 0 and json.loads(out)["details"]["k0"] == 4
    code, out, _ = _run(capsys, "disk-report", "--model", "disk:0,1")
    assert code == 2
    code, out, _ = _run(capsys, "interval-report", "--model", "interval:halving", "--k-max", "10")
    assert code == 0 and json.loads(out)["details"]["analysis"]["verdict"] == "E1"
    code, out, _ = _run(capsys, "interval-report", "--model", "interval:halving-line", "--k-max", "10")
    assert code == 2


def test_hypercyclic_and_mixing(capsys):
    code, out, _ = _run(capsys, "hypercyclic", "--model", "shift:corollary32", "--eta", "1/2", "--k-max", "200")
    report = json.loads(out)
    assert code == 0 and report["phi"]["within_eta"] is True
    code, out, _ = _run(capsys, "certify-mixing", "--model", "odometer:4", "--k-max", "48", "--k0-max", "24")
    assert code == 2


def test_analyze_is_deterministic(capsys, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert run(["analyze", "--model", "partition-z:10", "--epsilon", "0.6", "--k-max", "20", "--output", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_input_file_matches_model(capsys, tmp_path):
    code, out, _ = _run(capsys, "export", "--model", "odometer:3")
    path = tmp_path / "od3.json"
    path.write_text(out)
    _, via_file, _ = _run(capsys, "runaway-sweep", "--input", str(path), "--k-max", "24")
    _, via_model, _ = _run(capsys, "runaway-sweep", "--model", "odometer:3", "--k-max", "24")
    a, b = json.loads(via_file), json.loads(via_model)
    assert a["fingerprint"] == b["fingerprint"] and a["sweep"] == b["sweep"]


@pytest.mark.parametrize(
    "argv, field",
    [
        (["analyze", "--model", "nope:1"], "--model"),
        (["analyze", "--model", "odometer:3", "--epsilon", "-1"], "--epsilon"),
        (["analyze", "--model", "odometer:3", "--p", "0.5"], "--p"),
        (["certify-mixing", "--model", "odometer:3", "--k-max", "4", "--k0-max", "9"], "--k0-max"),
        (["analyze", "--input", "/nonexistent.json"], "--input"),
        (["rn-derivative", "--model", "shift:unilateral"], "--model"),
    ],
)
def test_errors_exit_one(capsys, argv, field):
    code, _, err = _run(capsys, *argv)
    assert code == 1 and field in err


def test_malformed_json_names_field(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"space": {"weights": ["1/2", "1/2"]}, "map": {"forward": [1, "X"]}}))
    code, _, err = _run(capsys, "analyze", "--input", str(path))
    assert code == 1 and "forward" in err
