import csv
import json
import subprocess
import sys

import pytest

from jshift.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_const2(capsys):
    code, out, _ = run(capsys, "classify", "--spec", "gallery:const-2")
    doc = json.loads(out)
    assert code == 0
    assert doc["verdict"] == "CertifiedJClass" and doc["is_jmix"] is True
    assert list(doc)[:2] == ["verdict", "is_jmix"] and list(doc)[-1] == "tool_version"


def test_classify_counterexample(capsys):
    code, out, _ = run(capsys, "classify", "--spec", "gallery:paper-counterexample")
    doc = json.loads(out)
    assert code == 0
    assert doc["verdict"] == "CertifiedNotJClass"
    assert doc["salas"]["verdict"] == "Hypercyclic"


def test_classify_spec_file_and_undecided(tmp_path, capsys):
    spec = {
        "ambient": "unilateral",
        "form": "table",
        "parameters": {
            "entries": ["3"] * 10,
            "start": 1,
            "tail": {"form": "block_alternating", "parameters": {"a": "1/2", "b": "2"}},
        },
    }
    path = tmp_path / "w.json"
    path.write_text(json.dumps(spec))
    code, out, _ = run(capsys, "classify", "--spec", str(path), "--horizon-n", "2", "--horizon-j", "4")
    assert code == 2 and json.loads(out)["verdict"] == "Undecided"


def test_classify_input_errors(tmp_path, capsys):
    assert run(capsys, "classify", "--spec", str(tmp_path / "missing.json"))[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"form": "constant", "parameters": {"c": 0.5}}')
    assert run(capsys, "classify", "--spec", str(bad))[0] == 1
    bad.write_text("not json")
    assert run(capsys, "classify", "--spec", str(bad))[0] == 1
    assert run(capsys, "classify")[0] == 1


def test_witness_single(capsys):
    code, out, _ = run(capsys, "witness", "--spec", "gallery:const-2", "--y", "vec:e1", "--n", "3")
    doc = json.loads(out)
    assert code == 0
    assert doc["verification"]["shift_identity_ok"] is True
    assert doc["distance_sq"]["value"] == "1/64"
    coords = {k: re for k, re, _ in doc["window"]["coordinates"]}
    assert coords[4] == "1/8"


def test_witness_range(capsys):
    code, out, _ = run(capsys, "witness", "--spec", "gallery:const-2", "--y", "vec:e1", "--range", "1..10")
    doc = json.loads(out)
    assert code == 0
    assert [r["error_sq"]["value"] for r in doc["rows"]] == [f"1/{4**n}" for n in range(1, 11)]


def test_witness_below_n0(capsys):
    code, _, err = run(capsys, "witness", "--spec", "gallery:const-2", "--x", "vec:e3", "--y", "vec:e1", "--n", "2")
    assert code == 1 and "n0" in err


def test_probe_csv(tmp_path, capsys):
    out_path = tmp_path / "p.csv"
    code, _, _ = run(
        capsys, "probe", "--spec", "gallery:const-2", "--y", "vec:ones", "--delta", "1/4",
        "--window", "1..4", "--n-range", "1..6", "--csv", str(out_path),
    )
    assert code == 0
    rows = list(csv.DictReader(out_path.read_text().splitlines()))
    assert [r["min_error"] for r in rows] == ["1/2", "0/1", "0/1", "0/1", "0/1", "0/1"]


def test_probe_bilateral_step_preimage(capsys):
    code, out, _ = run(
        capsys, "probe", "--spec", "gallery:bilateral-step", "--y", "vec:ones", "--mode", "min-preimage",
        "--tol", "1/100", "--window=-8..8", "--n-range", "1..9",
    )
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert {r["min_error"] for r in rows} == {"99/100"}


@pytest.mark.parametrize("window", ["1-4", "a..b", "4..1", ""])
def test_probe_bad_window(capsys, window):
    code, _, _ = run(capsys, "probe", "--spec", "gallery:const-2", "--y", "vec:ones", "--window", window, "--n-range", "1..2")
    assert code == 1


def test_gallery_usage_errors(capsys):
    assert run(capsys, "gallery")[0] == 1
    assert run(capsys, "gallery", "nope")[0] == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "jshift", "classify", "--spec", "gallery:const-1"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "CertifiedNotJClass"
