import json
import subprocess
import sys
from pathlib import Path

import pytest

from jshift.gallery import GALLERY, render, run_all, run_item

GOLDEN = Path(__file__).parent / "golden" / "gallery_all.json"

REQUIRED = {
    "const-2",
    "const-1",
    "paper-counterexample",
    "bilateral-const-2",
    "bilateral-step",
    "periodic-4-half",
    "direct-sum-3I-2B",
}


def _cli_all(*extra):
    proc = subprocess.run(
        [sys.executable, "-m", "jshift", "gallery", "--all", *extra],
        capture_output=True,
        check=True,
    )
    return proc.stdout


def test_required_items_present():
    assert REQUIRED <= set(GALLERY)


@pytest.mark.parametrize("name", sorted(REQUIRED))
def test_item_checks_pass(name):
    report = run_item(name)
    assert report["ok"] and report["checks"]


def test_counterexample_bounds():
    demo = run_item("paper-counterexample")["demo"]
    rows = demo["inf_window_products"]
    assert [r["n"] for r in rows] == list(range(1, 21))


def test_bilateral_step_carries_flag():
    report = run_item("bilateral-step")
    assert report["j0"]["verdict"] == "Fails"
    assert report["j0"]["evidence"]["flag"].startswith("open question")


def test_matches_golden_file():
    assert render(run_all()).encode() == GOLDEN.read_bytes()


def test_byte_identical_across_runs_and_threads():
    first = _cli_all()
    assert first == _cli_all()
    assert first == _cli_all("--threads", "8")
    assert first == GOLDEN.read_bytes()
