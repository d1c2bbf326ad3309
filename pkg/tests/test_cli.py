import json
import subprocess
import sys
from pathlib import Path

import pytest

from kodaira.catalog import CATALOG
from kodaira.cli import main

MODELS = Path(__file__).resolve().parent.parent / "models"
FIBER_KEYS = {"place", "placeDegree", "type", "vDelta", "euler", "swan", "components"}


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_analyze_json_schema(capsys):
    status, out, _ = run(capsys, "analyze", str(MODELS / "weights-II-IIstar-p5.model"))
    data = json.loads(out)
    assert status == 0
    assert all(set(f) == FIBER_KEYS for f in data["fibers"])
    assert [f["type"] for f in data["fibers"]] == ["II", "IIstar"]
    assert (data["c2"], data["chi"]) == (12, 1)


def test_analyze_text_mode(capsys):
    status, out, _ = run(capsys, "analyze", "--text", str(MODELS / "mu3-II-I9-k1.model"))
    assert status == 0 and "I9" in out and "c2 = 12" in out


def test_igusa(capsys):
    status, out, _ = run(capsys, "igusa", "--p", "13", "--n", "1")
    assert status == 0 and json.loads(out) == {"p": 13, "n": 1, "ssCount": 1, "h_p": 1,
                                               "genus": 1, "bound": 1}


def test_lattice(capsys):
    status, out, _ = run(capsys, "lattice", "--t1", "III", "--t2", "IIstar", "--p", "5")
    assert status == 0 and json.loads(out)["status"] == "excluded"


@pytest.mark.parametrize("entry_id, expected", [("weights-II-IIstar-p5", 0),
                                                ("mu3-II-IIIstar", 1)])
def test_action_status_follows_the_verdict(capsys, entry_id, expected):
    status, out, _ = run(capsys, "action", str(MODELS / f"{entry_id}.model"),
                         "--coaction", str(MODELS / f"{entry_id}.coaction"))
    assert status == expected
    assert (json.loads(out)["coaction"]["verify"]["status"] == "verified") == (expected == 0)


def test_missing_file_reports_io_error(capsys):
    status, _, err = run(capsys, "analyze", "/nonexistent.model")
    assert status == 2 and json.loads(err)["error"] == "IO_ERROR"


def test_parse_error_is_structured(tmp_path, capsys):
    bad = tmp_path / "bad.model"
    bad.write_text("p=4\na6=t\n")
    status, _, err = run(capsys, "analyze", str(bad))
    data = json.loads(err)
    assert status == 2 and data["error"] == "NON_PRIME_CHARACTERISTIC"
    assert data["line"] == 1


def test_catalog_reports_known_failures(capsys):
    status, out, _ = run(capsys, "catalog")
    data = json.loads(out)
    assert status == 1
    assert (data["passed"], data["failed"], data["pending"]) == (25, 2, 1)
    failed = {e["id"] for e in data["entries"] if e["status"] == "fail"}
    assert failed == {"mu3-II-IIIstar", "mu2-III-IVstar"}


def test_catalog_filter(capsys):
    status, out, _ = run(capsys, "catalog", "--filter", "weights-*")
    data = json.loads(out)
    assert status == 0 and data["passed"] == len(data["entries"]) == 9


def test_catalog_is_deterministic(capsys, monkeypatch):
    first = run(capsys, "catalog", "--filter", "mu2-*")
    monkeypatch.setenv("KODAIRA_SEED", "17")
    second = run(capsys, "catalog", "--filter", "mu2-*")
    assert first == second


@pytest.mark.parametrize("entry", CATALOG, ids=lambda e: e.id)
def test_model_files_match_catalog(entry):
    assert (MODELS / f"{entry.id}.model").read_text() == entry.model
    coaction = MODELS / f"{entry.id}.coaction"
    assert coaction.exists() == bool(entry.coaction)
    if entry.coaction:
        assert coaction.read_text() == entry.coaction


def test_module_entry_point():
    done = subprocess.run([sys.executable, "-m", "kodaira", "igusa", "--p", "2", "--n", "1"],
                          capture_output=True, text=True, check=True)
    assert json.loads(done.stdout)["genus"] is None
