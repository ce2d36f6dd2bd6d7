import csv
import io as _io
import json
import subprocess
import sys

import numpy as np
import pytest

from twofermion import io
from twofermion.cli import main


@pytest.fixture(autouse=True)
def pinned_clock(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "946684800")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_dumps_digits():
    text = io.dumps({"x": 0.1, "n": 3, "nan": float("nan"), "neg0": -0.0, "v": np.float64(1 / 3)})
    data = json.loads(text)
    assert '"x": 0.10000000000000001' in text
    assert data["nan"] is None and data["n"] == 3 and str(data["neg0"]) == "0.0" or data["neg0"] == 0
    assert data["v"] == 1 / 3


def test_solve_derived(capsys):
    code, out, _ = run(capsys, "solve", "--variant", "derived")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"manifest", "results"}
    man = doc["manifest"]
    assert man["command"] == "solve" and man["variants"] == ["derived"]
    assert man["timestamp"] == "2000-01-01T00:00:00Z"
    energies = {s["label"]: s["E"] for s in doc["results"]["states"] if s["method"] == "variational"}
    assert energies["positronium_1s"] == pytest.approx(1.99998669, abs=2e-7)
    assert energies["deep"] == pytest.approx(-7.94318e-3, rel=1e-3)
    assert doc["results"]["class_violations"] == []


def test_solve_both_has_four_variational_states(capsys):
    code, out, _ = run(capsys, "solve")
    doc = json.loads(out)
    var = [s for s in doc["results"]["states"] if s["method"] == "variational"]
    assert code == 0 and len(var) == 4
    assert {s["variant"] for s in var} == {"printed", "derived"}
    assert len(doc["results"]["branch_minima"]) == 4


def test_solve_rejects_zero_alpha(capsys):
    code, _, err = run(capsys, "solve", "--alpha-mode", "custom", "--alpha", "0.0")
    assert code == 1 and "alpha" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["solve", "--variant", "nonsense"])
    assert info.value.code == 1


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"alpha_mode": "codata", "electron_rest_energy_eV": 511000}))
    code, out, _ = run(capsys, "solve", "--variant", "derived", "--config", str(cfg))
    man = json.loads(out)["manifest"]
    assert code == 0 and man["config"]["alpha_mode"] == "codata"
    assert man["config"]["electron_rest_energy_eV"] == 511000


def _rows(text):
    return list(csv.DictReader(_io.StringIO(text)))


def test_scan_single_zero_row(capsys):
    code, out, err = run(capsys, "scan", "--steps", "1", "--beta-min", "0", "--beta-max", "0")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "beta,E1,E2,E3,real_count,variant"
    assert lines[1] == "0,2,0,-2,3,derived"
    assert json.loads(err)["command"] == "scan"


def test_scan_default_figures(tmp_path, capsys):
    path = tmp_path / "scan.csv"
    code, _, _ = run(capsys, "scan", "--beta-min", "1e-4", "--beta-max", "1.2", "--steps", "2000",
                     "--variant", "derived", "--output", str(path))
    assert code == 0
    rows = _rows(path.read_text())
    assert len(rows) == 2000
    beta = np.array([float(r["beta"]) for r in rows])
    e1 = np.array([float(r["E1"]) for r in rows])
    e2 = np.array([float(r["E2"]) for r in rows])
    i1, i2 = int(np.argmin(e1)), int(np.argmin(e2))
    assert 0 < i1 < 1999 and 0 < i2 < 1999
    assert e1[i1] == pytest.approx(1.99998669, abs=2e-7)
    assert e2[i2] == pytest.approx(-7.94e-3, rel=1e-2)
    assert beta[i2] == pytest.approx(0.7256, rel=5e-3)
    man = json.loads((tmp_path / "scan.csv.manifest.json").read_text())
    assert man["inputs"]["steps"] == 2000


def test_scan_is_byte_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        run(capsys, "scan", "--steps", "50", "--output", str(p))
    assert a.read_bytes() == b.read_bytes()


def test_scan_bad_grid(capsys):
    code, _, _ = run(capsys, "scan", "--steps", "0")
    assert code == 1
    code, _, _ = run(capsys, "scan", "--beta-min", "0.5", "--beta-max", "0.1")
    assert code == 1


def test_scan_crossing_exit_code(monkeypatch, capsys):
    from twofermion import roots
    monkeypatch.setattr(roots, "CROSSING_GAP", 10.0)
    code, _, err = run(capsys, "scan", "--steps", "10")
    assert code == 2 and "ambiguous" in err


def test_mass_1s(capsys):
    code, out, _ = run(capsys, "mass", "--state", "1s", "--variant", "derived")
    assert code == 0
    doc = json.loads(out)
    (entry,) = doc["results"]["masses"]
    assert entry["mass_derived"]["m_s_over_m"] == pytest.approx(1.99995, rel=1e-5)
    assert "mass_printed" in entry
    assert doc["results"]["discrepancy_report"]["matching_cubic_variants"] == ["derived"]


def test_mass_deep(capsys):
    code, out, _ = run(capsys, "mass", "--state", "deep")
    entries = json.loads(out)["results"]["masses"]
    derived = [e for e in entries if e["source"].startswith("derived")][0]
    assert code == 0
    assert derived["mass_derived"]["m_s_over_2m"] == pytest.approx(-0.0097293, rel=2e-2)


def test_mass_threshold(capsys):
    code, out, _ = run(capsys, "mass", "--E", "2", "--beta", "1e-6")
    (entry,) = json.loads(out)["results"]["masses"]
    assert code == 0
    assert entry["mass_derived"]["m_s_over_m"] == pytest.approx(2.0, rel=1e-5)


def test_mass_selector_required(capsys):
    code, _, _ = run(capsys, "mass")
    assert code == 1
    code, _, _ = run(capsys, "mass", "--E", "1.5")
    assert code == 1


def test_mass_singular_exit_code(capsys):
    code, out, _ = run(capsys, "mass", "--E", "1e-300", "--beta", "0.5")
    entry = json.loads(out)["results"]["masses"][0]
    # 8 alpha / E overflows the denominator to inf; still a per-entry result
    assert code in (0, 2) and "mass_derived" in entry


def test_kinematics_rest(capsys):
    code, out, _ = run(capsys, "kinematics", "--s", "1,0,0", "--g", "0,0,0")
    res = json.loads(out)["results"]
    assert code == 0 and res["f"] == [1, 0, 0] and res["residual"] == 0


def test_kinematics_bad_vector(capsys):
    with pytest.raises(SystemExit) as info:
        main(["kinematics", "--s", "1,0", "--g", "0,0,0"])
    assert info.value.code == 1


def test_check_passes(capsys):
    code, out, _ = run(capsys, "check")
    doc = json.loads(out)
    assert code == 0 and doc["results"]["all_passed"] is True
    assert len(doc["results"]["checks"]) == 8


def test_check_detects_perturbation(capsys):
    code, out, err = run(capsys, "check", "--perturb", "1e-6")
    assert code == 1
    assert json.loads(out)["results"]["all_passed"] is False
    assert "FAILED matrix_elements_vs_quadrature" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "twofermion", "kinematics", "--s", "0,0,0",
                           "--g", "0,0,0.5"], capture_output=True, text=True, check=True)
    f = json.loads(proc.stdout)["results"]["f"]
    assert f == pytest.approx([0, 0, -0.25], abs=1e-12)


def test_json_is_byte_deterministic(capsys):
    _, a, _ = run(capsys, "solve")
    _, b, _ = run(capsys, "solve")
    assert a == b
