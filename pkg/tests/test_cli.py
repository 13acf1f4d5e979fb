import csv
import io as stdio
import json
from pathlib import Path

import pytest

from modham import cli
from modham import verify as vf

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "fixtures"
BUMP3D = str(FIXTURE_DIR / "bump3d.json")
FLOW3D = str(FIXTURE_DIR / "flow3d.json")
BUMP2D = str(FIXTURE_DIR / "bump2d.json")


def run(capsys, *args):
    rc = cli.main(list(args))
    out, err = capsys.readouterr()
    return rc, out, err


def test_entropy_json(capsys):
    rc, out, _ = run(capsys, "entropy", "--wave", BUMP3D, "--R", "1")
    assert rc == 0
    doc = json.loads(out)
    assert doc["schemaVersion"] == 1
    rep = doc["report"]
    assert rep["total"] == pytest.approx(rep["termStress"] + rep["termNorm"] + rep["termYukawa"])
    assert rep["bekensteinOK"] in (True, False)


def test_entropy_output_is_byte_identical_across_runs(capsys):
    _, a, _ = run(capsys, "entropy", "--wave", BUMP3D, "--R", "2")
    _, b, _ = run(capsys, "entropy", "--wave", BUMP3D, "--R", "2")
    assert a == b


def test_scan_csv_schema(capsys):
    rc, out, _ = run(capsys, "scan", "--wave", BUMP3D, "--R", "1,2,4,8")
    assert rc == 0
    rows = list(csv.reader(stdio.StringIO(out)))
    assert rows[0] == list(cli.ENTROPY_COLUMNS)
    assert [float(r[0]) for r in rows[1:]] == [1.0, 2.0, 4.0, 8.0]
    ratios = [float(r[rows[0].index("ratioLargeR")]) for r in rows[1:]]
    assert all(a < b for a, b in zip(ratios, ratios[1:]))
    assert {r[-1] for r in rows[1:]} <= {"true", "false"}


def test_scan_json_and_parallel_runs_agree(capsys, monkeypatch):
    _, serial, _ = run(capsys, "scan", "--wave", BUMP3D, "--R", "0.1,0.2,4", "--format", "json")
    monkeypatch.setenv("MODHAM_JOBS", "3")
    _, threaded, _ = run(capsys, "scan", "--wave", BUMP3D, "--R", "0.1,0.2,4", "--format", "json")
    assert serial == threaded
    doc = json.loads(serial)
    assert len(doc["reports"]) == 3 and "smallRLeading" in doc


def test_scan_on_a_cartesian_grid_with_centre(capsys):
    rc, out, _ = run(capsys, "scan", "--wave", BUMP2D, "--R", "0.5,1", "--center", "0.2,-0.1")
    assert rc == 0 and len(out.splitlines()) == 3


def test_hamiltonian_with_two_waves(capsys):
    rc, out, _ = run(capsys, "hamiltonian", "--wave", BUMP3D, "--wave2", BUMP3D, "--R", "1")
    assert rc == 0
    doc = json.loads(out)
    el = doc["matrixElementsLogDelta"]
    assert set(el) == {"phi,phi", "phi,psi", "psi,phi", "psi,psi"}
    assert el["phi,psi"] == pytest.approx(el["phi,phi"])
    assert doc["betaGeneratorForm"] == pytest.approx(doc["quadraticForm"]["total"], rel=1e-7)


def test_hamiltonian_csv(capsys):
    rc, out, _ = run(capsys, "hamiltonian", "--wave", BUMP3D, "--format", "csv")
    assert rc == 0
    rows = list(csv.reader(stdio.StringIO(out)))
    assert rows[0] == ["quantity", "value"]
    assert [r[0] for r in rows[1:5]] == ["stress", "norm", "yukawa", "total"]


def test_flow_json_and_csv(capsys):
    rc, out, _ = run(capsys, "flow", "--wave", FLOW3D, "--s", "0.3")
    assert rc == 0
    doc = json.loads(out)
    assert doc["leakage"] <= 1e-6 and len(doc["f"]) == len(doc["r"])
    rc, out, _ = run(capsys, "flow", "--wave", FLOW3D, "--s", "0.3", "--format", "csv")
    assert rc == 0 and out.startswith("r,f,g\n")


def test_flow_rejects_massive_wave(capsys):
    rc, _, err = run(capsys, "flow", "--wave", BUMP3D, "--s", "0.3")
    assert rc == 1 and "DomainError" in err


def test_overrides_and_out_file(capsys, tmp_path):
    target = tmp_path / "sub" / "e.json"
    rc, out, _ = run(capsys, "entropy", "--wave", BUMP3D, "--m", "0", "--N", "1024", "--L", "10",
                     "--out", str(target))
    assert rc == 0 and out == ""
    doc = json.loads(target.read_text())
    assert doc["m"] == 0.0 and doc["grid"]["N"] == 1024 and doc["grid"]["L"] == 10.0
    assert doc["report"]["termYukawa"] == 0.0


@pytest.mark.parametrize(
    "args",
    [
        ["entropy", "--wave", BUMP3D, "--R", "50"],
        ["entropy", "--wave", BUMP3D, "--R", "-1"],
        ["entropy", "--wave", BUMP3D, "--tol", "nonsense=1"],
        ["entropy", "--wave", BUMP3D, "--tol", "leakage"],
        ["entropy", "--wave", BUMP3D, "--jobs", "0"],
        ["scan", "--wave", BUMP3D, "--R", "1,x"],
        ["entropy", "--wave", "/nonexistent.json"],
        ["oracle", "--n-basis", "200"],
        ["oracle", "--masses", "-1"],
        ["frobnicate"],
    ],
)
def test_configuration_errors_exit_2(capsys, args):
    rc, _, err = run(capsys, *args)
    assert rc == 2
    assert err


def test_bad_wave_spec_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"mode": "radial3d", "N": 64, "L": 4, "components": [{"kind": "cone", "radius": 1}]}))
    rc, _, err = run(capsys, "entropy", "--wave", str(bad))
    assert rc == 2 and "cone" in err


def test_tolerance_override_is_applied(capsys, tmp_path):
    wide = tmp_path / "wide.json"
    wide.write_text(json.dumps({"mode": "radial3d", "L": 4, "N": 512, "m": 0,
                                "components": [{"kind": "bump", "radius": 1.1}]}))
    rc, _, err = run(capsys, "flow", "--wave", str(wide), "--s", "0.3")
    assert rc == 1 and "SupportViolation" in err
    rc, _, _ = run(capsys, "flow", "--wave", str(wide), "--s", "0.3", "--tol", "support=1")
    assert rc == 0


def test_oracle_small_run(capsys):
    rc, out, _ = run(capsys, "oracle", "--n-basis", "3,6", "--masses", "0", "--fixtures", "2",
                     "--rmax", "20", "--grid-size", "4096", "--format", "csv")
    assert rc == 0
    rows = list(csv.reader(stdio.StringIO(out)))
    assert rows[0][:3] == ["m", "nBasis", "medianDeviation"] and len(rows) == 3


def test_verify_passes_with_default_seed(capsys):
    rc, out, _ = run(capsys, "verify", "--seed", "7")
    assert rc == 0
    assert "FAIL" not in out


def test_verify_json_is_deterministic(capsys):
    _, a, _ = run(capsys, "verify", "--module", "conformal", "--format", "json")
    _, b, _ = run(capsys, "verify", "--module", "conformal", "--format", "json")
    assert a == b
    doc = json.loads(a)
    assert doc["seed"] == 7 and all(c["module"] == "conformal" for c in doc["checks"])


def test_verify_failure_exits_1(capsys, monkeypatch):
    bad = [vf.CheckResult("field", "always wrong", 1.0, 1e-9, 0.0)]
    monkeypatch.setattr(vf, "run_battery", lambda seed, select: bad)
    rc, out, _ = run(capsys, "verify", "--format", "csv")
    assert rc == 1 and "false" in out
