import csv
import json
import math

import numpy as np
import pytest

from tomokit.cli import main


def run(args):
    return main([str(a) for a in args])


def test_tomogram_symplectic_output(tmp_path):
    out = tmp_path / "w.csv"
    code = run(["tomogram", "--scheme", "symplectic", "--state", "vacuum",
                "--truncation", "32", "--angles", "8", "--xrange=-6:6:41",
                "--out", out])
    assert code == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["X", "mu", "nu", "w"]
    assert len(rows) - 1 == 8 * 41
    meta = json.loads((tmp_path / "w.csv.meta.json").read_text())
    assert meta["command"] == "tomogram"
    assert meta["parameters"]["angles"] == 8
    assert meta["leakage"] == 0.0


def test_tomogram_symplectic_vacuum_values(tmp_path):
    out = tmp_path / "w.csv"
    run(["tomogram", "--scheme", "symplectic", "--state", "vacuum",
         "--truncation", "32", "--angles", "4", "--xrange=-6:6:121", "--out", out])
    with open(out, newline="") as fh:
        reader = csv.DictReader(fh)
        worst = max(
            abs(float(r["w"]) - math.exp(-float(r["X"]) ** 2) / math.sqrt(math.pi))
            for r in reader
        )
    assert worst <= 1e-8


def test_tomogram_photon_output(tmp_path):
    out = tmp_path / "omega.csv"
    code = run(["tomogram", "--scheme", "photon", "--state", "thermal:0.5",
                "--truncation", "32", "--nmax", "20", "--alpha-grid", "11",
                "--alpha-radius", "2.0", "--out", out])
    assert code == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["n", "re_alpha", "im_alpha", "omega"]
    assert len(rows) - 1 == 21 * 11 * 11


def test_tomogram_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["tomogram", "--scheme", "symplectic", "--state", "coherent:0.4+0.2j",
            "--truncation", "24", "--angles", "6", "--xrange=-5:5:31"]
    run(args + ["--out", a])
    run(args + ["--out", b])
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.csv.meta.json").read_bytes() == (tmp_path / "b.csv.meta.json").read_bytes()


def test_reconstruct_photon_round_trip(tmp_path):
    omega = tmp_path / "omega.csv"
    run(["tomogram", "--scheme", "photon", "--state", "vacuum",
         "--truncation", "20", "--nmax", "19", "--alpha-grid", "31",
         "--alpha-radius", "2.5", "--out", omega])
    rho_out = tmp_path / "rho.json"
    report_out = tmp_path / "report.json"
    code = run(["reconstruct", "--scheme", "photon", "--input", omega,
                "--truncation", "20", "--s", "0.1", "--reference", "vacuum",
                "--report", report_out, "--out", rho_out])
    assert code == 0
    report = json.loads(report_out.read_text())
    assert report["fidelity"] >= 0.99
    payload = json.loads(rho_out.read_text())
    assert payload["dim"] == 20


def test_reconstruct_photon_divergent_config_exits_3(tmp_path):
    omega = tmp_path / "omega.csv"
    run(["tomogram", "--scheme", "photon", "--state", "vacuum",
         "--truncation", "24", "--nmax", "23", "--alpha-grid", "41",
         "--alpha-radius", "3.0", "--out", omega])
    code = run(["reconstruct", "--scheme", "photon", "--input", omega,
                "--truncation", "24", "--s", "0.5", "--out", tmp_path / "rho.json"])
    assert code == 3


def test_reconstruct_symplectic(tmp_path):
    w = tmp_path / "w.csv"
    run(["tomogram", "--scheme", "symplectic", "--state", "vacuum",
         "--truncation", "16", "--angles", "90", "--xrange=-6:6:121", "--out", w])
    grid_out = tmp_path / "wig.grid"
    report_out = tmp_path / "report.json"
    code = run(["reconstruct", "--scheme", "symplectic", "--input", w,
                "--qrange=-6:6:81", "--prange=-6:6:81",
                "--reference", "vacuum", "--report", report_out, "--out", grid_out])
    assert code == 0
    report = json.loads(report_out.read_text())
    assert report["max_abs_error"] <= 1e-3
    from tomokit.fileio import load_grid

    grid = load_grid(grid_out)
    assert grid.values.shape == (81, 81)


def test_missing_column_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("X,mu,w\n0.0,1.0,0.5\n")
    code = run(["reconstruct", "--scheme", "symplectic", "--input", bad,
                "--out", tmp_path / "g.grid"])
    assert code == 2
    assert "nu" in capsys.readouterr().err


def test_bad_state_spec_exits_2(tmp_path):
    code = run(["tomogram", "--scheme", "symplectic", "--state", "plasma:1",
                "--out", tmp_path / "w.csv"])
    assert code == 2


def test_bad_range_exits_2(tmp_path):
    code = run(["tomogram", "--scheme", "symplectic", "--state", "vacuum",
                "--xrange=5:-5:10", "--out", tmp_path / "w.csv"])
    assert code == 2


def test_config_file_defaults_and_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"angles": 4, "truncation": 16, "xrange": "-4:4:11"}))
    out = tmp_path / "w.csv"
    code = run(["--config", cfg, "tomogram", "--scheme", "symplectic",
                "--state", "vacuum", "--angles", "3", "--out", out])
    assert code == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    # angles flag (3) wins over the config file (4); xrange comes from the file
    assert len(rows) - 1 == 3 * 11


def test_verify_kernels(tmp_path):
    report_path = tmp_path / "verify.json"
    code = run(["verify", "kernels", "--seed", "0", "--out", report_path])
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["passed"] is True
    assert report["suites"]["kernels"]["max_deviation"] <= 1e-12


def test_verify_unknown_suite():
    assert main(["verify", "nonsense"]) == 2
