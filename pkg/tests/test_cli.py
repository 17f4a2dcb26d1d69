"""Command line: outputs, exit codes and error payloads."""
import json
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from scipy.integrate import trapezoid

from mopcd.cli import main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def cfg(name):
    return str(CONFIGS / name)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_exact(capsys):
    code, out, _ = run(capsys, "compute", "--config", cfg("atoms3.json"), "--index", "1,1")
    assert code == 0
    doc = json.loads(out)
    assert doc["P"] == ["4/9", "-19/9", "1"]
    assert doc["weights"]["scalar_mode"] == "exact"


def test_compute_to_file(capsys, tmp_path):
    out = tmp_path / "sol.json"
    code, _, _ = run(capsys, "compute", "--config", cfg("hermite2.json"), "--index", "2,2",
                     "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    assert np.allclose([float(c) for c in doc["P"]], [6, 0, -8, 0, 1], atol=1e-11)


def test_compute_zero_index_needs_flag(capsys):
    code, _, err = run(capsys, "compute", "--config", cfg("hermite2.json"), "--index", "0,0")
    assert code == 2 and json.loads(err)["error"] == "UsageError"
    code, _, _ = run(capsys, "compute", "--config", cfg("hermite2.json"), "--index", "0,0",
                     "--no-type1")
    assert code == 0


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", "--config", cfg("hermite2.json"), "--index", "2,2",
                       "--path", "roundrobin")
    doc = json.loads(out)
    assert code == 0 and doc["pass"] and doc["path"] == [1, 2, 1, 2]


def test_verify_zero_normalization(capsys):
    code, _, err = run(capsys, "verify", "--config", cfg("atoms3.json"), "--index", "2,1")
    assert code == 2
    assert json.loads(err)["error"] == "ZeroNormalization"


def test_verify_zero_tolerance_fails(capsys):
    code, out, err = run(capsys, "verify", "--config", cfg("hermite2.json"), "--index", "1,1",
                         "--tol", "0", "--no-rh")
    assert code == 1 and not json.loads(out)["pass"] and "FAIL" in err


def test_verify_path_file(capsys, tmp_path):
    p = tmp_path / "path.json"
    p.write_text("[2, 1, 2, 1]")
    code, out, _ = run(capsys, "verify", "--config", cfg("hermite2.json"), "--index", "2,2",
                       "--path", str(p), "--no-rh")
    assert code == 0 and json.loads(out)["path"] == [2, 1, 2, 1]
    p.write_text("[1, 1]")
    code, _, err = run(capsys, "verify", "--config", cfg("hermite2.json"), "--index", "2,2",
                       "--path", str(p))
    assert code == 2 and json.loads(err)["error"] == "UsageError"


def test_kernel_grid_rows(capsys):
    code, out, _ = run(capsys, "kernel", "--config", cfg("hermite2.json"), "--index", "2,2",
                       "--grid=-4:4:20,-4:4:20")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "x,y,K" and len(lines) == 401


def test_kernel_diagonal_integrates_to_n(capsys):
    code, out, _ = run(capsys, "kernel", "--config", cfg("hermite2.json"), "--index", "2,1",
                       "--grid=-9:9:1801")
    rows = np.array([[float(v) for v in line.split(",")] for line in out.splitlines()[1:]])
    assert code == 0
    assert trapezoid(rows[:, 1], rows[:, 0]) == pytest.approx(3, abs=1e-4)


def test_kernel_exact_grid(capsys):
    code, out, _ = run(capsys, "kernel", "--config", cfg("atoms6.json"), "--index", "1,1",
                       "--grid=0:5:6")
    assert code == 0
    assert out.splitlines()[1].split(",")[0] == "0"


def test_kernel_degenerate_index(capsys):
    code, _, err = run(capsys, "kernel", "--config", cfg("hermite2.json"), "--index", "2,0",
                       "--grid=-1:1:3")
    assert code == 2 and json.loads(err)["error"] == "DegenerateIndex"


def test_bad_config(capsys, tmp_path):
    code, _, err = run(capsys, "compute", "--config", str(tmp_path / "missing.json"),
                       "--index", "1,1")
    assert code == 2 and json.loads(err)["error"] == "ConfigError"
    code, _, err = run(capsys, "compute", "--config", cfg("hermite2.json"), "--index", "1,1,1")
    assert code == 2


def test_rmt_sim_deterministic(capsys, tmp_path):
    args = ["rmt-sim", "--alpha=1,-1", "--index", "1,1", "--samples", "3000", "--seed", "7",
            "--bins", "10", "--range=-4:4", "--tol", "1"]
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    s = tmp_path / "s.json"
    run(capsys, *args, "--out", str(a), "--summary", str(s))
    run(capsys, *args, "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    summary = json.loads(s.read_text())
    assert summary["samples"] == 3000 and set(summary) == {"samples", "chi2", "max_rel_dev", "pass"}


def test_rmt_sim_config_and_errors(capsys):
    code, out, _ = run(capsys, "rmt-sim", "--config", cfg("source6.json"), "--samples", "500",
                       "--tol", "10")
    assert out.startswith("bin_lo,bin_hi,empirical,predicted")
    code, _, err = run(capsys, "rmt-sim", "--alpha=1,-1", "--index", "1,1", "--samples", "0")
    assert code == 2 and json.loads(err)["error"] == "InsufficientSamples"
    code, _, err = run(capsys, "rmt-sim", "--alpha=1,1", "--index", "1,1")
    assert code == 2


@pytest.mark.parametrize("flag", ["0", "1"])
def test_console_script_and_fallback_flag(flag):
    env = dict(os.environ, MOPCD_DISABLE_NUMBA=flag)
    res = subprocess.run([sys.executable, "-m", "mopcd.cli", "rmt-sim", "--alpha=0.5",
                          "--index", "2", "--samples", "200", "--tol", "10", "--bins", "8"],
                         capture_output=True, text=True, env=env, check=False)
    assert res.returncode in (0, 1), res.stderr
    assert res.stdout.splitlines()[0] == "bin_lo,bin_hi,empirical,predicted"
