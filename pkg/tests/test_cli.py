import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from gpe2d import read_snapshot, read_timeseries
from gpe2d.cli import EXIT_BLOWUP, EXIT_CONFIG, EXIT_IO, EXIT_OK, main

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"
SMALL = ["--set", "grid.nx=32", "--set", "grid.ny=32"]


def test_describe_defaults(capsys):
    assert main(["describe"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "kappa = 1.0" in out and "p = 3.0" in out and "sigma = 1.0" in out
    assert "steps = 100" in out and "nodes = 16384" in out


def test_describe_override(capsys):
    assert main(["describe", "--set", "nonlinearity.kappa=-1.9718"]) == EXIT_OK
    assert "kappa = -1.9718" in capsys.readouterr().out


def test_describe_invalid_override(capsys):
    assert main(["describe", "--set", "nonlinearity.kapa=2"]) == EXIT_CONFIG
    assert "nonlinearity.kapa" in capsys.readouterr().err


def test_missing_config(tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["run", str(tmp_path / "nope.ini"), "--out", str(out)])
    assert code == EXIT_IO and code != 0
    assert not out.exists()


def test_run_writes_outputs(tmp_path):
    out = tmp_path / "run"
    args = ["run", str(CONFIG_DIR / "fig1_anisotropic_trap.ini"), "--out", str(out),
            "--set", "grid.nx=64", "--set", "grid.ny=64"]
    assert main(args) == EXIT_OK
    snap = read_snapshot(out / "snapshot_t2.000000.gpe2")
    assert snap.grid.nx == 64
    series = read_timeseries(out / "timeseries.csv")
    assert len(series) == 21 and series[-1].t == pytest.approx(2.0)
    ts = [r.t for r in series]
    assert ts == sorted(ts)
    summary = json.loads((out / "summary.json").read_text())
    assert summary["status"] == "completed" and summary["mass_drift"] < 1e-10


def test_run_is_deterministic(tmp_path):
    for name in ("a", "b"):
        assert main(["run", "--out", str(tmp_path / name), *SMALL,
                     "--set", "evolution.snapshot_times=1"]) == EXIT_OK
    for f in ("timeseries.csv", "snapshot_t1.000000.gpe2"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_run_blowup_exit_code(tmp_path):
    out = tmp_path / "blow"
    code = main(["run", "--out", str(out), "--set", "grid.nx=256", "--set", "grid.ny=256", "--set", "evolution.T=0.5",
                 "--set", "nonlinearity.kappa=-1.9718", "--set", "initial.amplitude=3.4641",
                 "--set", "potential.kind=quadratic", "--set", "potential.eps=0.3",
                 "--set", "evolution.dt=0.001"])
    assert code == EXIT_BLOWUP
    summary = json.loads((out / "summary.json").read_text())
    assert summary["status"] == "blown_up"
    series = read_timeseries(out / "timeseries.csv")
    assert series[-1].t == pytest.approx(summary["blowup_time"])
    assert series[-1].t < 0.5


def test_converge_time(tmp_path, capsys):
    out = tmp_path / "ct"
    code = main(["converge-time", "--out", str(out), "--set", "evolution.T=0.5",
                 "--dt", "0.01,0.005,0.0025", "--h-fixed", "1/4"])
    assert code == EXIT_OK
    text = capsys.readouterr().out
    assert "fitted order: 2.0" in text
    csv = (out / "convergence_temporal.csv").read_text()
    rows = [ln for ln in csv.splitlines() if not ln.startswith("#")]
    assert rows[0] == "resolution,error" and len(rows) == 4
    assert (out / "convergence_temporal.txt").exists()


def test_converge_space_single_row(tmp_path, capsys):
    code = main(["converge-space", "--out", str(tmp_path), "--set", "evolution.T=0.1",
                 "--h", "1/2", "--dt-ref", "0.01"])
    assert code == EXIT_OK
    assert "fitted order: n/a" in capsys.readouterr().out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gpe2d", "describe", "--set", "grid.nx=7"],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_CONFIG
    assert "grid.nx" in proc.stderr
