"""Command-line interface: exit codes, outputs, manifest contents."""

import subprocess
import sys

import pytest

CLOSED_CFG = """
mode = closed_sweep
model.B = 0.25
bath.T = 0.01
charge.omega = 1
sweep.param = J
sweep.min = 0
sweep.max = 2
sweep.points = 5
"""

OPEN_RUN_CFG = """
mode = open_run
model.N = 2
model.B = 0.25
charge.omega = 0.25
noise.g = 0.2
bath.T = 0.1
integrate.t_max = 2
"""

SCALING_CFG = """
mode = open_scaling
model.B = 0.25
charge.omega = 0.25
noise.g = 0.2
bath.T = 0.1
model.N_range = 2..4
integrate.t_max = 2
"""


def run_cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "qbattery", *argv], capture_output=True, text=True
    )


def write(path, text):
    path.write_text(text)
    return str(path)


def test_closed_sweep_outputs(tmp_path):
    cfg = write(tmp_path / "sweep.cfg", CLOSED_CFG)
    out = tmp_path / "run"
    proc = run_cli("closed-sweep", "--config", cfg, "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    assert (out / "sweep.csv").exists()
    assert (out / "manifest.txt").exists()
    assert (out / "sweep.png").exists()
    assert "assumed model.k = default" in proc.stdout
    assert str(out / "sweep.csv") in proc.stdout
    lines = (out / "sweep.csv").read_text().splitlines()
    assert lines[0] == "param,value,xi_max,t_star"
    # J=0 point: work peaks at 4B*tanh(2B/T) = 1, half period of the drive
    assert lines[1] == "J,0,1.0000000000000018,1.5707963267948966"
    manifest = (out / "manifest.txt").read_text()
    assert "mode = closed_sweep" in manifest
    assert "config.model.B = 0.25" in manifest
    assert "checksum.sweep.csv = sha256:" in manifest


def test_no_plots_flag_skips_png(tmp_path):
    cfg = write(tmp_path / "sweep.cfg", CLOSED_CFG)
    out = tmp_path / "run"
    proc = run_cli("closed-sweep", "--config", cfg, "--out", str(out), "--no-plots")
    assert proc.returncode == 0
    assert not (out / "sweep.png").exists()
    assert (out / "sweep.csv").exists()


def test_open_run_outputs(tmp_path):
    cfg = write(tmp_path / "open.cfg", OPEN_RUN_CFG)
    out = tmp_path / "run"
    proc = run_cli("open-run", "--config", cfg, "--out", str(out), "--no-plots")
    assert proc.returncode == 0, proc.stderr
    lines = (out / "trajectory.csv").read_text().splitlines()
    assert lines[0] == "t,xi,trace_err,min_eig"
    assert len(lines) > 10


def test_open_scaling_outputs(tmp_path):
    cfg = write(tmp_path / "scaling.cfg", SCALING_CFG)
    out = tmp_path / "run"
    proc = run_cli("open-scaling", "--config", cfg, "--out", str(out), "--no-plots")
    assert proc.returncode == 0, proc.stderr
    for name in ("trajectory_N2.csv", "trajectory_N3.csv", "trajectory_N4.csv",
                 "peaks.csv", "fit.csv", "manifest.txt"):
        assert (out / name).exists(), name
    fit_lines = (out / "fit.csv").read_text().splitlines()
    assert fit_lines[0] == "A,alpha,sigma_A,sigma_alpha,rss"
    peek = (out / "peaks.csv").read_text().splitlines()
    assert peek[0] == "N,xi_peak,t_peak"
    assert [row.split(",")[0] for row in peek[1:]] == ["2", "3", "4"]


def test_integrator_overrides_land_in_manifest(tmp_path):
    cfg = write(tmp_path / "open.cfg", OPEN_RUN_CFG)
    out = tmp_path / "run"
    proc = run_cli("open-run", "--config", cfg, "--out", str(out),
                   "--dt", "0.01", "--t-max", "1.5", "--no-plots")
    assert proc.returncode == 0, proc.stderr
    manifest = (out / "manifest.txt").read_text()
    assert "config.integrate.dt = 0.01" in manifest
    assert "config.integrate.t_max = 1.5" in manifest
    assert "assumed.integrate.dt" not in manifest  # flag override is explicit
    assert "assumed integrate.dt = default" not in proc.stdout


def test_figure_preset_runs(tmp_path):
    out = tmp_path / "fig"
    proc = run_cli("figure", "3", "--out", str(out), "--no-plots")
    assert proc.returncode == 0, proc.stderr
    made = sorted(p.name for p in out.iterdir())
    assert "manifest.txt" in made
    assert sum(name.endswith(".csv") for name in made) == 5
    assert "assumed range.panel_a" in proc.stdout


def test_unknown_figure_is_config_error(tmp_path):
    proc = run_cli("figure", "12", "--out", str(tmp_path / "x"), "--no-plots")
    assert proc.returncode == 2
    assert "configuration error" in proc.stderr


def test_syntax_error_exit_code(tmp_path):
    cfg = write(tmp_path / "bad.cfg", "mode = closed_sweep\ncharge.omega = nope\n")
    proc = run_cli("closed-sweep", "--config", cfg, "--out", str(tmp_path / "x"))
    assert proc.returncode == 2
    assert "line 2" in proc.stderr


def test_mode_subcommand_mismatch(tmp_path):
    cfg = write(tmp_path / "open.cfg", OPEN_RUN_CFG)
    proc = run_cli("closed-sweep", "--config", cfg, "--out", str(tmp_path / "x"))
    assert proc.returncode == 2
    assert "does not match subcommand" in proc.stderr


def test_numerical_failure_exit_code(tmp_path):
    cfg = write(
        tmp_path / "blow.cfg",
        "mode = open_run\nmodel.N = 2\nmodel.B = 0.25\ncharge.omega = 0.25\n"
        "noise.g = 10000\nintegrate.dt = 1\nintegrate.t_max = 10\n",
    )
    out = tmp_path / "run"
    proc = run_cli("open-run", "--config", cfg, "--out", str(out), "--no-plots")
    assert proc.returncode == 3
    assert "numerical failure" in proc.stderr
    # a failed run must not leave partial data files behind
    leftovers = list(out.glob("*.csv")) if out.exists() else []
    assert leftovers == []


def test_missing_config_file_is_config_error(tmp_path):
    proc = run_cli("closed-sweep", "--config", str(tmp_path / "absent.cfg"),
                   "--out", str(tmp_path / "x"))
    assert proc.returncode == 2
