"""Experiment runner: executes parsed configurations and figure presets on a
worker pool and writes CSV data, a run manifest, and (optionally) PNG plots.

CSV payloads are formatted to 17 significant digits with newline endings fixed
at \\n, so identical configurations produce byte-identical files regardless of
worker count or platform line conventions.
"""

import os
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .closed import ChargeProtocol, sweep_1d
from .config import ExperimentConfig, manifest_lines, sha256_of
from .errors import QBatteryError
from .model import ChainSpec, ModeSpec, build_h_charge, build_h_qb
from .open_system import IntegratorConfig, integrate, site_dephasing_spec
from .presets import OpenPanel, figure_preset
from .scaling import PeakSeries, fit_power_law
from .thermal import Temperature, gibbs_state

EARLY_STOP = (200, 1e-5)
CLOSED_GRID_POINTS = 2001


def _fmt(value):
    return f"{value:.17g}"


def write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _pool_map(fn, tasks, workers):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


class RunWriter:
    """Tracks written files so a failed run can remove its partial outputs."""

    def __init__(self, out_dir):
        self.out_dir = out_dir
        self.paths = []
        os.makedirs(out_dir, exist_ok=True)

    def path(self, name):
        p = os.path.join(self.out_dir, name)
        self.paths.append(p)
        return p

    def discard_all(self):
        for p in self.paths:
            try:
                os.remove(p)
            except OSError:
                pass


# ---------------------------------------------------------------- closed runs

def _closed_curve_task(task):
    base, temperature, omega, param, grid = task
    temp = Temperature(temperature) if temperature is not None else None
    protocol = ChargeProtocol.over_one_period(omega, points=CLOSED_GRID_POINTS)
    result = sweep_1d(base, temp, protocol, param, grid)
    return result.param_values, result.xi_max, result.t_star


def run_closed_sweep(cfg: ExperimentConfig, out_dir, workers=None, plots=True):
    """Single configured sweep; one CSV with columns param,value,xi_max,t_star."""
    workers = cfg.workers if workers is None else workers
    writer = RunWriter(out_dir)
    started = time.monotonic()
    base = ModeSpec(
        k=cfg.k,
        j_coupling=cfg.j_coupling,
        delta=cfg.delta,
        gamma_cap=cfg.gamma_cap,
        gamma=cfg.gamma,
        b_field=cfg.b_field,
    )
    grid = np.linspace(cfg.sweep_min, cfg.sweep_max, cfg.sweep_points)
    temperature = None if cfg.sweep_param == "T" else cfg.temperature
    try:
        values, xi, t_star = _closed_curve_task(
            (base, temperature, cfg.omega, cfg.sweep_param, grid)
        )
        csv_path = writer.path("sweep.csv")
        write_csv(
            csv_path,
            ("param", "value", "xi_max", "t_star"),
            [(cfg.sweep_param, float(v), float(x), float(t)) for v, x, t in zip(values, xi, t_star)],
        )
        if plots:
            from .plots import render_closed_panel

            render_closed_panel(
                writer.path("sweep.png"),
                [(cfg.sweep_param, values, xi)],
                cfg.sweep_param,
                f"peak work vs {cfg.sweep_param}",
            )
        _write_manifest(writer, cfg, started, extra=())
    except QBatteryError:
        writer.discard_all()
        raise
    return writer.paths


# ------------------------------------------------------------------ open runs

def _open_trajectory_task(task):
    (n, j, delta, gamma_cap, gamma, b_field, temperature, omega, axis, g,
     dt, t_max, record_stride, early_stop) = task
    chain = ChainSpec(
        n_sites=n, j_coupling=j, delta=delta, gamma_cap=gamma_cap,
        gamma=gamma, b_field=b_field,
    )
    h_qb = build_h_qb(chain)
    h_total = h_qb + build_h_charge(n, omega, axis)
    zeta = gibbs_state(h_qb, Temperature(temperature))
    spec = site_dephasing_spec(h_total, n, g)
    config = IntegratorConfig(dt=dt, t_max=t_max, record_stride=record_stride)
    traj = integrate(zeta, spec, h_qb, config, early_stop=early_stop)
    return traj.times, traj.xi, traj.trace_err, traj.min_eig


def _open_tasks_for(cfg: ExperimentConfig, n_values, early_stop):
    return [
        (
            n, cfg.j_coupling, cfg.delta, cfg.gamma_cap, cfg.gamma, cfg.b_field,
            cfg.temperature, cfg.omega, cfg.axis, cfg.g,
            cfg.dt, cfg.t_max, cfg.record_stride, early_stop,
        )
        for n in n_values
    ]


def _write_trajectory_csv(writer, name, times, xi, trace_err, min_eig):
    write_csv(
        writer.path(name),
        ("t", "xi", "trace_err", "min_eig"),
        list(zip(map(float, times), map(float, xi), map(float, trace_err), map(float, min_eig))),
    )


def run_open_scaling(cfg: ExperimentConfig, out_dir, workers=None, plots=True,
                     early_stop=EARLY_STOP):
    """Trajectories for every N, peak extraction, and the power-law fit."""
    workers = cfg.workers if workers is None else workers
    writer = RunWriter(out_dir)
    started = time.monotonic()
    n_values = list(range(cfg.n_range[0], cfg.n_range[1] + 1))
    try:
        results = _pool_map(_open_trajectory_task, _open_tasks_for(cfg, n_values, early_stop),
                            workers)
        peaks, peak_times, trajectories = [], [], []
        for n, (times, xi, trace_err, min_eig) in zip(n_values, results):
            _write_trajectory_csv(writer, f"trajectory_N{n}.csv", times, xi, trace_err, min_eig)
            idx = int(np.argmax(xi))
            peaks.append(float(xi[idx]))
            peak_times.append(float(times[idx]))
            trajectories.append((n, times, xi))
        write_csv(
            writer.path("peaks.csv"),
            ("N", "xi_peak", "t_peak"),
            list(zip(n_values, peaks, peak_times)),
        )
        fit = fit_power_law(PeakSeries(sizes=np.array(n_values), peaks=np.array(peaks)))
        write_csv(
            writer.path("fit.csv"),
            ("A", "alpha", "sigma_A", "sigma_alpha", "rss"),
            [(fit.a, fit.alpha, fit.sigma_a, fit.sigma_alpha, fit.rss)],
        )
        if plots:
            from .plots import render_open_panel

            render_open_panel(
                writer.path("scaling.png"), trajectories, n_values, peaks, fit,
                "dephased charging",
            )
        _write_manifest(writer, cfg, started, extra=())
    except QBatteryError:
        writer.discard_all()
        raise
    return writer.paths


def run_open_single(cfg: ExperimentConfig, out_dir, workers=None, plots=True,
                    early_stop=EARLY_STOP):
    """One trajectory at a fixed N."""
    writer = RunWriter(out_dir)
    started = time.monotonic()
    try:
        times, xi, trace_err, min_eig = _open_trajectory_task(
            _open_tasks_for(cfg, [cfg.n_sites], early_stop)[0]
        )
        _write_trajectory_csv(writer, "trajectory.csv", times, xi, trace_err, min_eig)
        if plots:
            from .plots import render_open_panel

            idx = int(np.argmax(xi))
            render_open_panel(
                writer.path("trajectory.png"), [(cfg.n_sites, times, xi)],
                [cfg.n_sites], [float(xi[idx])], None, f"N={cfg.n_sites}",
            )
        _write_manifest(writer, cfg, started, extra=())
    except QBatteryError:
        writer.discard_all()
        raise
    return writer.paths


# -------------------------------------------------------------- figure presets

def reproduce_figure(fig_id, out_dir, workers=1, plots=True, dt=None, t_max=None,
                     echo=print):
    """Reproduce every curve of one stock figure into out_dir."""
    preset = figure_preset(fig_id)
    writer = RunWriter(out_dir)
    started = time.monotonic()
    for key, note in preset.assumptions:
        echo(f"assumed {key}: {note}")
    try:
        if preset.kind == "closed":
            _figure_closed(preset, writer, workers, plots)
        else:
            _figure_open(preset, writer, workers, plots, dt, t_max)
        _write_figure_manifest(writer, fig_id, preset, started, dt, t_max)
    except QBatteryError:
        writer.discard_all()
        raise
    return writer.paths


def _figure_closed(preset, writer, workers, plots):
    tasks = [
        (c.base, c.temperature, c.omega, c.param, c.grid) for c in preset.closed_curves
    ]
    results = _pool_map(_closed_curve_task, tasks, workers)
    by_panel = {}
    for curve, (values, xi, t_star) in zip(preset.closed_curves, results):
        name = f"panel_{curve.panel}_{curve.label}.csv"
        write_csv(
            writer.path(name),
            ("param", "value", "xi_max", "t_star"),
            [(curve.param, float(v), float(x), float(t)) for v, x, t in zip(values, xi, t_star)],
        )
        by_panel.setdefault(curve.panel, []).append((curve.label, values, xi, curve.param))
    if plots:
        from .plots import render_closed_panel

        for panel, curves in by_panel.items():
            render_closed_panel(
                writer.path(f"panel_{panel}.png"),
                [(label, values, xi) for label, values, xi, _ in curves],
                curves[0][3],
                f"panel {panel}",
            )


def _panel_tasks(panel: OpenPanel, dt, t_max):
    return [
        (
            n, panel.j_coupling, panel.delta, panel.gamma_cap, panel.gamma,
            panel.b_field, panel.temperature, panel.omega, "x", panel.g,
            dt, t_max, 20, EARLY_STOP,
        )
        for n in panel.n_values
    ]


def _figure_open(preset, writer, workers, plots, dt, t_max):
    dt = 0.005 if dt is None else dt
    t_max = 60.0 if t_max is None else t_max
    for panel in preset.open_panels:
        results = _pool_map(_open_trajectory_task, _panel_tasks(panel, dt, t_max), workers)
        peaks, peak_times, trajectories = [], [], []
        for n, (times, xi, trace_err, min_eig) in zip(panel.n_values, results):
            _write_trajectory_csv(
                writer, f"panel_{panel.panel}_trajectory_N{n}.csv", times, xi, trace_err, min_eig
            )
            idx = int(np.argmax(xi))
            peaks.append(float(xi[idx]))
            peak_times.append(float(times[idx]))
            trajectories.append((n, times, xi))
        write_csv(
            writer.path(f"panel_{panel.panel}_peaks.csv"),
            ("N", "xi_peak", "t_peak"),
            list(zip(panel.n_values, peaks, peak_times)),
        )
        fit = fit_power_law(PeakSeries(sizes=np.array(panel.n_values), peaks=np.array(peaks)))
        write_csv(
            writer.path(f"panel_{panel.panel}_fit.csv"),
            ("A", "alpha", "sigma_A", "sigma_alpha", "rss"),
            [(fit.a, fit.alpha, fit.sigma_a, fit.sigma_alpha, fit.rss)],
        )
        if plots:
            from .plots import render_open_panel

            render_open_panel(
                writer.path(f"panel_{panel.panel}.png"), trajectories,
                list(panel.n_values), peaks, fit, f"panel {panel.panel}",
            )


# ------------------------------------------------------------------ manifests

def _checksums(writer):
    return {
        os.path.basename(p): sha256_of(p)
        for p in writer.paths
        if p.endswith(".csv") and os.path.exists(p)
    }


def _write_manifest(writer, cfg, started, extra):
    duration = time.monotonic() - started
    lines = manifest_lines(cfg, __version__, duration, _checksums(writer), extra)
    with open(writer.path("manifest.txt"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_figure_manifest(writer, fig_id, preset, started, dt, t_max):
    duration = time.monotonic() - started
    lines = [f"version = {__version__}", "mode = figure", f"config.figure.id = {fig_id}"]
    if preset.kind == "open":
        lines.append(f"config.integrate.dt = {0.005 if dt is None else dt:.17g}")
        lines.append(f"config.integrate.t_max = {60.0 if t_max is None else t_max:.17g}")
    for key, note in preset.assumptions:
        lines.append(f"assumed.{key} = {note}")
    lines.append(f"duration_s = {duration:.3f}")
    checks = _checksums(writer)
    for name in sorted(checks):
        lines.append(f"checksum.{name} = sha256:{checks[name]}")
    with open(writer.path("manifest.txt"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
