"""Reproduction presets: the nine stock report figures.

Figures 1-4 are peak-work parameter sweeps of the two-mode battery; figures
5-9 are open-system size-scaling studies. Parameter values not stated by the
source material (a couple of temperatures, one charging strength, and all
sweep-axis extents) are explicit assumptions, carried on each preset and
surfaced in the run manifest and console output.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import UnknownFigure
from .model import ModeSpec

K_DEFAULT = 7 * math.pi / 8
SWEEP_POINTS = 2001


@dataclass(frozen=True)
class ClosedCurve:
    """One fixed-value curve of a peak-work sweep."""

    panel: str
    label: str
    base: ModeSpec
    temperature: float | None  # None when the sweep parameter is T itself
    omega: float
    param: str
    grid: np.ndarray


@dataclass(frozen=True)
class OpenPanel:
    """One size-scaling panel: a family of dephased charging runs over N."""

    panel: str
    j_coupling: float
    delta: float
    gamma_cap: float
    gamma: float
    b_field: float
    temperature: float
    omega: float
    g: float
    n_values: tuple = (2, 3, 4, 5, 6, 7, 8)


@dataclass(frozen=True)
class FigurePreset:
    kind: str  # "closed" | "open"
    closed_curves: tuple = ()
    open_panels: tuple = ()
    assumptions: tuple = field(default=())  # (key, note) pairs for the manifest


def _grid(lo, hi):
    return np.linspace(lo, hi, SWEEP_POINTS)


def _curve_family(panel, temperature, j_range, label_param, label_values, **fixed):
    curves = []
    for value in label_values:
        params = dict(fixed)
        params[label_param] = value
        base = ModeSpec(k=K_DEFAULT, **{
            "j_coupling": params.get("j_coupling", 0.0),
            "delta": params.get("delta", 0.0),
            "gamma_cap": params.get("gamma_cap", 0.0),
            "gamma": params.get("gamma", 0.0),
            "b_field": params.get("b_field", 0.0),
        })
        curves.append(
            ClosedCurve(
                panel=panel,
                label=f"{label_param}={value:g}",
                base=base,
                temperature=temperature,
                omega=1.0,
                param="J",
                grid=_grid(*j_range),
            )
        )
    return curves


def _figure_1():
    b_values = (0.0, 0.25, 0.5, 0.75, 1.0)
    curves = []
    curves += _curve_family("a", 0.01, (0.0, 8.0), "b_field", b_values)
    curves += _curve_family("b", 0.01, (-8.0, 0.0), "b_field", b_values)
    curves += _curve_family("c", 0.1, (0.0, 60.0), "b_field", b_values)
    curves += _curve_family("d", 0.1, (-60.0, 0.0), "b_field", b_values)
    assumptions = (
        ("range.panel_a", "J in [0, 8]"),
        ("range.panel_b", "J in [-8, 0]"),
        ("range.panel_c", "J in [0, 60]"),
        ("range.panel_d", "J in [-60, 0]"),
    )
    return FigurePreset(kind="closed", closed_curves=tuple(curves), assumptions=assumptions)


def _figure_2():
    d_values = (0.1, 0.2, 0.3, 0.4, 0.5)
    curves = []
    curves += _curve_family("a", 0.1, (0.0, 60.0), "delta", d_values)
    curves += _curve_family("b", 0.1, (-60.0, 0.0), "delta", d_values)
    assumptions = (
        ("range.panel_a", "J in [0, 60]"),
        ("range.panel_b", "J in [-60, 0]"),
    )
    return FigurePreset(kind="closed", closed_curves=tuple(curves), assumptions=assumptions)


def _figure_3():
    curves = []
    for gamma in (1.0, 0.5, 0.0, -0.5, -1.0):
        curves.append(
            ClosedCurve(
                panel="a",
                label=f"gamma={gamma:g}",
                base=ModeSpec(k=K_DEFAULT, gamma=gamma),
                temperature=0.01,
                omega=1.0,
                param="Gamma",
                grid=_grid(0.0, 8.0),
            )
        )
    return FigurePreset(
        kind="closed",
        closed_curves=tuple(curves),
        assumptions=(("range.panel_a", "Gamma in [0, 8]"),),
    )


def _figure_4():
    curves = []
    for gamma_cap in (1.0, 1.25, 1.5, 1.75, 2.0):
        curves.append(
            ClosedCurve(
                panel="a",
                label=f"Gamma={gamma_cap:g}",
                base=ModeSpec(k=K_DEFAULT, gamma_cap=gamma_cap, gamma=0.5),
                temperature=None,
                omega=1.0,
                param="T",
                grid=_grid(0.01, 5.0),
            )
        )
    for gamma_cap in (1000.0, 1250.0, 1500.0, 1750.0, 2000.0):
        curves.append(
            ClosedCurve(
                panel="b",
                label=f"Gamma={gamma_cap:g}",
                base=ModeSpec(k=K_DEFAULT, gamma_cap=gamma_cap, gamma=0.5),
                temperature=None,
                omega=1.0,
                param="T",
                grid=_grid(10.0, 5000.0),
            )
        )
    assumptions = (
        ("range.panel_a", "T in [0.01, 5]"),
        ("range.panel_b", "T in [10, 5000]"),
        ("panel_b.Gamma", "curve values scaled 1000x versus panel a"),
    )
    return FigurePreset(kind="closed", closed_curves=tuple(curves), assumptions=assumptions)


def _open_pair(panel_params, assumptions=()):
    panels = tuple(OpenPanel(**params) for params in panel_params)
    return FigurePreset(kind="open", open_panels=panels, assumptions=tuple(assumptions))


def _figure_5():
    common = dict(j_coupling=0.0, delta=0.0, gamma_cap=0.0, gamma=0.0,
                  temperature=0.1, omega=0.25, g=0.2)
    return _open_pair([
        dict(panel="a", b_field=0.25, **common),
        dict(panel="b", b_field=1.0, **common),
    ])


def _figure_6():
    common = dict(j_coupling=0.0, delta=0.0, gamma_cap=0.0, gamma=0.0,
                  b_field=0.1, temperature=0.1, g=0.2)
    return _open_pair(
        [
            dict(panel="a", omega=0.1, **common),
            dict(panel="b", omega=0.4, **common),
        ],
        assumptions=(("bath.T", "0.1 (not stated for this figure)"),),
    )


def _figure_7():
    common = dict(delta=0.0, gamma_cap=0.0, gamma=0.0, b_field=0.2,
                  temperature=0.1, omega=0.2, g=0.2)
    return _open_pair(
        [
            dict(panel="a", j_coupling=0.5, **common),
            dict(panel="b", j_coupling=1.0, **common),
        ],
        assumptions=(("charge.omega", "0.2 (not stated for this figure)"),),
    )


def _figure_8():
    common = dict(delta=0.5, gamma_cap=0.0, gamma=0.0, b_field=0.2,
                  temperature=0.1, omega=0.2, g=0.2)
    return _open_pair([
        dict(panel="a", j_coupling=0.5, **common),
        dict(panel="b", j_coupling=1.0, **common),
    ])


def _figure_9():
    common = dict(gamma=-1.0, j_coupling=0.2, delta=0.5, b_field=0.2,
                  temperature=0.1, omega=0.2, g=0.2)
    return _open_pair([
        dict(panel="a", gamma_cap=2.5, **common),
        dict(panel="b", gamma_cap=5.0, **common),
    ])


_BUILDERS = {
    1: _figure_1,
    2: _figure_2,
    3: _figure_3,
    4: _figure_4,
    5: _figure_5,
    6: _figure_6,
    7: _figure_7,
    8: _figure_8,
    9: _figure_9,
}


def figure_preset(fig_id) -> FigurePreset:
    if fig_id not in _BUILDERS:
        raise UnknownFigure(f"figure id must be 1..9, got {fig_id}")
    return _BUILDERS[fig_id]()
