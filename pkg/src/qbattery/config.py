"""Experiment configuration: line-oriented `key = value` files with `#`
comments, namespaced keys, defaulting rules and a resolved-run manifest."""

import hashlib
import math
from dataclasses import dataclass, field

from .errors import ConfigSyntax, ConfigValidation

MODES = ("closed_sweep", "open_run", "open_scaling", "figure")
SWEEPABLE = ("J", "delta", "Gamma", "gamma", "B", "T", "k")

_DEFAULT_K = 7 * math.pi / 8


def _parse_float(raw):
    return float(raw)


def _parse_int(raw):
    if "." in raw:
        raise ValueError(raw)
    return int(raw)


def _parse_str(raw):
    return raw


def _parse_range(raw):
    lo, sep, hi = raw.partition("..")
    if not sep:
        raise ValueError(raw)
    return int(lo), int(hi)


# key -> (attribute, value parser)
KEY_TABLE = {
    "mode": ("mode", _parse_str),
    "model.N": ("n_sites", _parse_int),
    "model.N_range": ("n_range", _parse_range),
    "model.J": ("j_coupling", _parse_float),
    "model.delta": ("delta", _parse_float),
    "model.Gamma": ("gamma_cap", _parse_float),
    "model.gamma": ("gamma", _parse_float),
    "model.B": ("b_field", _parse_float),
    "model.k": ("k", _parse_float),
    "bath.T": ("temperature", _parse_float),
    "charge.omega": ("omega", _parse_float),
    "charge.axis": ("axis", _parse_str),
    "noise.g": ("g", _parse_float),
    "integrate.dt": ("dt", _parse_float),
    "integrate.t_max": ("t_max", _parse_float),
    "integrate.record_stride": ("record_stride", _parse_int),
    "sweep.param": ("sweep_param", _parse_str),
    "sweep.min": ("sweep_min", _parse_float),
    "sweep.max": ("sweep_max", _parse_float),
    "sweep.points": ("sweep_points", _parse_int),
    "output.dir": ("out_dir", _parse_str),
    "output.workers": ("workers", _parse_int),
    "figure.id": ("figure_id", _parse_int),
}

DEFAULTS = {
    "model.J": 0.0,
    "model.delta": 0.0,
    "model.Gamma": 0.0,
    "model.gamma": 0.0,
    "model.B": 0.0,
    "model.k": _DEFAULT_K,
    "bath.T": 0.1,
    "charge.axis": "x",
    "noise.g": 0.2,
    "integrate.dt": 0.005,
    "integrate.t_max": 60.0,
    "integrate.record_stride": 20,
    "output.workers": 1,
}

# keys each mode actually consumes; defaulted ones among these land in `assumed`
_MODEL_KEYS = ("model.J", "model.delta", "model.Gamma", "model.gamma", "model.B")
MODE_KEYS = {
    "closed_sweep": _MODEL_KEYS
    + ("model.k", "bath.T", "charge.omega", "charge.axis",
       "sweep.param", "sweep.min", "sweep.max", "sweep.points", "output.workers"),
    "open_run": _MODEL_KEYS
    + ("model.N", "bath.T", "charge.omega", "charge.axis", "noise.g",
       "integrate.dt", "integrate.t_max", "integrate.record_stride", "output.workers"),
    "open_scaling": _MODEL_KEYS
    + ("model.N_range", "bath.T", "charge.omega", "charge.axis", "noise.g",
       "integrate.dt", "integrate.t_max", "integrate.record_stride", "output.workers"),
    "figure": ("figure.id", "integrate.dt", "integrate.t_max",
               "integrate.record_stride", "output.workers"),
}
REQUIRED_KEYS = {
    "closed_sweep": ("charge.omega", "sweep.param", "sweep.min", "sweep.max", "sweep.points"),
    "open_run": ("charge.omega", "model.N"),
    "open_scaling": ("charge.omega", "model.N_range"),
    "figure": ("figure.id",),
}


@dataclass
class ExperimentConfig:
    mode: str
    n_sites: int | None = None
    n_range: tuple | None = None
    j_coupling: float = 0.0
    delta: float = 0.0
    gamma_cap: float = 0.0
    gamma: float = 0.0
    b_field: float = 0.0
    k: float = _DEFAULT_K
    temperature: float = 0.1
    omega: float | None = None
    axis: str = "x"
    g: float = 0.2
    dt: float = 0.005
    t_max: float = 60.0
    record_stride: int = 20
    sweep_param: str | None = None
    sweep_min: float | None = None
    sweep_max: float | None = None
    sweep_points: int | None = None
    out_dir: str | None = None
    workers: int = 1
    figure_id: int | None = None
    assumed: tuple = ()
    raw_keys: dict = field(default_factory=dict)


def parse_config(text) -> ExperimentConfig:
    """Parse and validate a configuration document."""
    seen = {}
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, raw_value = (part.strip() for part in line.partition("="))
        if not sep:
            raise ConfigSyntax(line_no, f"expected `key = value`, got {raw_line.strip()!r}")
        if not key:
            raise ConfigSyntax(line_no, "empty key")
        if key not in KEY_TABLE:
            raise ConfigValidation(key, "unknown key")
        if key in seen:
            raise ConfigSyntax(line_no, f"duplicate key {key}")
        _, parser = KEY_TABLE[key]
        try:
            value = parser(raw_value)
        except ValueError:
            raise ConfigSyntax(line_no, f"cannot parse value {raw_value!r} for {key}") from None
        seen[key] = value
    return resolve_config(seen)


def resolve_config(user_values) -> ExperimentConfig:
    """Apply defaults, record assumptions, and validate cross-field rules."""
    if "mode" not in user_values:
        raise ConfigValidation("mode", "required key is missing")
    mode = user_values["mode"]
    if mode not in MODES:
        raise ConfigValidation("mode", f"must be one of {MODES}, got {mode!r}")

    relevant = MODE_KEYS[mode]
    for key in REQUIRED_KEYS[mode]:
        if key not in user_values:
            raise ConfigValidation(key, f"required for mode {mode}")
    for key in user_values:
        if key != "mode" and key != "output.dir" and key not in relevant:
            raise ConfigValidation(key, f"not consumed by mode {mode}")

    cfg = ExperimentConfig(mode=mode)
    assumed = []
    for key in relevant:
        attr, _ = KEY_TABLE[key]
        if key in user_values:
            setattr(cfg, attr, user_values[key])
        elif key in DEFAULTS:
            setattr(cfg, attr, DEFAULTS[key])
            assumed.append(key)
    if "output.dir" in user_values:
        cfg.out_dir = user_values["output.dir"]
    cfg.assumed = tuple(assumed)
    cfg.raw_keys = {k: v for k, v in user_values.items() if k != "mode"}
    _validate(cfg)
    return cfg


def _validate(cfg: ExperimentConfig):
    if cfg.mode in ("closed_sweep", "open_run", "open_scaling"):
        if not cfg.temperature > 0:
            raise ConfigValidation("bath.T", "must be > 0")
        if cfg.omega is not None and not cfg.omega > 0:
            raise ConfigValidation("charge.omega", "must be > 0")
        if cfg.axis not in ("x", "y"):
            raise ConfigValidation("charge.axis", "must be x or y")
    if cfg.mode == "closed_sweep":
        if not 0 < cfg.k < math.pi:
            raise ConfigValidation("model.k", "must lie in (0, pi)")
        if cfg.axis != "x":
            raise ConfigValidation("charge.axis", "two-mode charging supports axis x only")
        if cfg.sweep_param not in SWEEPABLE:
            raise ConfigValidation("sweep.param", f"must be one of {SWEEPABLE}")
        if cfg.sweep_points < 1:
            raise ConfigValidation("sweep.points", "must be >= 1")
        if cfg.sweep_max < cfg.sweep_min:
            raise ConfigValidation("sweep.max", "must be >= sweep.min")
        if cfg.sweep_param == "T" and cfg.sweep_min <= 0:
            raise ConfigValidation("sweep.min", "temperature sweep needs values > 0")
    if cfg.mode in ("open_run", "open_scaling"):
        if cfg.g < 0:
            raise ConfigValidation("noise.g", "must be >= 0")
        if not cfg.dt > 0:
            raise ConfigValidation("integrate.dt", "must be > 0")
        if not cfg.dt < cfg.t_max:
            raise ConfigValidation("integrate.dt", "must be smaller than integrate.t_max")
        if cfg.record_stride < 1:
            raise ConfigValidation("integrate.record_stride", "must be >= 1")
    if cfg.mode == "open_run":
        if not 2 <= cfg.n_sites <= 8:
            raise ConfigValidation("model.N", "must lie in 2..8")
    if cfg.mode == "open_scaling":
        lo, hi = cfg.n_range
        if not (2 <= lo <= hi <= 8):
            raise ConfigValidation("model.N_range", "must lie within 2..8")
        if hi - lo + 1 < 3:
            raise ConfigValidation("model.N_range", "need at least 3 sizes for the fit")
    if cfg.mode == "figure":
        if cfg.figure_id is None:
            raise ConfigValidation("figure.id", "required")
    if cfg.workers < 1:
        raise ConfigValidation("output.workers", "must be >= 1")


def format_value(v):
    if isinstance(v, float):
        return f"{v:.17g}"
    if isinstance(v, tuple):
        return f"{v[0]}..{v[1]}"
    return str(v)


def manifest_lines(cfg: ExperimentConfig, version, duration_s, checksums, extra_assumptions=()):
    """Render the run manifest: resolved configuration with every defaulted
    value flagged as assumed, software version, duration, output checksums."""
    lines = [f"version = {version}", f"mode = {cfg.mode}"]
    assumed = set(cfg.assumed)
    for key in sorted(MODE_KEYS[cfg.mode]):
        attr, _ = KEY_TABLE[key]
        value = getattr(cfg, attr)
        if value is None:
            continue
        lines.append(f"config.{key} = {format_value(value)}")
    for key in sorted(assumed):
        attr, _ = KEY_TABLE[key]
        lines.append(f"assumed.{key} = {format_value(getattr(cfg, attr))}")
    for note_key, note_value in extra_assumptions:
        lines.append(f"assumed.{note_key} = {note_value}")
    lines.append(f"duration_s = {duration_s:.3f}")
    for name in sorted(checksums):
        lines.append(f"checksum.{name} = sha256:{checksums[name]}")
    return lines


def sha256_of(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()
