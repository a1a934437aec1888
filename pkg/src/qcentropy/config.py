"""Scenario configuration: typed schema, defaults, validation and the flat text format.

The on-disk format is an INI file with a single ``[scenario]`` section of
``key = value`` lines; units are given in the comments written by
:func:`dump_config`.
"""
from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path

from . import model
from .errors import ConfigError, OutputError
from .grid import Grid1D, symmetric_grid

STATE_KINDS = ("gaussian_diagonal", "gaussian_channel_x", "gaussian_channel_y",
               "cat_channel", "bell")

# Candidate classical steps, all dividing the 0.25 default sample interval.
CLASSICAL_DT_LADDER = (0.002, 0.001, 0.0005, 0.00025)
# Velocity-Verlet energy error depends only on dt / tau_half (energy-scale
# invariance). tau/1500 was enough for centred Gaussians but not for the
# off-centre cat tail (1.2e-5); tau/3000 leaves a ~4x margin under 1e-5.
CLASSICAL_STEPS_PER_HALF_PERIOD = 3000
GRID_MARGIN = 1.6
MIN_GRID_MARGIN = 1.5
MOMENTUM_MARGIN = 1.5


@dataclass
class ScenarioConfig:
    name: str
    alpha: float
    E0: float
    state_kind: str
    x0: float = 2.5
    y0: float = 2.5
    n_traj: int = 100_000
    seed: int = 0
    grid_n: int | None = None
    grid_half_width: float | None = None
    dt_quantum: float | None = None
    dt_classical: float | None = None
    t_final: float | None = None
    sample_interval: float = 0.25
    pixel_coarsen: int = 1
    companion: bool = False
    csv: str | None = None
    plot: bool = True
    m: float = 1.0
    hbar: float = 1.0
    beta: float = 0.01
    sigma2: float = 0.5

    @property
    def params(self) -> model.ModelParams:
        return model.ModelParams(m=self.m, hbar=self.hbar, alpha=self.alpha,
                                 beta=self.beta, sigma2=self.sigma2)

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def resolved(self) -> "ScenarioConfig":
        """Copy with every ``None`` default filled in from the energy and coupling."""
        p = self.params
        high = self.E0 > 15.0
        return self.replace(
            grid_n=self.grid_n or (512 if high else 256),
            grid_half_width=self.grid_half_width
            or GRID_MARGIN * model.channel_turning_point(p, self.E0),
            dt_quantum=self.dt_quantum or 0.005,
            dt_classical=self.dt_classical or default_classical_dt(p, self.E0),
            t_final=self.t_final if self.t_final is not None else (60.0 if high else 100.0),
        )

    def grid(self) -> Grid1D:
        cfg = self.resolved()
        return symmetric_grid(cfg.grid_n, cfg.grid_half_width, cfg.hbar)


def default_classical_dt(params: model.ModelParams, E0: float) -> float:
    target = model.half_period_diagonal(params, E0) / CLASSICAL_STEPS_PER_HALF_PERIOD
    for dt in CLASSICAL_DT_LADDER:
        if dt <= target:
            return dt
    return CLASSICAL_DT_LADDER[-1]


def _steps_per_sample(interval: float, dt: float, what: str) -> int:
    k = interval / dt
    if abs(k - round(k)) > 1e-9 * max(1.0, k) or round(k) < 1:
        raise ConfigError(f"sample interval {interval} is not a multiple of {what} {dt}", "dt")
    return int(round(k))


def validate(cfg: ScenarioConfig) -> ScenarioConfig:
    """Check a config; return the resolved copy. Raises ConfigError with a code."""
    if cfg.state_kind not in STATE_KINDS:
        raise ConfigError(f"state_kind must be one of {', '.join(STATE_KINDS)}; "
                          f"got {cfg.state_kind!r}", "schema")
    if not (math.isfinite(cfg.E0) and cfg.E0 > 0):
        raise ConfigError(f"E0 must be positive, got {cfg.E0}", "energy")
    p = cfg.params
    r = cfg.resolved()
    if cfg.state_kind in ("cat_channel", "bell"):
        e_off = cfg.E0 - 0.25 * cfg.beta * cfg.x0 ** 4
        if e_off < 0:
            raise ConfigError(f"E0' = E0 - beta x0^4/4 = {e_off:.4g} < 0", "energy")
    if cfg.companion and cfg.state_kind != "cat_channel":
        raise ConfigError("a companion run is only defined for cat_channel", "schema")
    if r.n_traj < 1:
        raise ConfigError("n_traj must be at least 1", "schema")
    if r.t_final < 0:
        raise ConfigError("t_final must be non-negative", "schema")
    if not r.sample_interval > 0:
        raise ConfigError("sample_interval must be positive", "schema")
    g = r.grid()  # raises for a non power-of-two size
    extent = model.channel_turning_point(p, cfg.E0)
    if r.grid_half_width < MIN_GRID_MARGIN * extent:
        raise ConfigError(f"grid half-width {r.grid_half_width:.3f} is below "
                          f"{MIN_GRID_MARGIN} x turning point {extent:.3f}", "grid")
    p_needed = MOMENTUM_MARGIN * math.sqrt(2.0 * cfg.m * cfg.E0)
    if g.p_max < p_needed:
        raise ConfigError(f"momentum window +-{g.p_max:.2f} does not cover "
                          f"{p_needed:.2f}; increase grid_n", "grid")
    if not (0 < r.dt_quantum <= 0.05 and 0 < r.dt_classical <= 0.05):
        raise ConfigError("time steps must lie in (0, 0.05]", "dt")
    tau = model.half_period_diagonal(p, cfg.E0)
    if r.dt_classical > tau / 100:
        raise ConfigError(f"classical dt {r.dt_classical} too coarse for half-period "
                          f"{tau:.3f}", "dt")
    _steps_per_sample(r.sample_interval, r.dt_quantum, "dt_quantum")
    _steps_per_sample(r.sample_interval, r.dt_classical, "dt_classical")
    if r.t_final > 0:
        _steps_per_sample(r.t_final, r.sample_interval, "sample_interval")
    if r.grid_n % r.pixel_coarsen:
        raise ConfigError("pixel_coarsen must divide grid_n", "grid")
    return r


def steps_per_sample(cfg: ScenarioConfig) -> tuple[int, int]:
    r = cfg.resolved()
    return (_steps_per_sample(r.sample_interval, r.dt_quantum, "dt_quantum"),
            _steps_per_sample(r.sample_interval, r.dt_classical, "dt_classical"))


# --- text format --------------------------------------------------------------

_UNITS = {
    "name": "scenario label",
    "alpha": "coupling strength, energy/length^4",
    "E0": "mean initial energy",
    "state_kind": " | ".join(STATE_KINDS),
    "x0": "packet offset along x (cat, bell), length",
    "y0": "packet offset along y (bell), length",
    "n_traj": "classical trajectories",
    "seed": "RNG seed for the classical ensemble",
    "grid_n": "points per axis, power of two (blank: 256, or 512 above E0 = 15)",
    "grid_half_width": "grid spans [-L, L), length (blank: 1.6 x channel turning point)",
    "dt_quantum": "split-operator step, time (blank: 0.005)",
    "dt_classical": "velocity-Verlet step, time (blank: from the orbit half-period)",
    "t_final": "run length, time (blank: 100, or 60 above E0 = 15)",
    "sample_interval": "entropy sampling interval, time",
    "pixel_coarsen": "merge k x k quantum cells per box-counting pixel",
    "companion": "also run the single Gaussian at the second cat packet",
    "csv": "output CSV path (blank: <out>/<name>.csv)",
    "plot": "write an SVG figure next to the CSV",
    "m": "mass",
    "hbar": "action",
    "beta": "quartic stiffness, energy/length^4",
    "sigma2": "packet width sigma^2, length^2",
}


def _field_types():
    return {f.name: f.type for f in dataclasses.fields(ScenarioConfig)}


def _coerce(key: str, raw: str):
    t = _field_types()[key]
    raw = raw.strip()
    optional = "None" in str(t)
    if raw == "" or raw.lower() == "none":
        if optional:
            return None
        raise ConfigError(f"{key} needs a value", "schema")
    try:
        if "bool" in str(t):
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if "int" in str(t):
            value = float(raw)
            if not value.is_integer():
                raise ValueError(raw)
            return int(value)
        if "float" in str(t):
            return float(raw)
        return raw
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {t}", "schema") from None


def parse_config(text: str) -> ScenarioConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}", "schema") from None
    if "scenario" not in parser:
        raise ConfigError("config needs a [scenario] section", "schema")
    section = parser["scenario"]
    known = _field_types()
    unknown = sorted(set(section) - set(known))
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(unknown)}", "schema")
    values = {k: _coerce(k, v) for k, v in section.items()}
    required = ("name", "alpha", "E0", "state_kind")
    missing = [k for k in required if values.get(k) is None]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}", "schema")
    return ScenarioConfig(**values)


def load_config(path) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OutputError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def dump_config(cfg: ScenarioConfig) -> str:
    lines = ["[scenario]"]
    for f in dataclasses.fields(ScenarioConfig):
        value = getattr(cfg, f.name)
        text = "" if value is None else repr(value) if isinstance(value, float) else str(value)
        lines.append(f"# {_UNITS[f.name]}")
        lines.append(f"{f.name} = {text}")
    return "\n".join(lines) + "\n"
