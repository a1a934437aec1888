"""Paired quantum / classical runs on a shared sample clock."""
from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import cdyn, centropy, qdyn, rdm, states
from .config import ScenarioConfig, steps_per_sample, validate
from .errors import NumericalIntegrityError

log = logging.getLogger(__name__)

WORKERS_ENV = "QCENTROPY_WORKERS"

NORM_DRIFT_LIMIT = 1e-8
ENERGY_DRIFT_LIMIT = 1e-3
CLASSICAL_ENERGY_LIMIT = 1e-5
SUBSYSTEM_LIMIT = 1e-6
SUBSYSTEM_SPOT_CHECKS = 5

CSV_COLUMNS = ("t", "S_L_q", "S_V_q", "S_L_cl", "S_V_cl", "norm_drift", "energy_drift", "oor_frac")


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


@dataclass
class EntropySeries:
    times: np.ndarray
    S_L_quantum: np.ndarray
    S_V_quantum: np.ndarray
    S_L_classical: np.ndarray
    S_V_classical: np.ndarray
    norm_drift: np.ndarray
    energy_drift: np.ndarray
    out_of_range_fraction: np.ndarray
    diagnostics: dict = field(default_factory=dict)
    companion: "EntropySeries | None" = None
    label: str = ""

    def __post_init__(self):
        n = len(self.times)
        cols = self.columns()
        if any(len(c) != n for c in cols.values()):
            raise ValueError("entropy series columns differ in length")
        if n > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("sample times must be strictly increasing")

    def __len__(self):
        return len(self.times)

    def columns(self) -> dict[str, np.ndarray]:
        return {
            "t": self.times, "S_L_q": self.S_L_quantum, "S_V_q": self.S_V_quantum,
            "S_L_cl": self.S_L_classical, "S_V_cl": self.S_V_classical,
            "norm_drift": self.norm_drift, "energy_drift": self.energy_drift,
            "oor_frac": self.out_of_range_fraction,
        }

    def saturation_window(self, fraction: float = 0.25) -> slice:
        n = len(self.times)
        return slice(n - max(1, int(round(fraction * n))), n)

    def saturation_mean(self, column: str, fraction: float = 0.25) -> float:
        return float(np.mean(self.columns()[column][self.saturation_window(fraction)]))


def initial_state_spec(cfg: ScenarioConfig, companion: bool = False):
    p = cfg.params
    kind = cfg.state_kind
    if companion:
        return states.cat_companion(p, cfg.E0, cfg.x0)
    if kind == "gaussian_diagonal":
        return states.diagonal_gaussian(p, cfg.E0)
    if kind == "gaussian_channel_x":
        return states.channel_gaussian(p, cfg.E0, "x")
    if kind == "gaussian_channel_y":
        return states.channel_gaussian(p, cfg.E0, "y")
    if kind == "cat_channel":
        return states.channel_cat(p, cfg.E0, cfg.x0)
    if kind == "bell":
        return states.channel_bell(p, cfg.E0, cfg.x0, cfg.y0)
    raise AssertionError(kind)


def run_quantum(cfg: ScenarioConfig, spec, workers: int | None = None) -> dict:
    """Quantum branch: propagate, sampling entropies, norm and energy."""
    cfg = cfg.resolved()
    params = cfg.params
    grid = cfg.grid()
    psi0 = states.build_state(spec, grid)
    every_q, _ = steps_per_sample(cfg)
    n_samples = int(round(cfg.t_final / cfg.dt_quantum)) // every_q + 1
    spot = set(np.linspace(0, n_samples - 1, min(SUBSYSTEM_SPOT_CHECKS, n_samples)).astype(int))
    gaps = []
    counter = iter(range(n_samples + 1))

    def observe(t, psi):
        rec = rdm.entropies(psi)
        if next(counter) in spot:
            other = rdm.entropies(psi, keep="y")
            gaps.append(max(abs(rec["S_L"] - other["S_L"]), abs(rec["S_V"] - other["S_V"])))
        rec["norm"] = psi.norm2()
        rec["energy"] = qdyn.expectation_energy(psi, params)
        return rec

    run = qdyn.propagate(psi0, params, cfg.t_final, cfg.dt_quantum, every_q, [observe],
                         workers=workers)
    norm = run.column("norm")
    energy = run.column("energy")
    return {
        "times": np.array(run.times),
        "S_L": run.column("S_L"), "S_V": run.column("S_V"),
        "norm_drift": np.abs(norm - norm[0]),
        "energy_drift": np.abs(energy - energy[0]) / abs(energy[0]),
        "purity_gap": float(run.column("purity_gap").max()),
        "energy0": float(energy[0]),
        "subsystem_gap": max(gaps) if gaps else 0.0,
        "final": run.final,
    }


def run_classical(cfg: ScenarioConfig, spec, workers: int = 1) -> dict:
    cfg = cfg.resolved()
    params = cfg.params
    grid = cfg.grid()
    _, every_c = steps_per_sample(cfg)
    ens = states.sample_ensemble(states.classical_analog(spec, cfg.hbar), cfg.n_traj, cfg.seed)

    def observe(t, x, px):
        return centropy.entropies(x, px, grid, cfg.hbar, cfg.pixel_coarsen)

    times, records, _ = cdyn.propagate_ensemble(ens, params, cfg.t_final, cfg.dt_classical,
                                                every_c, observe, workers)
    col = lambda k: np.array([r[k] for r in records])  # noqa: E731
    return {"times": np.array(times), "S_L_cl": col("S_L_cl"), "S_V_cl": col("S_V_cl"),
            "oor_frac": col("oor_frac"), "energy_error": float(col("energy_error").max())}


def _run_pair(cfg: ScenarioConfig, spec, workers: int, strict: bool, label: str) -> EntropySeries:
    t0 = time.perf_counter()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=2) as pool:
            fq = pool.submit(run_quantum, cfg, spec, None)
            fc = pool.submit(run_classical, cfg, spec, workers)
            q, c = fq.result(), fc.result()
    else:
        q = run_quantum(cfg, spec, None)
        c = run_classical(cfg, spec, 1)
    if not np.allclose(q["times"], c["times"], rtol=0, atol=1e-9):
        raise NumericalIntegrityError("quantum and classical sample clocks diverged", "clock")
    diagnostics = {
        "max_norm_drift": float(q["norm_drift"].max()),
        "max_energy_drift": float(q["energy_drift"].max()),
        "max_classical_energy_error": c["energy_error"],
        "max_purity_gap": q["purity_gap"],
        "energy0": q["energy0"],
        "subsystem_gap": q["subsystem_gap"],
        "elapsed_s": time.perf_counter() - t0,
    }
    log.info("%s: %s", label, diagnostics)
    if strict:
        check_integrity(diagnostics)
    return EntropySeries(q["times"], q["S_L"], q["S_V"], c["S_L_cl"], c["S_V_cl"],
                         q["norm_drift"], q["energy_drift"], c["oor_frac"], diagnostics,
                         label=label)


def check_integrity(d: dict) -> None:
    limits = (("max_norm_drift", NORM_DRIFT_LIMIT, "norm"),
              ("max_energy_drift", ENERGY_DRIFT_LIMIT, "energy"),
              ("max_classical_energy_error", CLASSICAL_ENERGY_LIMIT, "classical_energy"),
              ("subsystem_gap", SUBSYSTEM_LIMIT, "subsystem"))
    for key, limit, code in limits:
        if d[key] > limit:
            raise NumericalIntegrityError(f"{key} = {d[key]:.3e} exceeds {limit:g}", code)


def run_scenario(cfg: ScenarioConfig, workers: int | None = None,
                 strict: bool = True) -> EntropySeries:
    """Validate, then run the quantum and classical branches on the same clock."""
    cfg = validate(cfg)
    workers = workers or default_workers()
    series = _run_pair(cfg, initial_state_spec(cfg), workers, strict, cfg.name)
    if cfg.companion:
        series.companion = _run_pair(cfg, initial_state_spec(cfg, companion=True),
                                     workers, strict, f"{cfg.name}-companion")
    return series
