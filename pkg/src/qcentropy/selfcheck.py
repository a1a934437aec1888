"""Analytic t = 0 anchors and convergence checks, runnable from the CLI."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import centropy, qdyn, rdm, states
from .config import ScenarioConfig
from .model import CHAOTIC_ALPHA

TIME_REVERSAL_LIMIT = 1e-8
DT_HALVING_LIMIT = 1e-3
PURITY_LIMIT = 1e-10


@dataclass
class CheckResult:
    name: str
    value: float
    target: float
    tolerance: float
    relation: str = "abs"  # "abs": |value - target| <= tol; "max": value <= tol

    @property
    def passed(self) -> bool:
        if self.relation == "max":
            return self.value <= self.tolerance
        return abs(self.value - self.target) <= self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if self.relation == "max":
            return f"{status}  {self.name}: {self.value:.3e} <= {self.tolerance:g}"
        return (f"{status}  {self.name}: {self.value:.6g} "
                f"(target {self.target:.6g} +- {self.tolerance:g})")

    def as_dict(self) -> dict:
        return {**asdict(self), "passed": self.passed}


def _anchor_cfg(kind: str, E0: float = 15.0) -> ScenarioConfig:
    return ScenarioConfig(f"anchor-{kind}", CHAOTIC_ALPHA, E0, kind).resolved()


def anchor_entropies(spec, cfg: ScenarioConfig, n_traj: int, seed: int = 0) -> dict:
    """Grid quantum entropies and sampled classical entropies of ``spec`` at t = 0."""
    grid = cfg.grid()
    q = rdm.entropies(states.build_state(spec, grid))
    ens = states.sample_ensemble(states.classical_analog(spec, cfg.hbar), n_traj, seed)
    c = centropy.entropies(ens.states[:, 0], ens.states[:, 2], grid, cfg.hbar)
    return {**q, **c}


def anchor_checks(n_traj: int = 100_000) -> list[CheckResult]:
    out = []
    cfg = _anchor_cfg("gaussian_diagonal")
    e = anchor_entropies(states.diagonal_gaussian(cfg.params, cfg.E0), cfg, n_traj)
    out += [CheckResult("gaussian S_L(0)", e["S_L"], 0.0, 1e-6),
            CheckResult("gaussian S_V(0)", e["S_V"], 0.0, 1e-4),
            CheckResult("gaussian S_L_cl(0)", e["S_L_cl"], 0.0, 0.02),
            CheckResult("gaussian S_V_cl(0)", e["S_V_cl"], 1.0 - math.log(2.0), 0.02)]

    cfg = _anchor_cfg("cat_channel")
    e = anchor_entropies(states.channel_cat(cfg.params, cfg.E0, cfg.x0), cfg, n_traj)
    out += [CheckResult("cat S_L(0)", e["S_L"], 0.0, 1e-6),
            CheckResult("cat S_L_cl(0)", e["S_L_cl"], 0.5, 0.02),
            CheckResult("cat S_V_cl(0)", e["S_V_cl"], 1.0, 0.03)]

    cfg = _anchor_cfg("bell")
    spec = states.channel_bell(cfg.params, cfg.E0, cfg.x0, cfg.y0)
    q = rdm.entropies(states.build_state(spec, cfg.grid()))
    out += [CheckResult("bell S_L(0)", q["S_L"], 0.5, 1e-4),
            CheckResult("bell S_V(0)", q["S_V"], math.log(2.0), 1e-4)]
    same = states.Packet(0.0, 0.0)
    q = rdm.entropies(states.build_state(states.BellSpec.swapped_pair(same, same), cfg.grid()))
    out += [CheckResult("coincident bell S_L(0)", q["S_L"], 0.0, 1e-6),
            CheckResult("coincident bell S_V(0)", q["S_V"], 0.0, 1e-6)]
    return out


def _entropy_curve(cfg: ScenarioConfig, dt: float, t_final: float, every_t: float):
    psi0 = states.build_state(states.diagonal_gaussian(cfg.params, cfg.E0), cfg.grid())
    every = int(round(every_t / dt))
    run = qdyn.propagate(psi0, cfg.params, t_final, dt, every,
                         [lambda t, psi: rdm.entropies(psi)])
    return run


def convergence_checks(t_final: float = 10.0, E0: float = 15.0) -> list[CheckResult]:
    """dt- and dx-halving, time reversal and matrix-vs-spectrum purity on a chaotic diagonal run."""
    cfg = _anchor_cfg("gaussian_diagonal", E0)
    dt = cfg.dt_quantum
    coarse = _entropy_curve(cfg, dt, t_final, 0.25)
    fine = _entropy_curve(cfg, dt / 2, t_final, 0.25)
    change = max(np.max(np.abs(coarse.column(k) - fine.column(k))) for k in ("S_L", "S_V"))
    gap = max(coarse.column("purity_gap").max(), fine.column("purity_gap").max())

    doubled = cfg.replace(grid_n=2 * cfg.grid_n)
    dense = _entropy_curve(doubled, dt, min(t_final, 5.0), 0.25)
    n_dense = len(dense.times)
    dx_change = max(np.max(np.abs(coarse.column(k)[:n_dense] - dense.column(k)))
                    for k in ("S_L", "S_V"))

    psi0 = states.build_state(states.diagonal_gaussian(cfg.params, cfg.E0), cfg.grid())
    plan = qdyn.make_plan(cfg.params, psi0, dt)
    n = int(round(min(t_final, 5.0) / dt))
    back = qdyn.evolve(plan.reversed(), qdyn.evolve(plan, psi0, n), n)
    err = float(np.max(np.abs(back.values - psi0.values)))
    return [CheckResult("dt-halving entropy change", change, 0.0, DT_HALVING_LIMIT, "max"),
            CheckResult("dx-halving entropy change", dx_change, 0.0, DT_HALVING_LIMIT, "max"),
            CheckResult("time-reversal recovery", err, 0.0, TIME_REVERSAL_LIMIT, "max"),
            CheckResult("purity matrix vs eigenvalues", gap, 0.0, PURITY_LIMIT, "max")]


def run_selfcheck(n_traj: int = 100_000, quick: bool = False) -> list[CheckResult]:
    return anchor_checks(n_traj) + convergence_checks(t_final=2.0 if quick else 10.0)
