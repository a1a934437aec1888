"""Split-operator propagation of the joint wavefunction."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.fft

from .errors import ConfigError, NumericalIntegrityError
from .grid import ComplexField2D, forward_transform, momentum_norm2
from .model import ModelParams, potential

NAN_CHECK_EVERY = 100

Observer = Callable[[float, ComplexField2D], dict]


@dataclass
class PropagatorPlan:
    """Precomputed phase factors for one Strang step exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2)."""

    params: ModelParams
    dt: float
    half_potential_phase: np.ndarray = field(repr=False)
    kinetic_phase: np.ndarray = field(repr=False)
    workers: int | None = None

    @property
    def full_potential_phase(self) -> np.ndarray:
        return self.half_potential_phase * self.half_potential_phase

    def reversed(self) -> "PropagatorPlan":
        """Plan for propagating backwards in time by dt."""
        return PropagatorPlan(self.params, -self.dt, self.half_potential_phase.conj(),
                              self.kinetic_phase.conj(), self.workers)


def make_plan(params: ModelParams, field: ComplexField2D, dt: float,
              workers: int | None = None) -> PropagatorPlan:
    if not (math.isfinite(dt) and dt >= 0):
        raise ConfigError(f"time step must be non-negative, got {dt}", "dt")
    hbar = params.hbar
    X, Y = field.meshgrid()
    V = potential(params, X, Y)
    px = field.grid_x.p
    py = field.grid_y.p
    T = (px[:, None] ** 2 + py[None, :] ** 2) / (2.0 * params.m)
    return PropagatorPlan(params, dt, np.exp(-0.5j * dt / hbar * V),
                          np.exp(-1j * dt / hbar * T), workers)


def step(plan: PropagatorPlan, psi: ComplexField2D) -> ComplexField2D:
    """One symmetric split step: V/2, FFT, T, inverse FFT, V/2."""
    w = plan.workers
    v = psi.values * plan.half_potential_phase
    v = scipy.fft.ifft2(scipy.fft.fft2(v, overwrite_x=True, workers=w) * plan.kinetic_phase,
                        overwrite_x=True, workers=w)
    v *= plan.half_potential_phase
    return ComplexField2D(psi.grid_x, psi.grid_y, v)


def evolve(plan: PropagatorPlan, psi: ComplexField2D, n_steps: int) -> ComplexField2D:
    """``n_steps`` Strang steps, fusing adjacent potential half-steps."""
    if n_steps <= 0:
        return psi.copy()
    w = plan.workers
    full = plan.full_potential_phase
    v = psi.values * plan.half_potential_phase
    for k in range(n_steps):
        v = scipy.fft.fft2(v, overwrite_x=True, workers=w)
        v *= plan.kinetic_phase
        v = scipy.fft.ifft2(v, overwrite_x=True, workers=w)
        if k + 1 < n_steps:
            v *= full
        if (k + 1) % NAN_CHECK_EVERY == 0 and not np.isfinite(v[::7, ::7]).all():
            raise NumericalIntegrityError(
                "non-finite wavefunction values; dt too large or grid too small", "nan")
    v *= plan.half_potential_phase
    if not np.isfinite(v).all():
        raise NumericalIntegrityError(
            "non-finite wavefunction values; dt too large or grid too small", "nan")
    return ComplexField2D(psi.grid_x, psi.grid_y, v)


@dataclass
class QuantumRun:
    times: list[float]
    records: list[dict]
    final: ComplexField2D

    def column(self, key: str) -> np.ndarray:
        return np.array([r[key] for r in self.records])


def propagate(psi0: ComplexField2D, params: ModelParams, t_final: float, dt: float,
              sample_every: int = 1, observers: Sequence[Observer] = (),
              workers: int | None = None) -> QuantumRun:
    """Propagate to ``t_final`` and call every observer each ``sample_every`` steps.

    Observers receive (t, psi) and return a dict merged into that sample's
    record. The initial state is always sampled; t_final = 0 samples only it.
    """
    if t_final < 0 or dt <= 0 or sample_every < 1:
        raise ConfigError("need t_final >= 0, dt > 0 and sample_every >= 1", "dt")
    n_steps = int(round(t_final / dt))
    plan = make_plan(params, psi0, dt, workers)
    psi = psi0
    times, records = [], []

    def sample(t):
        rec = {}
        for obs in observers:
            rec.update(obs(t, psi))
        times.append(t)
        records.append(rec)

    sample(0.0)
    done = 0
    while done < n_steps:
        chunk = min(sample_every, n_steps - done)
        psi = evolve(plan, psi, chunk)
        done += chunk
        sample(done * dt)
    return QuantumRun(times, records, psi)


def expectation_kinetic(psi: ComplexField2D, params: ModelParams) -> float:
    phi = forward_transform(psi)
    px = psi.grid_x.p
    py = psi.grid_y.p
    T = (px[:, None] ** 2 + py[None, :] ** 2) / (2.0 * params.m)
    dens = np.abs(phi) ** 2
    return float(np.sum(dens * T) * psi.grid_x.dp * psi.grid_y.dp
                 / momentum_norm2(phi, psi.grid_x, psi.grid_y))


def expectation_potential(psi: ComplexField2D, params: ModelParams) -> float:
    X, Y = psi.meshgrid()
    dens = np.abs(psi.values) ** 2
    return float(np.sum(dens * potential(params, X, Y)) / np.sum(dens))


def expectation_energy(psi: ComplexField2D, params: ModelParams) -> float:
    """<H> = <T> (momentum-space quadrature) + <V> (position-space quadrature)."""
    return expectation_kinetic(psi, params) + expectation_potential(psi, params)


def norm_observer(t: float, psi: ComplexField2D) -> dict:
    return {"norm": psi.norm2()}


def energy_observer(params: ModelParams) -> Observer:
    def observe(t: float, psi: ComplexField2D) -> dict:
        return {"energy": expectation_energy(psi, params)}
    return observe


def position_moments(psi: ComplexField2D) -> dict:
    """<x>, <y>, <x^2>, <y^2> on the grid."""
    X, Y = psi.meshgrid()
    dens = np.abs(psi.values) ** 2
    dens = dens / dens.sum()
    return {"x": float(np.sum(dens * X)), "y": float(np.sum(dens * Y)),
            "x2": float(np.sum(dens * X * X)), "y2": float(np.sum(dens * Y * Y))}


def momentum_moments(psi: ComplexField2D) -> dict:
    phi = forward_transform(psi)
    dens = np.abs(phi) ** 2
    dens = dens / dens.sum()
    px = psi.grid_x.p[:, None]
    py = psi.grid_y.p[None, :]
    return {"px": float(np.sum(dens * px)), "py": float(np.sum(dens * py))}
