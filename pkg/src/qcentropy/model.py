"""Coupled quartic oscillators: parameters, Hamiltonian and closed-form orbit quantities.

    H = (px^2 + py^2) / 2m + (beta/4)(x^4 + y^4) + (alpha/2) x^2 y^2

All quantities are in the arbitrary units where m = hbar = 1 by default.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError

REGULAR_ALPHA = 0.03
CHAOTIC_ALPHA = 1.0


@dataclass(frozen=True)
class ModelParams:
    m: float = 1.0
    hbar: float = 1.0
    alpha: float = REGULAR_ALPHA
    beta: float = 0.01
    sigma2: float = 0.5

    def __post_init__(self):
        for name in ("m", "hbar", "beta", "sigma2"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be positive, got {value!r}")
        if not (np.isfinite(self.alpha) and self.alpha >= 0):
            raise ConfigError(f"alpha must be non-negative, got {self.alpha!r}")

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    @property
    def sigma_p(self) -> float:
        """Momentum width of a minimum-uncertainty packet of position width sigma."""
        return self.hbar / (2.0 * self.sigma)


@dataclass(frozen=True)
class PhasePoint:
    x: float
    y: float
    px: float
    py: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.px, self.py)):
            raise ConfigError(f"phase point has non-finite coordinates: {self}")


def potential(params: ModelParams, x, y):
    x2 = x * x
    y2 = y * y
    return 0.25 * params.beta * (x2 * x2 + y2 * y2) + 0.5 * params.alpha * x2 * y2


def hamiltonian(params: ModelParams, p: PhasePoint) -> float:
    kinetic = (p.px * p.px + p.py * p.py) / (2.0 * params.m)
    return kinetic + potential(params, p.x, p.y)


def gradient(params: ModelParams, x, y):
    """Forces (-dV/dx, -dV/dy). Works elementwise on arrays."""
    x2 = x * x
    y2 = y * y
    fx = -x * (params.beta * x2 + params.alpha * y2)
    fy = -y * (params.beta * y2 + params.alpha * x2)
    return fx, fy


def hyp2f1_series(a: float, b: float, c: float, z: float, tol: float = 1e-12,
                  max_terms: int = 100_000) -> float:
    """Gauss hypergeometric 2F1(a, b; c; z) for 0 <= z <= 1.

    For z < 1 the power series is summed until a term drops below ``tol``.
    At z = 1 the series converges only algebraically, so Gauss's summation
    theorem is used instead; it requires c - a - b > 0.
    """
    if not 0.0 <= z <= 1.0:
        raise DomainError(f"2F1 series evaluated only for 0 <= z <= 1, got z={z}")
    if c <= 0 and float(c).is_integer():
        raise DomainError("c must not be a non-positive integer")
    if z == 1.0:
        if c - a - b <= 0:
            raise DomainError(f"2F1 diverges at z=1 for c-a-b={c - a - b} <= 0")
        return (math.gamma(c) * math.gamma(c - a - b)
                / (math.gamma(c - a) * math.gamma(c - b)))
    total = 1.0
    term = 1.0
    for k in range(max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        total += term
        if abs(term) < tol:
            break
    return total


# Turning points are closed-form roots of V = E0 along the orbit direction.

def diagonal_turning_point(params: ModelParams, E0: float) -> float:
    """x+ of the periodic orbit along y = x: ((beta+alpha)/2) x^4 = E0."""
    _check_energy(E0)
    return (2.0 * E0 / (params.beta + params.alpha)) ** 0.25


def channel_turning_point(params: ModelParams, E0: float) -> float:
    """x'+ of the orbit along the x axis (y = 0): (beta/4) x^4 = E0."""
    _check_energy(E0)
    return (4.0 * E0 / params.beta) ** 0.25


def _quartic_half_period(m: float, e_axis: float, x_turn: float) -> float:
    # integral_{-x+}^{x+} dx / v(x), with v(0) = sqrt(2 e_axis / m)
    # and v(x) = v(0) sqrt(1 - (x/x+)^4).
    f1 = hyp2f1_series(0.25, 0.5, 1.25, 1.0)
    return 2.0 * x_turn * f1 / math.sqrt(2.0 * e_axis / m)


def half_period_diagonal(params: ModelParams, E0: float) -> float:
    """Time between successive passages through the origin along y = x.

    Each axis carries E0/2 of kinetic energy at the origin.
    """
    return _quartic_half_period(params.m, 0.5 * E0, diagonal_turning_point(params, E0))


def half_period_channel(params: ModelParams, E0: float) -> float:
    """Half-period of the orbit along the x axis; independent of alpha."""
    return _quartic_half_period(params.m, E0, channel_turning_point(params, E0))


def half_period_diagonal_approx(params: ModelParams, E0: float) -> float:
    _check_energy(E0)
    # mass enters as m^-2 inside the bracket, matching tau ~ sqrt(m)
    return 3.12 * ((params.beta + params.alpha) * E0 / params.m ** 2) ** -0.25


def half_period_channel_approx(params: ModelParams, E0: float) -> float:
    _check_energy(E0)
    return 2.62 * (params.beta * E0 / params.m ** 2) ** -0.25


def spreading_extent(params: ModelParams, E0: float) -> float:
    """Distance between the two turning points of the diagonal orbit."""
    return 2.0 * diagonal_turning_point(params, E0)


def free_spreading_width(params: ModelParams, t):
    """Width sigma(t) of a freely spreading Gaussian packet."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("free spreading width needs t >= 0")
    tau = 2.0 * params.m * params.sigma2 / params.hbar
    out = params.sigma * np.sqrt(1.0 + (t / tau) ** 2)
    return float(out) if out.ndim == 0 else out


def spreading_time(params: ModelParams, width: float) -> float:
    """Time at which a free packet reaches width ``width`` (inverse of sigma(t))."""
    if width < params.sigma:
        raise DomainError(f"width {width} is below the initial width {params.sigma}")
    tau = 2.0 * params.m * params.sigma2 / params.hbar
    return tau * math.sqrt((width / params.sigma) ** 2 - 1.0)


def diagonal_spreading_time(params: ModelParams, E0: float, full_extent: bool = False) -> float:
    """Time for a free packet to cover the diagonal orbit.

    With ``full_extent=False`` the target width is the turning-point amplitude
    x+; with ``True`` it is the full span x+ - x-.
    """
    x_turn = diagonal_turning_point(params, E0)
    return spreading_time(params, 2.0 * x_turn if full_extent else x_turn)


def _check_energy(E0):
    if not (np.isfinite(E0) and E0 > 0):
        raise DomainError(f"energy must be positive, got {E0!r}")
