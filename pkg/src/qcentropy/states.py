"""Initial states: Gaussian, cat and Bell-type wave packets and their classical analogs.

Every state here is a superposition of at most two product terms

    Psi(x, y) = sum_i c_i g(x; x_i, px_i) g(y; y_i, py_i)

with g(x; x0, p0) = (2 pi s^2)^(-1/4) exp(-(x - x0)^2 / 4 s^2 + i p0 x / hbar).
Keeping that structure explicit gives closed forms for the normalisation,
the Schmidt weights and the reduced Wigner function at t = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .grid import ComplexField2D, Grid1D
from .model import ModelParams

# Trajectories are generated in fixed-size chunks, each with its own
# SeedSequence child; content therefore never depends on the worker count.
SAMPLE_CHUNK = 16384


@dataclass(frozen=True)
class Packet:
    """Centre (q, p) of a one-dimensional Gaussian packet."""

    q: float
    p: float


@dataclass(frozen=True)
class GaussianSpec:
    x0: float
    y0: float
    px0: float
    py0: float
    sigma2: float = 0.5

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ConfigError("sigma2 must be positive", "state")


@dataclass(frozen=True)
class CatSpec:
    """Two packets in X, one packet in Y (the environment)."""

    packet1: Packet
    packet2: Packet
    environment: Packet
    sigma2: float = 0.5
    allow_coincident: bool = False

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ConfigError("sigma2 must be positive", "state")
        if self.packet1 == self.packet2 and not self.allow_coincident:
            raise ConfigError("cat packets coincide; pass allow_coincident=True "
                              "for the localized limit", "state")


@dataclass(frozen=True)
class BellSpec:
    """Term 1 is x1 (x) y1, term 2 is x2 (x) y2."""

    x1: Packet
    y1: Packet
    x2: Packet
    y2: Packet
    sigma2: float = 0.5

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ConfigError("sigma2 must be positive", "state")

    @classmethod
    def swapped_pair(cls, first: Packet, second: Packet, sigma2: float = 0.5) -> "BellSpec":
        """The default pairing: X sits at ``first`` while Y sits at ``second``, and vice versa."""
        return cls(x1=first, y1=second, x2=second, y2=first, sigma2=sigma2)


@dataclass(frozen=True)
class GaussianComponent:
    weight: float
    x: float
    px: float
    y: float
    py: float
    var_q: float
    var_p: float


@dataclass(frozen=True)
class ClassicalDensitySpec:
    components: tuple[GaussianComponent, ...]

    def __post_init__(self):
        w = np.array([c.weight for c in self.components])
        if len(w) == 0 or np.any(w <= 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ConfigError("classical component weights must be positive and sum to 1", "state")

    def x_marginal(self):
        """Components projected onto the (x, p_x) plane."""
        return tuple((c.weight, c.x, c.px, c.var_q, c.var_p) for c in self.components)


@dataclass
class TrajectoryEnsemble:
    """Swarm of phase points; ``states[:, k]`` holds x, y, px, py for k = 0..3."""

    states: np.ndarray
    seed: int | None = None
    t: float = 0.0
    components: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.states = np.ascontiguousarray(self.states, dtype=np.float64)
        if self.states.ndim != 2 or self.states.shape[1] != 4 or len(self.states) < 1:
            raise ConfigError("ensemble needs an (n >= 1, 4) array of phase points", "state")
        if not np.all(np.isfinite(self.states)):
            raise ConfigError("ensemble contains non-finite coordinates", "state")

    @property
    def n(self) -> int:
        return len(self.states)

    def copy(self) -> "TrajectoryEnsemble":
        return TrajectoryEnsemble(self.states.copy(), self.seed, self.t, self.components)


# --- term representation -----------------------------------------------------

def product_terms(spec):
    """Return (coefficients, x packets, y packets, sigma2) for a state spec."""
    if isinstance(spec, GaussianSpec):
        return (np.array([1.0 + 0j]), [Packet(spec.x0, spec.px0)],
                [Packet(spec.y0, spec.py0)], spec.sigma2)
    if isinstance(spec, CatSpec):
        xs = [spec.packet1, spec.packet2]
        ys = [spec.environment, spec.environment]
    elif isinstance(spec, BellSpec):
        xs = [spec.x1, spec.x2]
        ys = [spec.y1, spec.y2]
    else:
        raise TypeError(f"unsupported state spec {type(spec).__name__}")
    sx = packet_overlap(xs[0], xs[1], spec.sigma2)
    sy = packet_overlap(ys[0], ys[1], spec.sigma2)
    norm2 = 1.0 + (sx * sy).real
    amp = 1.0 / math.sqrt(2.0 * norm2)
    return np.array([amp, amp], dtype=complex), xs, ys, spec.sigma2


def packet_overlap(a: Packet, b: Packet, sigma2: float, hbar: float = 1.0) -> complex:
    """<g_a|g_b> for two normalised Gaussian packets of equal width."""
    dq = a.q - b.q
    dp = b.p - a.p
    qbar = 0.5 * (a.q + b.q)
    mag = math.exp(-dq * dq / (8.0 * sigma2) - sigma2 * dp * dp / (2.0 * hbar * hbar))
    return mag * complex(math.cos(dp * qbar / hbar), math.sin(dp * qbar / hbar))


def normalization_constant(spec) -> float:
    """A in Psi = (A / sqrt 2)(...) for cat and Bell states; 1 for a Gaussian."""
    coeffs, *_ = product_terms(spec)
    if len(coeffs) == 1:
        return 1.0
    return float(abs(coeffs[0]) * math.sqrt(2.0))


def _packet_on_grid(grid: Grid1D, packet: Packet, sigma2: float) -> np.ndarray:
    x = grid.x
    norm = (2.0 * math.pi * sigma2) ** -0.25
    return norm * np.exp(-(x - packet.q) ** 2 / (4.0 * sigma2) + 1j * packet.p * x / grid.hbar)


def _check_coverage(grid: Grid1D, packets, sigma2: float, axis: str):
    margin = 5.0 * math.sqrt(sigma2)
    for pk in packets:
        if pk.q - margin < grid.x_min or pk.q + margin > grid.x_max:
            raise ConfigError(f"{axis} packet centred at {pk.q} is not covered by the grid "
                              f"[{grid.x_min}, {grid.x_max}) with a 5 sigma margin", "grid")
        if abs(pk.p) + 5.0 * grid.hbar / (2.0 * math.sqrt(sigma2)) > grid.p_max:
            raise ConfigError(f"{axis} packet momentum {pk.p} exceeds the grid's momentum "
                              f"window +-{grid.p_max:.3f}", "grid")


def build_state(spec, grid_x: Grid1D, grid_y: Grid1D | None = None) -> ComplexField2D:
    grid_y = grid_y or grid_x
    coeffs, xs, ys, sigma2 = product_terms(spec)
    _check_coverage(grid_x, xs, sigma2, "x")
    _check_coverage(grid_y, ys, sigma2, "y")
    values = np.zeros((grid_x.n, grid_y.n), dtype=complex)
    for c, px, py in zip(coeffs, xs, ys):
        values += c * np.outer(_packet_on_grid(grid_x, px, sigma2),
                               _packet_on_grid(grid_y, py, sigma2))
    return ComplexField2D(grid_x, grid_y, values)


build_gaussian = build_state
build_cat = build_state
build_bell = build_state


# --- closed-form t = 0 entanglement ------------------------------------------

def schmidt_weights(spec) -> np.ndarray:
    """Eigenvalues of the reduced density matrix of X, in descending order.

    For Psi = sum_i c_i |a_i>|b_i>, the nonzero spectrum of rho_X equals that
    of the 2x2 matrix C G_a with C_ij = c_i c_j^* <b_j|b_i> and G_a the Gram
    matrix of the X packets.
    """
    coeffs, xs, ys, sigma2 = product_terms(spec)
    k = len(coeffs)
    ga = np.array([[packet_overlap(xs[i], xs[j], sigma2) for j in range(k)] for i in range(k)])
    gb = np.array([[packet_overlap(ys[i], ys[j], sigma2) for j in range(k)] for i in range(k)])
    c = np.outer(coeffs, coeffs.conj()) * gb.T
    lam = np.linalg.eigvals(c @ ga).real
    lam = np.clip(lam, 0.0, None)
    return np.sort(lam)[::-1]


def initial_quantum_entropies(spec) -> tuple[float, float]:
    """(S_L, S_V) of the reduced state of X at t = 0."""
    lam = schmidt_weights(spec)
    s_lin = 1.0 - float(np.sum(lam ** 2))
    nz = lam[lam > 1e-14]
    s_vn = float(-np.sum(nz * np.log(nz))) + 0.0
    return s_lin, s_vn


def classical_initial_linear_entropy(spec) -> float:
    """S_L^cl at t = 0 for the classical analog: (1 - g^2)/2 with g the X overlap."""
    density = classical_analog(spec)
    if len(density.components) == 1:
        return 0.0
    a, b = density.components
    gx = abs(packet_overlap(Packet(a.x, a.px), Packet(b.x, b.px), a.var_q))
    return 0.5 * (1.0 - gx * gx)


# --- reduced Wigner function ---------------------------------------------------

def _cross_wigner(x, p, a: Packet, b: Packet, sigma2: float, hbar: float):
    """Cross-Wigner transform W_ab(x, p) of two normalised packets."""
    qbar = 0.5 * (a.q + b.q)
    pbar = 0.5 * (a.p + b.p)
    envelope = np.exp(-(x - qbar) ** 2 / (2.0 * sigma2) - 2.0 * sigma2 * (p - pbar) ** 2 / hbar ** 2)
    phase = ((a.p - b.p) * x - (p - pbar) * (a.q - b.q)) / hbar
    return envelope * np.exp(1j * phase) / (math.pi * hbar)


def analytic_reduced_wigner(spec, x, px, hbar: float = 1.0):
    """Reduced Wigner function of X at t = 0, evaluated on arrays x, px."""
    coeffs, xs, ys, sigma2 = product_terms(spec)
    x = np.asarray(x, dtype=float)
    px = np.asarray(px, dtype=float)
    out = np.zeros(np.broadcast(x, px).shape, dtype=complex)
    for i in range(len(coeffs)):
        for j in range(len(coeffs)):
            env = packet_overlap(ys[j], ys[i], sigma2, hbar)
            out += coeffs[i] * np.conj(coeffs[j]) * env * _cross_wigner(x, px, xs[i], xs[j], sigma2, hbar)
    return out.real


# --- classical analog ----------------------------------------------------------

def classical_analog(spec, hbar: float = 1.0) -> ClassicalDensitySpec:
    """Drop the interference terms of the Wigner function; keep the Gaussian lobes.

    Each term becomes a phase-space Gaussian with Var(q) = sigma^2 and
    Var(p) = hbar^2 / 4 sigma^2. The A^2 prefactor is dropped, so two-term
    states give weights 1/2, 1/2 (merged into one when the terms coincide).
    """
    _, xs, ys, sigma2 = product_terms(spec)
    var_p = hbar * hbar / (4.0 * sigma2)
    centres = []
    for a, b in zip(xs, ys):
        key = (a.q, a.p, b.q, b.p)
        if key not in centres:
            centres.append(key)
    w = 1.0 / len(centres)
    return ClassicalDensitySpec(tuple(
        GaussianComponent(w, q, p, yq, yp, sigma2, var_p) for q, p, yq, yp in centres))


def _box_muller(rng: np.random.Generator, n: int) -> np.ndarray:
    """2n standard normals from n uniform pairs (basic Box-Muller transform)."""
    u1 = 1.0 - rng.random(n)  # (0, 1]
    u2 = rng.random(n)
    r = np.sqrt(-2.0 * np.log(u1))
    theta = 2.0 * math.pi * u2
    return np.concatenate([r * np.cos(theta), r * np.sin(theta)])


def _sample_chunk(density: ClassicalDensitySpec, n: int, seed: int, chunk: int):
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))
    weights = np.array([c.weight for c in density.components])
    if len(weights) > 1:
        u = rng.random(n)
        comp = np.searchsorted(np.cumsum(weights)[:-1], u, side="right")
    else:
        comp = np.zeros(n, dtype=np.intp)
    z = np.concatenate([_box_muller(rng, n), _box_muller(rng, n)]).reshape(4, n)
    means = np.array([[c.x, c.y, c.px, c.py] for c in density.components])
    scale = np.array([[math.sqrt(c.var_q)] * 2 + [math.sqrt(c.var_p)] * 2
                      for c in density.components])
    pts = means[comp] + scale[comp] * z.T
    return pts, comp


def sample_ensemble(density: ClassicalDensitySpec, n: int, seed: int) -> TrajectoryEnsemble:
    """Draw ``n`` phase points from the classical density.

    Chunk k of SAMPLE_CHUNK points uses PCG64 seeded by SeedSequence(seed,
    spawn_key=(k,)): a uniform selects the component, then Box-Muller normals
    give (x, y, px, py).
    """
    if n < 1:
        raise ConfigError("ensemble size must be at least 1", "state")
    pieces, comps = [], []
    for chunk, start in enumerate(range(0, n, SAMPLE_CHUNK)):
        pts, comp = _sample_chunk(density, min(SAMPLE_CHUNK, n - start), seed, chunk)
        pieces.append(pts)
        comps.append(comp)
    return TrajectoryEnsemble(np.concatenate(pieces), seed=seed, t=0.0,
                              components=np.concatenate(comps))


# --- scenario centres ------------------------------------------------------------

def offset_energy(params: ModelParams, E0: float, x0: float) -> float:
    """E0' = E0 - beta x0^4 / 4: kinetic energy left after displacing by x0."""
    e = E0 - 0.25 * params.beta * x0 ** 4
    if e < 0:
        raise ConfigError(f"offset x0={x0} leaves negative kinetic energy E0'={e:.4g}", "energy")
    return e


def diagonal_gaussian(params: ModelParams, E0: float) -> GaussianSpec:
    p = math.sqrt(params.m * E0)
    return GaussianSpec(0.0, 0.0, p, p, params.sigma2)


def channel_gaussian(params: ModelParams, E0: float, axis: str = "x") -> GaussianSpec:
    p = math.sqrt(2.0 * params.m * E0)
    if axis == "x":
        return GaussianSpec(0.0, 0.0, p, 0.0, params.sigma2)
    if axis == "y":
        return GaussianSpec(0.0, 0.0, 0.0, p, params.sigma2)
    raise ConfigError(f"channel axis must be 'x' or 'y', got {axis!r}", "state")


def channel_cat(params: ModelParams, E0: float, x0: float = 2.5) -> CatSpec:
    p = math.sqrt(2.0 * params.m * offset_energy(params, E0, x0))
    return CatSpec(Packet(-x0, p), Packet(x0, -p), Packet(0.0, 0.0), params.sigma2)


def cat_companion(params: ModelParams, E0: float, x0: float = 2.5) -> GaussianSpec:
    """Single Gaussian at the second cat packet, (x0, 0, -sqrt(2mE0'), 0)."""
    p = math.sqrt(2.0 * params.m * offset_energy(params, E0, x0))
    return GaussianSpec(x0, 0.0, -p, 0.0, params.sigma2)


def channel_bell(params: ModelParams, E0: float, x0: float = 2.5, y0: float = 2.5) -> BellSpec:
    """Packets at (x0, 0, px0, 0) and (0, y0, 0, py0) with px0 = py0 = -sqrt(2mE0')."""
    if x0 != y0:
        raise ConfigError("the swapped Bell pairing needs x0 == y0", "state")
    p = -math.sqrt(2.0 * params.m * offset_energy(params, E0, x0))
    return BellSpec.swapped_pair(Packet(x0, p), Packet(0.0, 0.0), params.sigma2)
