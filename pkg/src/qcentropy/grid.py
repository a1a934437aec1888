"""Uniform position grids, their FFT momentum lattices, and the 2D field container."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from .errors import ConfigError


@dataclass(frozen=True)
class Grid1D:
    """Half-open grid [x_min, x_max) with n points and spacing dx.

    ``p`` is the conjugate momentum lattice in FFT order (zero first).
    """

    n: int
    x_min: float
    x_max: float
    hbar: float = 1.0

    def __post_init__(self):
        if self.n < 8 or self.n & (self.n - 1):
            raise ConfigError(f"grid size must be a power of two >= 8, got {self.n}", "grid")
        if not self.x_max > self.x_min:
            raise ConfigError(f"x_max ({self.x_max}) must exceed x_min ({self.x_min})", "grid")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def dp(self) -> float:
        return 2.0 * math.pi * self.hbar / (self.n * self.dx)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)

    @property
    def p(self) -> np.ndarray:
        return 2.0 * math.pi * self.hbar * scipy.fft.fftfreq(self.n, d=self.dx)

    @property
    def p_sorted(self) -> np.ndarray:
        return np.sort(self.p)

    def x_edges(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n + 1)

    def p_edges(self) -> np.ndarray:
        """Momentum bin edges: n bins of width dp spanning [-p_max, p_max)."""
        return -self.p_max + self.dp * np.arange(self.n + 1)

    @property
    def p_max(self) -> float:
        return math.pi * self.hbar / self.dx


def make_grid(n: int, x_min: float, x_max: float, hbar: float = 1.0) -> Grid1D:
    return Grid1D(int(n), float(x_min), float(x_max), float(hbar))


def symmetric_grid(n: int, half_width: float, hbar: float = 1.0) -> Grid1D:
    return make_grid(n, -half_width, half_width, hbar)


@dataclass
class ComplexField2D:
    """Joint wavefunction psi(x, y); axis 0 is x, axis 1 is y."""

    grid_x: Grid1D
    grid_y: Grid1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (self.grid_x.n, self.grid_y.n):
            raise ConfigError(
                f"field shape {self.values.shape} does not match grids "
                f"({self.grid_x.n}, {self.grid_y.n})", "grid")

    @property
    def cell(self) -> float:
        return self.grid_x.dx * self.grid_y.dx

    def norm2(self) -> float:
        return float(np.vdot(self.values, self.values).real * self.cell)

    def copy(self) -> "ComplexField2D":
        return ComplexField2D(self.grid_x, self.grid_y, self.values.copy())

    def meshgrid(self):
        return np.meshgrid(self.grid_x.x, self.grid_y.x, indexing="ij")

    def swapped(self) -> "ComplexField2D":
        """The same state with the roles of x and y exchanged."""
        return ComplexField2D(self.grid_y, self.grid_x, self.values.T.copy())


# Transform convention: phi(p) = sum_x psi(x) dx e^{-ipx/hbar} / sqrt(2 pi hbar),
# so that sum |phi|^2 dp equals sum |psi|^2 dx (Parseval).

def _momentum_scale(field: ComplexField2D) -> float:
    gx, gy = field.grid_x, field.grid_y
    return gx.dx * gy.dx / (2.0 * math.pi * math.sqrt(gx.hbar * gy.hbar))


def forward_transform(field: ComplexField2D, workers: int | None = None) -> np.ndarray:
    """Momentum-space amplitudes on the (p_x, p_y) lattice, FFT ordered.

    The x-offset phase e^{-i p x_min} is omitted; it has unit modulus and
    cancels in the round trip, so only |phi|^2 is physically meaningful here.
    """
    return scipy.fft.fft2(field.values, workers=workers) * _momentum_scale(field)


def inverse_transform(phi: np.ndarray, grid_x: Grid1D, grid_y: Grid1D,
                      workers: int | None = None) -> ComplexField2D:
    out = ComplexField2D(grid_x, grid_y, np.zeros((grid_x.n, grid_y.n), complex))
    out.values = scipy.fft.ifft2(phi, workers=workers) / _momentum_scale(out)
    return out


def momentum_norm2(phi: np.ndarray, grid_x: Grid1D, grid_y: Grid1D) -> float:
    return float(np.vdot(phi, phi).real * grid_x.dp * grid_y.dp)


@dataclass
class PhaseSpaceHistogram:
    """Integer box counts of (x, p_x) points on a pixel lattice.

    ``counts[i, j]`` is the number of points in x bin i and momentum bin j
    (momentum bins in ascending order). Points outside the window are not
    binned but tallied in ``out_of_range``.
    """

    x_edges: np.ndarray
    p_edges: np.ndarray
    counts: np.ndarray
    out_of_range: int = 0

    @property
    def dx(self) -> float:
        return float(self.x_edges[1] - self.x_edges[0])

    @property
    def dp(self) -> float:
        return float(self.p_edges[1] - self.p_edges[0])

    @property
    def in_range(self) -> int:
        return int(self.counts.sum())

    @property
    def total(self) -> int:
        return self.in_range + int(self.out_of_range)

    @property
    def out_of_range_fraction(self) -> float:
        return self.out_of_range / self.total if self.total else 0.0

    def density(self) -> np.ndarray:
        """Counts normalised by the total number of points (in and out of range)."""
        return self.counts / (self.total * self.dx * self.dp)
