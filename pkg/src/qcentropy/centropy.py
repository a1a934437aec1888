"""Coarse-grained classical entropies from box counting on the (x, p_x) plane."""
from __future__ import annotations

import math
import warnings

import numpy as np

from .errors import ConfigError
from .grid import Grid1D, PhaseSpaceHistogram


class SubPlanckWarning(UserWarning):
    """Classical density concentrated below one 2*pi*hbar cell (negative linear entropy)."""


def pixel_edges(grid: Grid1D, coarsen: int = 1):
    """Pixel edges matched to the quantum lattice (dx, dp), optionally merged ``coarsen``-fold."""
    if coarsen < 1 or grid.n % coarsen:
        raise ConfigError(f"pixel coarsening {coarsen} must divide the grid size {grid.n}", "grid")
    return grid.x_edges()[::coarsen], grid.p_edges()[::coarsen]


def bin_snapshot(x, px, grid_x: Grid1D | None = None, *, x_edges=None, p_edges=None,
                 coarsen: int = 1) -> PhaseSpaceHistogram:
    """Histogram points on half-open pixels [e_i, e_{i+1}).

    A point exactly on an interior edge lands in the higher-index pixel.
    Points outside the window are counted in ``out_of_range``.
    """
    x = np.asarray(x, dtype=float).ravel()
    px = np.asarray(px, dtype=float).ravel()
    if x.size == 0:
        raise ConfigError("cannot bin an empty snapshot", "state")
    if x.shape != px.shape:
        raise ValueError("x and px must have the same length")
    if x_edges is None or p_edges is None:
        if grid_x is None:
            raise ValueError("need a grid or explicit edges")
        x_edges, p_edges = pixel_edges(grid_x, coarsen)
    x_edges = np.asarray(x_edges, dtype=float)
    p_edges = np.asarray(p_edges, dtype=float)
    nx, np_ = len(x_edges) - 1, len(p_edges) - 1
    i = np.searchsorted(x_edges, x, side="right") - 1
    j = np.searchsorted(p_edges, px, side="right") - 1
    inside = (i >= 0) & (i < nx) & (j >= 0) & (j < np_)
    flat = i[inside] * np_ + j[inside]
    counts = np.bincount(flat, minlength=nx * np_).reshape(nx, np_)
    return PhaseSpaceHistogram(x_edges, p_edges, counts, int(x.size - inside.sum()))


def classical_linear_entropy(h: PhaseSpaceHistogram, hbar: float = 1.0) -> float:
    """1 - 2 pi hbar sum rho^2 dx dp over pixels.

    Can go negative when the density is squeezed below one Planck cell; that
    raw value is returned and a SubPlanckWarning is issued.
    """
    n = h.total
    c = h.counts.astype(np.float64)
    value = 1.0 - 2.0 * math.pi * hbar * float(np.sum(c * c)) / (n * n * h.dx * h.dp)
    if value < 0:
        warnings.warn(f"classical linear entropy {value:.4f} < 0: density concentrated "
                      "below one 2*pi*hbar cell", SubPlanckWarning, stacklevel=2)
    return value


def classical_von_neumann_entropy(h: PhaseSpaceHistogram, hbar: float = 1.0) -> float:
    """-sum rho ln(2 pi hbar rho) dx dp over occupied pixels."""
    c = h.counts[h.counts > 0].astype(np.float64)
    w = c / h.total
    rho_cell = 2.0 * math.pi * hbar * w / (h.dx * h.dp)
    return float(-np.sum(w * np.log(rho_cell)))


def entropies(x, px, grid_x: Grid1D, hbar: float = 1.0, coarsen: int = 1) -> dict:
    h = bin_snapshot(x, px, grid_x, coarsen=coarsen)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SubPlanckWarning)
        s_lin = classical_linear_entropy(h, hbar)
    return {"S_L_cl": s_lin, "S_V_cl": classical_von_neumann_entropy(h, hbar),
            "oor_frac": h.out_of_range_fraction}
