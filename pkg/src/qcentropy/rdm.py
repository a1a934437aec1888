"""Reduced density matrix of one oscillator and its entropies."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalIntegrityError
from .grid import ComplexField2D

LOG_FLOOR = 1e-14
NEGATIVE_TOLERANCE = 1e-10
TRACE_TOLERANCE = 1e-6
PURITY_AGREEMENT = 1e-8


@dataclass
class ReducedDensityMatrix:
    """M_ij = rho(x_i, x_j) dx, so that eigenvalues are dimensionless weights summing to 1."""

    matrix: np.ndarray = field(repr=False)
    dx: float
    _eigenvalues: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    @property
    def eigenvalues(self) -> np.ndarray:
        """Descending eigenvalues; round-off negatives above -1e-10 are set to zero."""
        if self._eigenvalues is None:
            lam = np.linalg.eigvalsh(self.matrix)[::-1]
            if lam[-1] < -NEGATIVE_TOLERANCE:
                raise NumericalIntegrityError(
                    f"reduced density matrix has eigenvalue {lam[-1]:.3e} < -1e-10", "eigen")
            self._eigenvalues = np.where(lam < 0, 0.0, lam)
        return self._eigenvalues

    def density(self) -> np.ndarray:
        """rho(x_i, x_j) in units of 1/length."""
        return self.matrix / self.dx


def reduce(psi: ComplexField2D, keep: str = "x") -> ReducedDensityMatrix:
    """Trace the joint state over the other coordinate.

    rho(x_i, x_j) = sum_k psi(x_i, y_k) psi*(x_j, y_k) dy, stored times dx.
    """
    if keep == "x":
        v, dx, dy = psi.values, psi.grid_x.dx, psi.grid_y.dx
    elif keep == "y":
        v, dx, dy = psi.values.T, psi.grid_y.dx, psi.grid_x.dx
    else:
        raise ValueError(f"keep must be 'x' or 'y', got {keep!r}")
    m = (v @ v.conj().T) * (dx * dy)
    rdm = ReducedDensityMatrix(m, dx)
    if abs(rdm.trace - 1.0) > TRACE_TOLERANCE:
        raise NumericalIntegrityError(f"reduced trace {rdm.trace:.10f} deviates from 1", "trace")
    return rdm


def purity(rdm: ReducedDensityMatrix) -> float:
    """Tr rho^2, from the Frobenius norm and cross-checked against sum(lambda^2)."""
    frob = float(np.sum(np.abs(rdm.matrix) ** 2))
    spectral = float(np.sum(rdm.eigenvalues ** 2))
    if abs(frob - spectral) > PURITY_AGREEMENT:
        raise NumericalIntegrityError(
            f"purity mismatch: Frobenius {frob!r} vs eigenvalues {spectral!r}", "purity")
    return frob


def linear_entropy(rdm: ReducedDensityMatrix) -> float:
    return 1.0 - purity(rdm)


def spectrum_linear_entropy(lam) -> float:
    lam = np.asarray(lam, dtype=float)
    return 1.0 - float(np.sum(lam ** 2))


def spectrum_von_neumann_entropy(lam) -> float:
    """-sum lambda ln lambda over weights above the log floor."""
    lam = np.asarray(lam, dtype=float)
    lam = lam[lam > LOG_FLOOR]
    return float(-np.sum(lam * np.log(lam))) + 0.0


def von_neumann_entropy(rdm: ReducedDensityMatrix) -> float:
    return spectrum_von_neumann_entropy(rdm.eigenvalues)


def entropies(psi: ComplexField2D, keep: str = "x") -> dict:
    """Linear and von Neumann entropies plus the integrity diagnostics of one snapshot."""
    rdm = reduce(psi, keep)
    lam = rdm.eigenvalues
    frob = float(np.sum(np.abs(rdm.matrix) ** 2))
    return {
        "S_L": 1.0 - purity(rdm),
        "S_V": von_neumann_entropy(rdm),
        "purity_gap": abs(frob - float(np.sum(lam ** 2))),
        "trace_error": abs(float(np.sum(lam)) - 1.0),
    }
