"""Assembly of the tridiagonal element matrices used by every time step.

All operators are integrals of piecewise polynomials, so the element
matrices have closed forms and no quadrature is involved:

* weighted mass      ``w_e h_e [[1/3, 1/6], [1/6, 1/3]]``
* weighted stiffness ``(w_e / h_e) [[1, -1], [-1, 1]]``

with one scalar weight ``w_e`` per element.  The curvature force matrix is
a stiffness matrix whose weight carries the exact element integral of a
piecewise linear ``w_h`` squared against the constant ``1 / Q_h^3``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .banded import BandedMatrix
from .mesh import Mesh1D

__all__ = [
    "ElementWeights",
    "weighted_mass",
    "weighted_stiffness",
    "curvature_force_matrix",
    "load_interpolated",
]


@dataclass(frozen=True)
class ElementWeights:
    """Geometry of a discrete graph: per-element slope and length element.

    ``q`` holds the values of ``Q_h = sqrt(1 + u_hx^2)`` which are constant
    on each element for piecewise linear ``u_h``.
    """

    slope: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        if self.q.shape != self.slope.shape:
            raise ValueError("slope and q must have matching shapes")
        defect = np.max(np.abs(self.q * self.q - 1.0 - self.slope * self.slope))
        if not self.q.min() >= 1.0 or defect > 1e-12:
            raise ValueError("q is not the length element of the stored slope")

    @classmethod
    def of_values(cls, mesh: Mesh1D, u_values: np.ndarray) -> "ElementWeights":
        slope = np.diff(u_values) / mesh.h
        return cls(slope=slope, q=np.sqrt(1.0 + slope * slope))


def _scatter_diagonals(off: np.ndarray, diag_scale: float = 2.0):
    """Tridiagonal (diag, off) from per-element off-diagonal contributions."""
    diag = np.zeros(off.size + 1)
    diag[:-1] += diag_scale * off
    diag[1:] += diag_scale * off
    return diag, off


def mass_diagonals(mesh: Mesh1D, weights: np.ndarray):
    off = np.asarray(weights, dtype=float) * mesh.h / 6.0
    return _scatter_diagonals(off)


def stiffness_diagonals(mesh: Mesh1D, weights: np.ndarray):
    ratio = np.asarray(weights, dtype=float) / mesh.h
    diag = np.zeros(ratio.size + 1)
    diag[:-1] += ratio
    diag[1:] += ratio
    return diag, -ratio


def _tridiagonal(diag: np.ndarray, off: np.ndarray) -> BandedMatrix:
    return BandedMatrix.from_tridiagonal(off, diag, off)


def weighted_mass(mesh: Mesh1D, weights) -> BandedMatrix:
    """Mass matrix with one constant weight per element."""
    return _tridiagonal(*mass_diagonals(mesh, weights))


def weighted_stiffness(mesh: Mesh1D, weights) -> BandedMatrix:
    """Stiffness matrix with one constant weight per element."""
    return _tridiagonal(*stiffness_diagonals(mesh, weights))


def curvature_weights(w_values: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Element weights of the curvature force: ``(1/2) w_h^2 / Q_h^3`` averaged.

    The exact integral of ``w_h^2`` over an element is
    ``h (w_l^2 + w_l w_r + w_r^2) / 3``, so the stiffness weight becomes
    ``(w_l^2 + w_l w_r + w_r^2) / (6 q^3)``.
    """
    wl = w_values[:-1]
    wr = w_values[1:]
    return (wl * wl + wl * wr + wr * wr) / (6.0 * q**3)


def curvature_force_matrix(mesh: Mesh1D, w_values, weights: ElementWeights) -> BandedMatrix:
    """Stiffness-type matrix of ``(1/2) \\int w_h^2 u_x phi_x / Q_h^3``."""
    w_values = np.asarray(w_values, dtype=float)
    if w_values.shape != (mesh.n_nodes,):
        raise ValueError("w must be given by nodal values")
    return weighted_stiffness(mesh, curvature_weights(w_values, weights.q))


def tridiagonal_apply(diag: np.ndarray, off: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Apply a symmetric tridiagonal matrix given by its diagonals."""
    out = diag * v
    out[:-1] += off * v[1:]
    out[1:] += off * v[:-1]
    return out


def load_interpolated(mesh: Mesh1D, g_values) -> np.ndarray:
    """Load vector of the interpolant: exact integrals of ``I_h g`` against hats."""
    g = np.asarray(g_values, dtype=float)
    if g.shape != (mesh.n_nodes,):
        raise ValueError("g must be given by nodal values")
    diag, off = mass_diagonals(mesh, np.ones(mesh.n_elements))
    return tridiagonal_apply(diag, off, g)
