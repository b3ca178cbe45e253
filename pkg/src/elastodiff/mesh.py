"""Piecewise linear finite elements on a partition of the unit interval.

The solver works on partitions 0 = x_0 < x_1 < ... < x_N = 1 with elements
S_j = [x_{j-1}, x_j] of width h_j.  Discrete fields live in the space X_h of
continuous piecewise linear functions; fields with homogeneous Dirichlet
data use the zero-trace subspace.  This module provides the mesh container,
nodal functions with evaluation helpers, Lagrange interpolation, and Gauss
quadrature rules on the reference element [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

__all__ = [
    "Mesh1D",
    "NodalFunction",
    "GaussRule",
    "gauss_rule",
    "uniform_mesh",
    "interpolate",
]


class Mesh1D:
    """Partition of [0, 1] into at least two elements.

    Parameters
    ----------
    nodes : array_like
        Strictly increasing node coordinates with ``nodes[0] == 0`` and
        ``nodes[-1] == 1``.
    min_ratio : float, optional
        Lower bound on the quasi-uniformity ratio ``h_min / h_max``.
    """

    def __init__(self, nodes, *, min_ratio: float = 0.1):
        nodes = np.array(nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 3:
            raise ValueError("a mesh needs at least two elements")
        if nodes[0] != 0.0 or nodes[-1] != 1.0:
            raise ValueError("mesh must span exactly [0, 1]")
        h = np.diff(nodes)
        if np.any(h <= 0.0):
            raise ValueError("nodes must be strictly increasing")
        ratio = float(h.min() / h.max())
        if ratio < min_ratio:
            raise ValueError(
                f"mesh too graded: h_min/h_max = {ratio:.3e} < {min_ratio}"
            )
        nodes.flags.writeable = False
        h.flags.writeable = False
        self.nodes = nodes
        self.h = h

    @property
    def n_elements(self) -> int:
        return self.h.size

    @property
    def n_nodes(self) -> int:
        return self.nodes.size

    @property
    def h_max(self) -> float:
        return float(self.h.max())

    @property
    def h_min(self) -> float:
        return float(self.h.min())

    def element_of(self, x) -> np.ndarray:
        """Index of the element containing ``x``; the point 1 belongs to the last."""
        x = self.check_domain(x)
        idx = np.searchsorted(self.nodes, x, side="right") - 1
        return np.minimum(idx, self.n_elements - 1)

    def check_domain(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if np.any(x < 0.0) or np.any(x > 1.0):
            raise ValueError("evaluation point outside [0, 1]")
        return x

    def __repr__(self) -> str:
        return f"Mesh1D(n_elements={self.n_elements}, h_max={self.h_max:.3e})"


class NodalFunction:
    """Continuous piecewise linear function given by its nodal values.

    ``zero_trace=True`` asserts homogeneous boundary values exactly; the
    constructor rejects values that merely round to zero.
    """

    def __init__(self, mesh: Mesh1D, values, *, zero_trace: bool = False):
        values = np.array(values, dtype=float)
        if values.shape != (mesh.n_nodes,):
            raise ValueError(
                f"expected {mesh.n_nodes} nodal values, got shape {values.shape}"
            )
        if zero_trace and (values[0] != 0.0 or values[-1] != 0.0):
            raise ValueError("zero-trace function has nonzero boundary values")
        values.flags.writeable = False
        self.mesh = mesh
        self.values = values
        self.zero_trace = zero_trace

    def eval(self, x):
        """Point values; exact at nodes, linear inside elements."""
        x = self.mesh.check_domain(x)
        return np.interp(x, self.mesh.nodes, self.values)

    __call__ = eval

    def eval_dx(self, x):
        """Slope of the containing element (right-continuous, left at x = 1)."""
        return self.slopes[self.mesh.element_of(x)]

    @property
    def slopes(self) -> np.ndarray:
        """Per-element derivative values."""
        return np.diff(self.values) / self.mesh.h

    def norm_l2(self) -> float:
        """Exact L2 norm (the element integrals are quadratic polynomials)."""
        a = self.values[:-1]
        b = self.values[1:]
        return float(np.sqrt(np.sum(self.mesh.h * (a * a + a * b + b * b)) / 3.0))

    def seminorm_h1(self) -> float:
        """Exact H1 seminorm."""
        d = np.diff(self.values)
        return float(np.sqrt(np.sum(d * d / self.mesh.h)))

    def norm_linf(self) -> float:
        return float(np.max(np.abs(self.values)))

    def __repr__(self) -> str:
        return (
            f"NodalFunction(n_nodes={self.mesh.n_nodes}, "
            f"zero_trace={self.zero_trace})"
        )


@dataclass(frozen=True)
class GaussRule:
    """Gauss-Legendre rule on the reference element [0, 1].

    A rule with q points integrates polynomials of degree 2q - 1 exactly.
    """

    order: int
    points: np.ndarray
    weights: np.ndarray


@lru_cache(maxsize=None)
def gauss_rule(order: int) -> GaussRule:
    """Cached Gauss-Legendre rule with ``order`` points on [0, 1]."""
    if order < 1:
        raise ValueError("quadrature order must be at least 1")
    pts, wts = np.polynomial.legendre.leggauss(order)
    pts = 0.5 * (pts + 1.0)
    wts = 0.5 * wts
    pts.flags.writeable = False
    wts.flags.writeable = False
    return GaussRule(order=order, points=pts, weights=wts)


def uniform_mesh(n_elements: int) -> Mesh1D:
    """Uniform partition of [0, 1] into ``n_elements`` intervals."""
    if n_elements < 2:
        raise ValueError("a mesh needs at least two elements")
    return Mesh1D(np.linspace(0.0, 1.0, n_elements + 1))


def interpolate(g: Callable, mesh: Mesh1D, *, zero_trace: bool = False) -> NodalFunction:
    """Lagrange interpolant I_h g sampling ``g`` at the mesh nodes."""
    values = np.asarray(g(mesh.nodes), dtype=float)
    if values.shape != mesh.nodes.shape:
        values = np.broadcast_to(values, mesh.nodes.shape).copy()
    return NodalFunction(mesh, values, zero_trace=zero_trace)
