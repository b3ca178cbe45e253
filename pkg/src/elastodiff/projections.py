"""Ritz-type projections and initial data for the discrete flow.

The geometric Ritz projection of a graph u is the piecewise linear function
u_hat matching u at the boundary with

    int u_hat_x xi_x / Q(u_hat_x) dx = int u_x xi_x / Q(u_x) dx

for all interior hat functions xi.  Because the nonlinear flux
g(p) = p / sqrt(1 + p^2) acts elementwise on the slopes, the residual at an
interior node reduces to a difference of flux values and Newton's method
uses the stiffness matrix weighted with E(p) = g'(p) = (1 + p^2)^(-3/2).

The companion projection for the curvature variable w solves a linear
problem with the same weighted stiffness operator; the alternative
initializer couples the flux differences to a weighted mass application of
the projected w and recovers second order initial errors for both fields.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .assemble import mass_diagonals, stiffness_diagonals, weighted_stiffness
from .banded import BandedMatrix
from .mesh import GaussRule, Mesh1D, NodalFunction, gauss_rule

__all__ = [
    "NewtonConfig",
    "NewtonConvergenceError",
    "normalized_slope",
    "normalized_slope_deriv",
    "ritz_u",
    "ritz_w",
    "initial_w",
    "initial_u_alt",
]


@dataclass(frozen=True)
class NewtonConfig:
    """Termination parameters of the damped Newton iteration."""

    tol: float = 1e-12
    max_iter: int = 50
    min_step: float = 2.0**-20

    def __post_init__(self):
        if self.tol <= 0.0 or self.max_iter < 1 or not 0.0 < self.min_step <= 1.0:
            raise ValueError("invalid Newton configuration")


class NewtonConvergenceError(Exception):
    """Newton iteration stalled; carries the last sup-norm residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


def normalized_slope(p):
    """Nonlinear flux g(p) = p / sqrt(1 + p^2) = u_x / Q."""
    p = np.asarray(p, dtype=float)
    return p / np.sqrt(1.0 + p * p)


def normalized_slope_deriv(p):
    """E(p) = g'(p) = (1 + p^2)^(-3/2), the Newton weight."""
    p = np.asarray(p, dtype=float)
    return (1.0 + p * p) ** -1.5


def _gauss_points(mesh: Mesh1D, rule: GaussRule) -> np.ndarray:
    """Quadrature abscissae per element, shape (n_elements, order)."""
    return mesh.nodes[:-1, None] + mesh.h[:, None] * rule.points[None, :]


def _element_integrals(mesh: Mesh1D, rule: GaussRule, values: np.ndarray) -> np.ndarray:
    """Integrate per element given integrand values at the Gauss points."""
    return mesh.h * (values @ rule.weights)

def _flux_residual(mesh: Mesh1D, values: np.ndarray, rhs_elements: np.ndarray) -> np.ndarray:
    """Interior residual g(s_left) - g(s_right) - hat-tested right hand side."""
    flux = normalized_slope(np.diff(values) / mesh.h)
    per_node = rhs_elements / mesh.h
    return (flux[:-1] - flux[1:]) - (per_node[:-1] - per_node[1:])


def _interior_tridiagonal(diag: np.ndarray, off: np.ndarray) -> BandedMatrix:
    return BandedMatrix.from_tridiagonal(off[1:-1], diag[1:-1], off[1:-1])


def _damped_newton(
    values: np.ndarray,
    residual: Callable[[np.ndarray], np.ndarray],
    jacobian: Callable[[np.ndarray], BandedMatrix],
    config: NewtonConfig,
    stats: dict = None,
) -> np.ndarray:
    """Newton with residual-monotone step halving on the interior values."""
    v = values.copy()
    res_vec = residual(v)
    res = float(np.max(np.abs(res_vec))) if res_vec.size else 0.0
    iterations = 0
    try:
        for _ in range(config.max_iter):
            if res <= config.tol:
                return v
            delta = jacobian(v).solve(-res_vec)
            step = 1.0
            while True:
                trial = v.copy()
                trial[1:-1] += step * delta
                trial_vec = residual(trial)
                trial_res = float(np.max(np.abs(trial_vec)))
                if trial_res < res:
                    break
                step *= 0.5
                if step < config.min_step:
                    raise NewtonConvergenceError("Newton step underflow", res)
            v, res_vec, res = trial, trial_vec, trial_res
            iterations += 1
        if res > config.tol:
            raise NewtonConvergenceError("Newton did not converge", res)
        return v
    finally:
        if stats is not None:
            stats["iterations"] = stats.get("iterations", 0) + iterations


def ritz_u(
    mesh: Mesh1D,
    u: Callable,
    u_x: Callable,
    u_b: tuple = (0.0, 0.0),
    *,
    config: NewtonConfig = NewtonConfig(),
    quad_order: int = 5,
    stats: dict = None,
) -> NodalFunction:
    """Geometric Ritz projection of a graph given by ``u`` and its slope."""
    rule = gauss_rule(quad_order)
    rhs = _element_integrals(mesh, rule, normalized_slope(u_x(_gauss_points(mesh, rule))))

    def residual(v):
        return _flux_residual(mesh, v, rhs)

    def jacobian(v):
        weights = normalized_slope_deriv(np.diff(v) / mesh.h)
        return _interior_tridiagonal(*stiffness_diagonals(mesh, weights))

    start = np.asarray(u(mesh.nodes), dtype=float).copy()
    start[0], start[-1] = u_b
    return NodalFunction(mesh, _damped_newton(start, residual, jacobian, config, stats))


def ritz_w(
    mesh: Mesh1D,
    u_hat: NodalFunction,
    u_x: Callable,
    w: Callable,
    w_x: Callable,
    *,
    quad_order: int = 5,
) -> NodalFunction:
    """Weighted-stiffness projection of the curvature variable w.

    Solves, with hatted quantities from the projected graph ``u_hat``,

        int E(u_hat_x) w_hat_x xi_x = int [E(u_x) w_x
              + (1/2) w^2 (u_x / Q^3 - u_hat_x / Q_hat^3)] xi_x

    for interior hats xi, pinning the boundary values to those of w.
    """
    rule = gauss_rule(quad_order)
    pts = _gauss_points(mesh, rule)
    ux = u_x(pts)
    q3 = (1.0 + ux * ux) ** 1.5
    slopes = u_hat.slopes
    flux_hat = normalized_slope_deriv(slopes) * slopes
    wv = w(pts)
    integrand = w_x(pts) / q3 + 0.5 * wv * wv * (ux / q3 - flux_hat[:, None])
    g_el = _element_integrals(mesh, rule, integrand)
    per_node = g_el / mesh.h
    rhs = (per_node[:-1] - per_node[1:]).copy()

    diag, off = stiffness_diagonals(mesh, normalized_slope_deriv(slopes))
    w0 = float(w(0.0))
    w1 = float(w(1.0))
    rhs[0] -= off[0] * w0
    rhs[-1] -= off[-1] * w1
    interior = _interior_tridiagonal(diag, off).solve(rhs)
    return NodalFunction(mesh, np.concatenate(([w0], interior, [w1])))


def initial_w(u0: NodalFunction) -> NodalFunction:
    """Discrete curvature matching a nodal graph.

    Recovers the zero-trace w with ``int w xi / Q = int u_x xi_x / Q`` for
    interior hats, the same relation the time stepping maintains.
    """
    mesh = u0.mesh
    s = u0.slopes
    inv_q = 1.0 / np.sqrt(1.0 + s * s)
    stiff = weighted_stiffness(mesh, inv_q)
    rhs = stiff.matvec(u0.values)[1:-1]
    mass_diag, mass_off = mass_diagonals(mesh, inv_q)
    interior = _interior_tridiagonal(mass_diag, mass_off).solve(rhs)
    return NodalFunction(
        mesh, np.concatenate(([0.0], interior, [0.0])), zero_trace=True
    )


def initial_u_alt(
    mesh: Mesh1D,
    u: Callable,
    u_x: Callable,
    w: Callable,
    w_x: Callable,
    u_b: tuple = (0.0, 0.0),
    *,
    config: NewtonConfig = NewtonConfig(),
    quad_order: int = 5,
    stats: dict = None,
) -> NodalFunction:
    """Alternative initial graph balancing flux differences against w.

    Solves the nonlinear system

        int g(u0_x) xi_x dx = int (w_hat / Q_hat) xi dx

    where u_hat, w_hat is the standard projected pair; the right hand side
    is a fixed weighted mass application, so Newton reuses the symmetric
    flux Jacobian of the Ritz projection.
    """
    u_hat = ritz_u(mesh, u, u_x, u_b, config=config, quad_order=quad_order, stats=stats)
    w_hat = ritz_w(mesh, u_hat, u_x, w, w_x, quad_order=quad_order)

    h = mesh.h
    s_hat = u_hat.slopes
    inv_q_hat = (1.0 + s_hat * s_hat) ** -0.5
    wl = w_hat.values[:-1]
    wr = w_hat.values[1:]
    # Exact integrals of w_hat / Q_hat against the left and right hat.
    rhs = np.zeros(mesh.n_nodes)
    rhs[:-1] += inv_q_hat * h * (2.0 * wl + wr) / 6.0
    rhs[1:] += inv_q_hat * h * (wl + 2.0 * wr) / 6.0

    def residual(v):
        flux = normalized_slope(np.diff(v) / h)
        return (flux[:-1] - flux[1:]) - rhs[1:-1]

    def jacobian(v):
        weights = normalized_slope_deriv(np.diff(v) / h)
        return _interior_tridiagonal(*stiffness_diagonals(mesh, weights))

    start = u_hat.values.copy()
    start[0], start[-1] = u_b
    values = _damped_newton(start, residual, jacobian, config, stats)
    return NodalFunction(mesh, values)
