"""Shared helpers: finite-difference oracles and quadrature error norms.

The oracles deliberately avoid the library's own derivative formulas: first
derivatives come from a sixth-order central stencil applied to the plain
field evaluators, and error norms are computed with a high-order Gauss rule
written out locally.
"""

import numpy as np

from elastodiff import gauss_rule, ritz_u, ritz_w, uniform_mesh

# Sixth-order central differences: f'(x) = sum_k c_k f(x + k s) / s + O(s^6).
FD_OFFSETS = np.arange(-3, 4)
FD_WEIGHTS = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0


def fd_derivative(f, x, step):
    """Sixth-order first derivative of a callable at the points ``x``."""
    x = np.asarray(x, dtype=float)
    acc = np.zeros(x.shape)
    for k, c in zip(FD_OFFSETS, FD_WEIGHTS):
        if c != 0.0:
            acc += c * np.asarray(f(x + k * step), dtype=float)
    return acc / step


def assert_rel(actual, expected, rtol, floor_frac=1e-3):
    """Pointwise relative comparison with a floor at ``floor_frac`` of the sup.

    Near zeros of ``expected`` the tolerance is taken relative to the field's
    magnitude instead of the vanishing point value.
    """
    actual = np.asarray(actual, dtype=float)
    expected = np.asarray(expected, dtype=float)
    sup = float(np.max(np.abs(expected)))
    scale = np.maximum(np.abs(expected), max(floor_frac * sup, 1e-300))
    gap = np.abs(actual - expected)
    worst = float(np.max(gap / scale))
    assert worst <= rtol, f"worst relative gap {worst:.3e} > {rtol:.1e}"


def quad_error_norms(mesh, values, f, fx, order=8):
    """L2 and H1-seminorm errors of nodal ``values`` against callables."""
    rule = gauss_rule(order)
    x = mesh.nodes[:-1, None] + mesh.h[:, None] * rule.points[None, :]
    hw = mesh.h[:, None] * rule.weights[None, :]
    slopes = (np.diff(values) / mesh.h)[:, None]
    lin = values[:-1, None] + (x - mesh.nodes[:-1, None]) * slopes
    e0 = f(x) - lin
    e1 = fx(x) - slopes
    return float(np.sqrt(np.sum(e0 * e0 * hw))), float(np.sqrt(np.sum(e1 * e1 * hw)))


def projection_errors(case, n, t=0.0):
    """Ritz-pair errors of a study case at a frozen time, as a dict.

    Keys: u_L2, u_H1, w_L2, w_H1 (all plain norms, not squared).
    """
    mesh = uniform_mesh(n)
    u = lambda x: case.u(x, t)
    u_x = lambda x: case.u_x(x, t)
    u_hat = ritz_u(mesh, u, u_x, (u(0.0), u(1.0)))
    w_hat = ritz_w(mesh, u_hat, u_x, lambda x: case.w(x, t), lambda x: case.w_x(x, t))
    u_l2, u_h1 = quad_error_norms(mesh, u_hat.values, u, u_x)
    w_l2, w_h1 = quad_error_norms(mesh, w_hat.values, lambda x: case.w(x, t), lambda x: case.w_x(x, t))
    return {"u_L2": u_l2, "u_H1": u_h1, "w_L2": w_l2, "w_H1": w_h1}


def source_u_oracle(case, x, t, step=1e-3):
    """Forcing that makes ``case.u`` solve the elastic flow equation.

    Assembled from the definition: s_u = u_t / Q - (w_x / Q^3)_x
    - (1/2) (w^2 u_x / Q^3)_x - f(c), with w = -u_xx / Q^2.  Only the plain
    evaluators u, u_x, u_xx, c enter; every outer derivative is numerical.
    """

    def w_of(y):
        ux = case.u_x(y, t)
        return -case.u_xx(y, t) / (1.0 + ux * ux)

    def flux(y):
        ux = case.u_x(y, t)
        q3 = (1.0 + ux * ux) ** 1.5
        wv = w_of(y)
        wx = fd_derivative(w_of, y, step)
        return wx / q3 + 0.5 * wv * wv * ux / q3

    ut = fd_derivative(lambda tt: case.u(x, tt), t, step)
    q = np.sqrt(1.0 + case.u_x(x, t) ** 2)
    return ut / q - fd_derivative(flux, x, step) - case.f(case.c(x, t))


def source_c_oracle(case, x, t, step=1e-3):
    """Forcing that makes ``case.c`` solve the lateral diffusion equation.

    Assembled from the conservation form: s_c = (c Q)_t - (c_x / Q)_x,
    with both outer derivatives numerical.
    """

    def mass_density(tt):
        ux = case.u_x(x, tt)
        return case.c(x, tt) * np.sqrt(1.0 + ux * ux)

    def diffusive_flux(y):
        ux = case.u_x(y, t)
        return case.c_x(y, t) / np.sqrt(1.0 + ux * ux)

    return fd_derivative(mass_density, t, step) - fd_derivative(diffusive_flux, x, step)
