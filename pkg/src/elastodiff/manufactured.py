"""Manufactured solutions driving the convergence studies.

Each case prescribes a graph height u(x, t) vanishing at both ends and a
concentration c(x, t), then carries the forcing terms that make the pair an
exact solution of the coupled system

    u_t / Q = (w_x / Q^3)_x + (w^2 u_x / (2 Q^3))_x + f(c) + s_u,
    w = -u_xx / Q^2,          Q = sqrt(1 + u_x^2),
    (c Q)_t = (c_x / Q)_x + s_c,

with u = w = c = 0 at x = 0, 1.  The sources follow from the closed-form
derivatives of w,

    w_x  = -u_xxx / Q^2 + 2 u_x u_xx^2 / Q^4,
    w_xx = -u_xxxx / Q^2 + 6 u_x u_xx u_xxx / Q^4
           + 2 u_xx^3 / Q^4 - 8 u_x^2 u_xx^3 / Q^6,

by expanding the divergence terms with Q_x = u_x u_xx / Q.  Every evaluator
broadcasts over ``x`` and ``t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as npoly

__all__ = [
    "ManufacturedCase",
    "DerivedFields",
    "get_case",
    "case_labels",
    "linear_coupling",
    "linear_coupling_deriv",
]

Field = Callable[..., np.ndarray]


def linear_coupling(c):
    """Concentration feedback f(c) = (1 - 2c) / 10 used by the moving cases."""
    return (1.0 - 2.0 * np.asarray(c, dtype=float)) / 10.0


def linear_coupling_deriv(c):
    c = np.asarray(c, dtype=float)
    return np.full_like(c, -0.2)


@dataclass(frozen=True)
class DerivedFields:
    """Geometry fields composed from the derivatives of a prescribed graph."""

    q: Field
    curvature: Field
    w: Field
    w_x: Field


@dataclass(frozen=True, eq=False)
class ManufacturedCase:
    """Exact solution pair (u, c) with matching sources and coupling."""

    label: str
    u: Field
    u_x: Field
    u_xx: Field
    u_xxx: Field
    u_xxxx: Field
    u_t: Field
    u_xt: Field
    c: Field
    c_x: Field
    c_xx: Field
    c_t: Field
    f: Field
    f_prime: Field
    T: float = 1.0
    u_b: tuple = (0.0, 0.0)

    def q(self, x, t):
        ux = self.u_x(x, t)
        return np.sqrt(1.0 + ux * ux)

    def w(self, x, t):
        ux = self.u_x(x, t)
        return -self.u_xx(x, t) / (1.0 + ux * ux)

    def curvature(self, x, t):
        ux = self.u_x(x, t)
        return self.u_xx(x, t) / (1.0 + ux * ux) ** 1.5

    def w_x(self, x, t):
        ux = self.u_x(x, t)
        uxx = self.u_xx(x, t)
        q2 = 1.0 + ux * ux
        return -self.u_xxx(x, t) / q2 + 2.0 * ux * uxx * uxx / q2**2

    def w_xx(self, x, t):
        ux = self.u_x(x, t)
        uxx = self.u_xx(x, t)
        uxxx = self.u_xxx(x, t)
        q2 = 1.0 + ux * ux
        return (
            -self.u_xxxx(x, t) / q2
            + 6.0 * ux * uxx * uxxx / q2**2
            + 2.0 * uxx**3 / q2**2
            - 8.0 * ux * ux * uxx**3 / q2**3
        )

    def derived(self) -> DerivedFields:
        return DerivedFields(q=self.q, curvature=self.curvature, w=self.w, w_x=self.w_x)

    def source_u(self, x, t):
        """Residual forcing of the elastic flow equation."""
        ux = self.u_x(x, t)
        uxx = self.u_xx(x, t)
        q2 = 1.0 + ux * ux
        q = np.sqrt(q2)
        q3 = q2 * q
        q5 = q2 * q3
        w = -uxx / q2
        wx = self.w_x(x, t)
        wxx = self.w_xx(x, t)
        flux_w = wxx / q3 - 3.0 * wx * ux * uxx / q5
        flux_w2 = (
            w * wx * ux / q3
            + 0.5 * w * w * uxx / q3
            - 1.5 * w * w * ux * ux * uxx / q5
        )
        return self.u_t(x, t) / q - flux_w - flux_w2 - self.f(self.c(x, t))

    def source_c(self, x, t):
        """Residual forcing of the lateral diffusion equation."""
        ux = self.u_x(x, t)
        uxx = self.u_xx(x, t)
        q2 = 1.0 + ux * ux
        q = np.sqrt(q2)
        return (
            self.c_t(x, t) * q
            + self.c(x, t) * ux * self.u_xt(x, t) / q
            - self.c_xx(x, t) / q
            + self.c_x(x, t) * ux * uxx / (q2 * q)
        )


def _separable(label, poly_coeffs, angular=None, c_freq=None, c_omega=None) -> ManufacturedCase:
    """Case with u = 2.5 cos(2 pi t) p(x) and c = 0.1 sin(k pi x) sin(w pi t).

    ``p`` is the polynomial with the given coefficients, optionally times
    sin(angular * x).  Spatial derivatives of the product come from the
    Leibniz rule; the polynomial part is differentiated exactly.
    """
    coeffs = [np.asarray(poly_coeffs, dtype=float)]
    for _ in range(4):
        coeffs.append(npoly.polyder(coeffs[-1]))

    def gderiv(k, x):
        return npoly.polyval(np.asarray(x, dtype=float), coeffs[k])

    if angular is None:
        profiles = [lambda x, k=k: gderiv(k, x) for k in range(5)]
    else:
        a = angular

        # sin(ax) derivatives cycle with factor a; binomial Leibniz sums.
        def sderiv(j, x):
            cycle = (np.sin, np.cos)
            sign = -1.0 if j % 4 in (2, 3) else 1.0
            return sign * a**j * cycle[j % 2](a * np.asarray(x, dtype=float))

        def make(k):
            binom = [math.comb(k, j) for j in range(k + 1)]

            def profile(x):
                total = 0.0
                for j in range(k + 1):
                    total = total + binom[j] * gderiv(k - j, x) * sderiv(j, x)
                return total

            return profile

        profiles = [make(k) for k in range(5)]

    two_pi = 2.0 * np.pi

    def theta(t):
        return 2.5 * np.cos(two_pi * np.asarray(t, dtype=float))

    def theta_t(t):
        return -2.5 * two_pi * np.sin(two_pi * np.asarray(t, dtype=float))

    kx = c_freq * np.pi
    wt = c_omega * np.pi

    def rho(x):
        return 0.1 * np.sin(kx * np.asarray(x, dtype=float))

    def rho_x(x):
        return 0.1 * kx * np.cos(kx * np.asarray(x, dtype=float))

    def rho_xx(x):
        return -0.1 * kx * kx * np.sin(kx * np.asarray(x, dtype=float))

    def gamma(t):
        return np.sin(wt * np.asarray(t, dtype=float))

    def gamma_t(t):
        return wt * np.cos(wt * np.asarray(t, dtype=float))

    def space_time(px, tt):
        return lambda x, t: px(x) * tt(t)

    return ManufacturedCase(
        label=label,
        u=space_time(profiles[0], theta),
        u_x=space_time(profiles[1], theta),
        u_xx=space_time(profiles[2], theta),
        u_xxx=space_time(profiles[3], theta),
        u_xxxx=space_time(profiles[4], theta),
        u_t=space_time(profiles[0], theta_t),
        u_xt=space_time(profiles[1], theta_t),
        c=space_time(rho, gamma),
        c_x=space_time(rho_x, gamma),
        c_xx=space_time(rho_xx, gamma),
        c_t=space_time(rho, gamma_t),
        f=linear_coupling,
        f_prime=linear_coupling_deriv,
    )


def _zero_field(x, t):
    return np.zeros(np.broadcast_shapes(np.shape(x), np.shape(t)))


def _zero_coupling(c):
    return np.zeros_like(np.asarray(c, dtype=float))


def _zero_case() -> ManufacturedCase:
    z = _zero_field
    return ManufacturedCase(
        label="zero",
        u=z, u_x=z, u_xx=z, u_xxx=z, u_xxxx=z, u_t=z, u_xt=z,
        c=z, c_x=z, c_xx=z, c_t=z,
        f=_zero_coupling, f_prime=_zero_coupling,
    )


# x^5 (x - 1)^3 = x^8 - 3 x^7 + 3 x^6 - x^5, lowest coefficient first.
_BUMP = (0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 3.0, -3.0, 1.0)

_FACTORIES = {
    "A": lambda: _separable("A", _BUMP, c_freq=7.0, c_omega=4.0),
    "B": lambda: _separable("B", _BUMP, angular=4.0 * np.pi, c_freq=2.0, c_omega=1.0),
    "zero": _zero_case,
}


def case_labels() -> tuple:
    return tuple(_FACTORIES)


def get_case(label: str) -> ManufacturedCase:
    """Look up a study case by label ('A', 'B' or 'zero')."""
    try:
        factory = _FACTORIES[label]
    except KeyError:
        raise KeyError(
            f"unknown case {label!r}; available: {', '.join(_FACTORIES)}"
        ) from None
    return factory()
