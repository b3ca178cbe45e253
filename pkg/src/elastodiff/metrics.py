"""Squared space-time error norms and experimental orders of convergence.

The discrete trajectory is extended linearly in time on every step interval,
so its time derivative is the difference quotient of consecutive states.
Errors against a prescribed exact solution are measured in the eight squared
norms used by the convergence studies:

==========  =====================================================
kind        squared norm
==========  =====================================================
u_LinfL2    sup_t  || u - u_dh ||_{L2}^2
u_LinfH1    sup_t  || u_x - u_dhx ||_{L2}^2
u_H1L2      int_t  || u_t - u_dht ||_{L2}^2
u_H1H1      int_t  || u_tx - u_dhtx ||_{L2}^2
w_LinfL2    sup_t  || w - w_dh ||_{L2}^2
w_L2H1      int_t  || w_x - w_dhx ||_{L2}^2
c_LinfL2    sup_t  || c - c_dh ||_{L2}^2
c_L2H1      int_t  || c_x - c_dhx ||_{L2}^2
==========  =====================================================

Each space-time cell is integrated with tensorised Gauss rules; suprema are
taken over the time Gauss points of every step plus both step endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Callable, Sequence

import numpy as np

from .mesh import Mesh1D, gauss_rule

__all__ = [
    "KINDS",
    "SPACE_RULES",
    "ErrorReport",
    "SpaceTimeErrors",
    "eoc",
    "EocTable",
    "build_table",
]

SPACE_RULES = ("gauss", "trapezoid")

KINDS = (
    "u_LinfL2",
    "u_LinfH1",
    "u_H1L2",
    "u_H1H1",
    "w_LinfL2",
    "w_L2H1",
    "c_LinfL2",
    "c_L2H1",
)

_SUP_KINDS = ("u_LinfL2", "u_LinfH1", "w_LinfL2", "c_LinfL2")
_INT_KINDS = ("u_H1L2", "u_H1H1", "w_L2H1", "c_L2H1")


@dataclass(frozen=True)
class ErrorReport:
    """Squared errors of one run together with its discretisation data."""

    n_elements: int
    delta: float
    mu: float
    u_LinfL2: float
    u_LinfH1: float
    u_H1L2: float
    u_H1H1: float
    w_LinfL2: float
    w_L2H1: float
    c_LinfL2: float
    c_L2H1: float

    def __getitem__(self, kind: str) -> float:
        if kind not in KINDS:
            raise KeyError(kind)
        return getattr(self, kind)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


class SpaceTimeErrors:
    """Streaming accumulator fed one state per completed time step.

    The exact solution object must provide the evaluators ``u``, ``u_x``,
    ``u_t``, ``u_xt``, ``w``, ``w_x``, ``c`` and ``c_x`` broadcasting over
    ``(x, t)``.

    ``space_rule`` selects the spatial quadrature: ``"gauss"`` (default,
    ``space_order`` points per element) integrates every error exactly for
    practical purposes, while ``"trapezoid"`` samples only vertices and
    midpoints.  The trapezoid rule overstates the gradient error of a
    piecewise linear interpolant by a factor 3/2, so it is only useful for
    comparing against data that was tabulated the same way.
    """

    def __init__(
        self,
        mesh: Mesh1D,
        exact,
        *,
        space_order: int = 4,
        time_order: int = 4,
        space_rule: str = "gauss",
    ):
        self.mesh = mesh
        self.exact = exact
        if space_rule == "gauss":
            srule = gauss_rule(space_order)
            sp, sw = srule.points, srule.weights
        elif space_rule == "trapezoid":
            sp = np.array([0.0, 0.5, 1.0])
            sw = np.array([0.25, 0.5, 0.25])
        else:
            raise ValueError(f"unknown space_rule {space_rule!r}: expected one of {SPACE_RULES}")
        trule = gauss_rule(time_order)
        self._sp = sp
        self._tp = trule.points
        self._tw = trule.weights
        self._x = mesh.nodes[:-1, None] + mesh.h[:, None] * sp[None, :]
        self._hw = mesh.h[:, None] * sw[None, :]
        self._sup = dict.fromkeys(_SUP_KINDS, 0.0)
        self._acc = dict.fromkeys(_INT_KINDS, 0.0)
        self._prev = None

    def _at_gauss(self, nodal: np.ndarray) -> np.ndarray:
        """Values of a nodal function at the spatial Gauss points, (N, q)."""
        p = self._sp[None, :]
        return nodal[:-1, None] * (1.0 - p) + nodal[1:, None] * p

    def _l2sq(self, err: np.ndarray) -> np.ndarray:
        return np.sum(err * err * self._hw, axis=(-2, -1))

    def _raise_sup(self, kind: str, value) -> None:
        peak = float(np.max(value))
        if peak > self._sup[kind]:
            self._sup[kind] = peak

    def start(self, t: float, u: np.ndarray, w: np.ndarray, c: np.ndarray) -> None:
        """Seed the supremum norms with the initial state."""
        self._prev = (t, u.copy(), w.copy(), c.copy())
        self._raise_sup("u_LinfL2", self._l2sq(self.exact.u(self._x, t) - self._at_gauss(u)))
        su = np.diff(u) / self.mesh.h
        self._raise_sup("u_LinfH1", self._l2sq(self.exact.u_x(self._x, t) - su[:, None]))
        self._raise_sup("w_LinfL2", self._l2sq(self.exact.w(self._x, t) - self._at_gauss(w)))
        self._raise_sup("c_LinfL2", self._l2sq(self.exact.c(self._x, t) - self._at_gauss(c)))

    def push(self, t: float, u: np.ndarray, w: np.ndarray, c: np.ndarray) -> None:
        """Account for the step ending at time ``t``."""
        if self._prev is None:
            raise RuntimeError("call start() with the initial state first")
        t0, u0, w0, c0 = self._prev
        delta = t - t0
        x = self._x
        ex = self.exact

        # Interior Gauss times, then with the right endpoint appended for
        # the supremum norms (the left endpoint was covered previously).
        taus = t0 + delta * self._tp
        taus_sup = np.append(taus, t)[:, None, None]
        theta_sup = np.append(self._tp, 1.0)[:, None, None]

        pair = self._at_gauss(u0), self._at_gauss(u)
        self._raise_sup(
            "u_LinfL2",
            self._l2sq(ex.u(x, taus_sup) - (pair[0] + theta_sup * (pair[1] - pair[0]))),
        )
        s0 = (np.diff(u0) / self.mesh.h)[:, None]
        s1 = (np.diff(u) / self.mesh.h)[:, None]
        self._raise_sup(
            "u_LinfH1",
            self._l2sq(ex.u_x(x, taus_sup) - (s0 + theta_sup * (s1 - s0))),
        )
        pair = self._at_gauss(w0), self._at_gauss(w)
        self._raise_sup(
            "w_LinfL2",
            self._l2sq(ex.w(x, taus_sup) - (pair[0] + theta_sup * (pair[1] - pair[0]))),
        )
        pair = self._at_gauss(c0), self._at_gauss(c)
        self._raise_sup(
            "c_LinfL2",
            self._l2sq(ex.c(x, taus_sup) - (pair[0] + theta_sup * (pair[1] - pair[0]))),
        )

        taus_int = taus[:, None, None]
        theta_int = self._tp[:, None, None]
        dq = (self._at_gauss(u) - self._at_gauss(u0)) / delta
        self._acc["u_H1L2"] += delta * float(
            self._tw @ self._l2sq(ex.u_t(x, taus_int) - dq)
        )
        dqs = (s1 - s0) / delta
        self._acc["u_H1H1"] += delta * float(
            self._tw @ self._l2sq(ex.u_xt(x, taus_int) - dqs)
        )
        ws0 = (np.diff(w0) / self.mesh.h)[:, None]
        ws1 = (np.diff(w) / self.mesh.h)[:, None]
        self._acc["w_L2H1"] += delta * float(
            self._tw @ self._l2sq(ex.w_x(x, taus_int) - (ws0 + theta_int * (ws1 - ws0)))
        )
        cs0 = (np.diff(c0) / self.mesh.h)[:, None]
        cs1 = (np.diff(c) / self.mesh.h)[:, None]
        self._acc["c_L2H1"] += delta * float(
            self._tw @ self._l2sq(ex.c_x(x, taus_int) - (cs0 + theta_int * (cs1 - cs0)))
        )

        self._prev = (t, u.copy(), w.copy(), c.copy())

    def report(self, delta: float, mu: float) -> ErrorReport:
        values = {**self._sup, **self._acc}
        return ErrorReport(
            n_elements=self.mesh.n_elements, delta=delta, mu=mu, **values
        )


def eoc(n_values: Sequence[int], errors: Sequence[float]) -> list:
    """Orders between consecutive rows: log(E_prev / E_next) / log(N_next / N_prev).

    The first entry is ``None``; mesh counts must be strictly increasing and
    errors strictly positive.
    """
    n_values = list(n_values)
    errors = list(errors)
    if len(n_values) != len(errors):
        raise ValueError("n_values and errors must have equal length")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ValueError("mesh counts must be strictly increasing")
    if any(e <= 0.0 for e in errors):
        raise ValueError("errors must be positive to form orders")
    out: list = [None]
    for (n0, e0), (n1, e1) in zip(zip(n_values, errors), zip(n_values[1:], errors[1:])):
        out.append(math.log(e0 / e1) / math.log(n1 / n0))
    return out


@dataclass(frozen=True)
class EocTable:
    """Convergence table of one study: all error kinds over a mesh sequence."""

    case: str
    c_mu: float
    r: float
    n_values: tuple
    errors: dict
    eocs: dict

    def column(self, kind: str):
        return self.errors[kind], self.eocs[kind]


def build_table(case: str, c_mu: float, r: float, reports: Sequence[ErrorReport]) -> EocTable:
    """Assemble per-kind error columns and orders from single-run reports.

    A column that touches zero (an exactly reproduced solution) gets no
    orders instead of failing the whole table.
    """
    n_values = tuple(rep.n_elements for rep in reports)
    errors = {kind: [rep[kind] for rep in reports] for kind in KINDS}
    eocs = {}
    for kind in KINDS:
        if all(e > 0.0 for e in errors[kind]):
            eocs[kind] = eoc(n_values, errors[kind])
        else:
            eocs[kind] = [None] * len(n_values)
    return EocTable(
        case=case, c_mu=c_mu, r=r, n_values=n_values, errors=errors, eocs=eocs
    )
