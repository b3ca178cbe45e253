"""Linearly implicit time stepping for the coupled elastic flow.

Each step solves two banded linear systems.  The geometry step treats the
pair (u, w) implicitly with the length element, the curvature force weight
and the concentration feedback frozen at the previous step,

    (mu/d) A (u' - u) + (1/d) M_1/Q (u' - u) + A_1/Q^3 w' + C_w u' = b,
    M_1/Q w' - A_1/Q u' = 0,

where A and M are stiffness and mass matrices with the indicated element
weights, C_w carries (1/2) w^2 / Q^3, d is the step size, mu = C_mu h^r the
velocity penalty, and b tests the interpolated forcing f(c) + s_u against
the hat functions.  Interleaving the interior unknowns (u_1, w_1, u_2, ...)
gives a band matrix with three off-diagonals on either side.

The concentration step then solves backward-Euler style transport along the
updated graph,

    M_Q' c' + d A_1/Q' c' = M_Q c + d b_c,

so that the pairing of old and new length elements mimics the conservation
structure of (c Q)_t = (c_x / Q)_x + s_c.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .assemble import (
    ElementWeights,
    load_interpolated,
    mass_diagonals,
    stiffness_diagonals,
    tridiagonal_apply,
)
from .banded import BandedMatrix, solve_banded
from .manufactured import ManufacturedCase
from .mesh import Mesh1D, NodalFunction, uniform_mesh
from .metrics import ErrorReport, SpaceTimeErrors
from .projections import NewtonConfig, initial_u_alt, initial_w, ritz_u

__all__ = [
    "SchemeConfig",
    "Problem",
    "State",
    "Diagnostics",
    "RunResult",
    "as_problem",
    "init",
    "geometry_step",
    "concentration_step",
    "step",
    "run",
    "discrete_length",
    "bending_energy",
    "concentration_mass",
]

INITIALIZERS = ("ritz", "ritz-alt", "interpolant")


@dataclass(frozen=True)
class SchemeConfig:
    """Discretisation parameters of one run.

    ``delta`` defaults to ``h^2``; the final time must be an integer
    multiple of the step size within a relative tolerance of 1e-9, and the
    step size is recomputed as T / M for the rounded step count M.
    """

    n_elements: int
    c_mu: float
    r: float
    T: float = 1.0
    delta: Optional[float] = None
    initializer: str = "ritz"
    quad_order: int = 5
    newton: NewtonConfig = field(default_factory=NewtonConfig)

    def __post_init__(self):
        if self.n_elements < 2:
            raise ValueError("need at least two elements")
        if self.c_mu < 0.0:
            raise ValueError("penalty magnitude must be nonnegative")
        if self.T <= 0.0:
            raise ValueError("final time must be positive")
        if self.delta is not None and self.delta <= 0.0:
            raise ValueError("step size must be positive")
        if self.initializer not in INITIALIZERS:
            raise ValueError(
                f"unknown initializer {self.initializer!r}; "
                f"choose one of {', '.join(INITIALIZERS)}"
            )

    def mu(self, h: float) -> float:
        """Velocity penalty weight for mesh size ``h``."""
        return self.c_mu * h**self.r

    def resolve_steps(self) -> tuple:
        """Step count and exact step size covering [0, T]."""
        base = self.delta if self.delta is not None else (1.0 / self.n_elements) ** 2
        ratio = self.T / base
        steps = int(round(ratio))
        if steps < 1 or abs(ratio - steps) > 1e-9 * max(ratio, 1.0):
            raise ValueError(
                f"final time {self.T} is not an integer multiple of delta {base}"
            )
        return steps, self.T / steps


@dataclass(frozen=True)
class Problem:
    """Data of an initial boundary value problem fed to the stepper.

    Spatial callables take node coordinates; the sources take ``(x, t)``.
    ``f`` maps nodal concentration values to nodal forcing values.  The
    exact curvature fields ``w0``, ``w0_x`` are only needed by the
    alternative initializer.
    """

    u_b: tuple = (0.0, 0.0)
    u0: Optional[Callable] = None
    u0_x: Optional[Callable] = None
    c0: Optional[Callable] = None
    f: Optional[Callable] = None
    s_u: Optional[Callable] = None
    s_c: Optional[Callable] = None
    w0: Optional[Callable] = None
    w0_x: Optional[Callable] = None


def as_problem(case: ManufacturedCase) -> Problem:
    """Initial and forcing data of a manufactured case."""
    return Problem(
        u_b=case.u_b,
        u0=lambda x: case.u(x, 0.0),
        u0_x=lambda x: case.u_x(x, 0.0),
        c0=lambda x: case.c(x, 0.0),
        f=case.f,
        s_u=case.source_u,
        s_c=case.source_c,
        w0=lambda x: case.w(x, 0.0),
        w0_x=lambda x: case.w_x(x, 0.0),
    )


@dataclass(frozen=True)
class State:
    """Discrete fields after ``m`` completed steps."""

    m: int
    t: float
    u: NodalFunction
    w: NodalFunction
    c: NodalFunction
    weights: ElementWeights


@dataclass(frozen=True)
class Diagnostics:
    """Per-step energy-like series; index 0 holds the initial state."""

    m: np.ndarray
    t: np.ndarray
    length: np.ndarray
    bending: np.ndarray
    c_mass: np.ndarray
    newton_iterations: int


@dataclass(frozen=True)
class RunResult:
    config: SchemeConfig
    mesh: Mesh1D
    mu: float
    delta: float
    n_steps: int
    initial: State
    final: State
    snapshots: tuple
    diagnostics: Diagnostics
    errors: Optional[ErrorReport]


def discrete_length(mesh: Mesh1D, weights: ElementWeights) -> float:
    """Length of the discrete graph, sum of h_e Q_e."""
    return float(np.sum(mesh.h * weights.q))


def bending_energy(mesh: Mesh1D, w_values: np.ndarray, weights: ElementWeights) -> float:
    """Exact integral of (1/2) w_h^2 / Q_h, the discrete bending energy."""
    wl = w_values[:-1]
    wr = w_values[1:]
    return float(0.5 * np.sum(mesh.h * (wl * wl + wl * wr + wr * wr) / (3.0 * weights.q)))


def concentration_mass(mesh: Mesh1D, c_values: np.ndarray, weights: ElementWeights) -> float:
    """Exact integral of c_h Q_h, the total amount of material on the curve."""
    return float(np.sum(mesh.h * weights.q * (c_values[:-1] + c_values[1:]) / 2.0))


def _nodal_or_zero(fun, x, *args) -> np.ndarray:
    if fun is None:
        return np.zeros(x.shape)
    return np.asarray(fun(x, *args), dtype=float)


def init(cfg: SchemeConfig, problem: Problem) -> State:
    """Initial state on a uniform mesh, using the configured initializer."""
    mesh = uniform_mesh(cfg.n_elements)
    return _init_on(mesh, cfg, problem)[0]


def _init_on(mesh: Mesh1D, cfg: SchemeConfig, problem: Problem):
    stats = {"iterations": 0}
    if cfg.initializer == "interpolant":
        values = _nodal_or_zero(problem.u0, mesh.nodes)
        values[0], values[-1] = problem.u_b
        u0 = NodalFunction(mesh, values)
    elif cfg.initializer == "ritz":
        if problem.u0 is None or problem.u0_x is None:
            raise ValueError("initializer 'ritz' needs u0 and u0_x")
        u0 = ritz_u(
            mesh, problem.u0, problem.u0_x, problem.u_b,
            config=cfg.newton, quad_order=cfg.quad_order, stats=stats,
        )
    else:
        if None in (problem.u0, problem.u0_x, problem.w0, problem.w0_x):
            raise ValueError("initializer 'ritz-alt' needs u0, u0_x, w0 and w0_x")
        u0 = initial_u_alt(
            mesh, problem.u0, problem.u0_x, problem.w0, problem.w0_x, problem.u_b,
            config=cfg.newton, quad_order=cfg.quad_order, stats=stats,
        )
    w0 = initial_w(u0)
    c_values = _nodal_or_zero(problem.c0, mesh.nodes)
    c_values[0] = c_values[-1] = 0.0
    c0 = NodalFunction(mesh, c_values, zero_trace=True)
    state = State(
        m=0, t=0.0, u=u0, w=w0, c=c0, weights=ElementWeights.of_values(mesh, u0.values)
    )
    return state, stats["iterations"]


def _geometry_arrays(mesh, u, w, inv_q, rhs_nodal, mu_over_delta, inv_delta, u_b):
    """One geometry solve on raw arrays; returns the new (u, w) values."""
    h = mesh.h
    n_nodes = mesh.n_nodes
    inv_q3 = inv_q**3

    m_off = inv_q * h / 6.0
    m_diag = np.zeros(n_nodes)
    m_diag[:-1] += 2.0 * m_off
    m_diag[1:] += 2.0 * m_off

    # Penalty stiffness plus weighted mass, applied to both time levels.
    prev_off = mu_over_delta * (-1.0 / h) + inv_delta * m_off
    prev_diag = inv_delta * m_diag
    prev_diag[:-1] += mu_over_delta / h
    prev_diag[1:] += mu_over_delta / h

    wl = w[:-1]
    wr = w[1:]
    cw_ratio = (wl * wl + wl * wr + wr * wr) * inv_q3 / (6.0 * h)
    kuu_diag = prev_diag.copy()
    kuu_diag[:-1] += cw_ratio
    kuu_diag[1:] += cw_ratio
    kuu_off = prev_off - cw_ratio

    r3 = inv_q3 / h
    kuw_diag = np.zeros(n_nodes)
    kuw_diag[:-1] += r3
    kuw_diag[1:] += r3
    kuw_off = -r3

    rq = inv_q / h
    kwu_diag = np.zeros(n_nodes)
    kwu_diag[:-1] -= rq
    kwu_diag[1:] -= rq
    kwu_off = rq

    rhs_u = load_interpolated(mesh, rhs_nodal)
    rhs_u += tridiagonal_apply(prev_diag, prev_off, u)
    ru = rhs_u[1:-1].copy()
    rw = np.zeros(n_nodes - 2)
    ru[0] -= kuu_off[0] * u_b[0]
    ru[-1] -= kuu_off[-1] * u_b[1]
    rw[0] -= kwu_off[0] * u_b[0]
    rw[-1] -= kwu_off[-1] * u_b[1]

    n_int = n_nodes - 2
    size = 2 * n_int
    rhs = np.empty(size)
    rhs[0::2] = ru
    rhs[1::2] = rw

    diagonals = {}
    d0 = np.empty(size)
    d0[0::2] = kuu_diag[1:-1]
    d0[1::2] = m_diag[1:-1]
    diagonals[0] = d0
    if size > 1:
        d1 = np.zeros(size - 1)
        d1[0::2] = kuw_diag[1:-1]
        d1[1::2] = kwu_off[1:-1]
        dm1 = np.zeros(size - 1)
        dm1[0::2] = kwu_diag[1:-1]
        dm1[1::2] = kuw_off[1:-1]
        diagonals[1] = d1
        diagonals[-1] = dm1
    if size > 2:
        d2 = np.zeros(size - 2)
        d2[0::2] = kuu_off[1:-1]
        d2[1::2] = m_off[1:-1]
        diagonals[2] = d2
        diagonals[-2] = d2
    if size > 3:
        d3 = np.zeros(size - 3)
        d3[0::2] = kuw_off[1:-1]
        dm3 = np.zeros(size - 3)
        dm3[0::2] = kwu_off[1:-1]
        diagonals[3] = d3
        diagonals[-3] = dm3

    z = solve_banded(BandedMatrix.from_diagonals(size, diagonals), rhs)

    u_new = np.empty(n_nodes)
    u_new[0], u_new[-1] = u_b
    u_new[1:-1] = z[0::2]
    w_new = np.zeros(n_nodes)
    w_new[1:-1] = z[1::2]
    return u_new, w_new


def _concentration_arrays(mesh, delta, c, q_old, q_new, source_nodal, swap_weights=False):
    """One transport solve on raw arrays; returns the new c values.

    ``swap_weights`` deliberately pairs the length elements the wrong way
    round; it exists only so tests can pin the correct pairing down.
    """
    if swap_weights:
        q_old, q_new = q_new, q_old
    lhs_mass_diag, lhs_mass_off = mass_diagonals(mesh, q_new)
    stiff_diag, stiff_off = stiffness_diagonals(mesh, 1.0 / q_new)
    lhs_diag = lhs_mass_diag + delta * stiff_diag
    lhs_off = lhs_mass_off + delta * stiff_off

    rhs_mass_diag, rhs_mass_off = mass_diagonals(mesh, q_old)
    rhs = tridiagonal_apply(rhs_mass_diag, rhs_mass_off, c)
    rhs += delta * load_interpolated(mesh, source_nodal)

    interior = BandedMatrix.from_tridiagonal(
        lhs_off[1:-1], lhs_diag[1:-1], lhs_off[1:-1]
    ).solve(rhs[1:-1])
    c_new = np.zeros(mesh.n_nodes)
    c_new[1:-1] = interior
    return c_new


def geometry_step(state: State, problem: Problem, cfg: SchemeConfig):
    """Advance the graph and curvature fields by one step."""
    mesh = state.u.mesh
    _, delta = cfg.resolve_steps()
    t_next = state.t + delta
    rhs_nodal = _nodal_or_zero(problem.s_u, mesh.nodes, t_next)
    if problem.f is not None:
        rhs_nodal = rhs_nodal + np.asarray(problem.f(state.c.values), dtype=float)
    u_new, w_new = _geometry_arrays(
        mesh,
        state.u.values,
        state.w.values,
        1.0 / state.weights.q,
        rhs_nodal,
        cfg.mu(mesh.h_max) / delta,
        1.0 / delta,
        problem.u_b,
    )
    return (
        NodalFunction(mesh, u_new),
        NodalFunction(mesh, w_new, zero_trace=True),
    )


def concentration_step(
    state: State, u_next: NodalFunction, problem: Problem, cfg: SchemeConfig
) -> NodalFunction:
    """Advance the concentration along the already updated graph."""
    mesh = state.u.mesh
    _, delta = cfg.resolve_steps()
    t_next = state.t + delta
    weights_new = ElementWeights.of_values(mesh, u_next.values)
    c_new = _concentration_arrays(
        mesh,
        delta,
        state.c.values,
        state.weights.q,
        weights_new.q,
        _nodal_or_zero(problem.s_c, mesh.nodes, t_next),
    )
    return NodalFunction(mesh, c_new, zero_trace=True)


def step(state: State, problem: Problem, cfg: SchemeConfig) -> State:
    """One full operator-split step."""
    u_next, w_next = geometry_step(state, problem, cfg)
    c_next = concentration_step(state, u_next, problem, cfg)
    _, delta = cfg.resolve_steps()
    return State(
        m=state.m + 1,
        t=state.t + delta,
        u=u_next,
        w=w_next,
        c=c_next,
        weights=ElementWeights.of_values(state.u.mesh, u_next.values),
    )


def run(
    cfg: SchemeConfig,
    problem,
    *,
    exact=None,
    snapshot_times: Sequence[float] = (),
    space_order: int = 4,
    time_order: int = 4,
    space_rule: str = "gauss",
    progress: Optional[Callable] = None,
) -> RunResult:
    """Integrate a problem to its final time.

    ``problem`` may be a :class:`Problem` or a manufactured case; a case
    doubles as the exact solution and enables the error report.  Snapshots
    are recorded at the step closest to each requested time.
    """
    if isinstance(problem, ManufacturedCase):
        if exact is None:
            exact = problem
        problem = as_problem(problem)

    mesh = uniform_mesh(cfg.n_elements)
    steps, delta = cfg.resolve_steps()
    mu = cfg.mu(mesh.h_max)
    state0, newton_iterations = _init_on(mesh, cfg, problem)

    snap_steps = set()
    for ts in snapshot_times:
        if not 0.0 <= ts <= cfg.T + 1e-12:
            raise ValueError(f"snapshot time {ts} outside [0, {cfg.T}]")
        snap_steps.add(min(steps, int(round(ts / delta))))

    accumulator = None
    if exact is not None:
        accumulator = SpaceTimeErrors(
            mesh, exact, space_order=space_order, time_order=time_order, space_rule=space_rule
        )
        accumulator.start(0.0, state0.u.values, state0.w.values, state0.c.values)

    diag_m = np.arange(steps + 1)
    diag_t = diag_m * delta
    length = np.empty(steps + 1)
    bending = np.empty(steps + 1)
    c_mass = np.empty(steps + 1)

    u = state0.u.values.copy()
    w = state0.w.values.copy()
    c = state0.c.values.copy()
    q = state0.weights.q.copy()
    length[0] = discrete_length(mesh, state0.weights)
    bending[0] = bending_energy(mesh, w, state0.weights)
    c_mass[0] = concentration_mass(mesh, c, state0.weights)

    nodes = mesh.nodes
    h = mesh.h
    mu_over_delta = mu / delta
    inv_delta = 1.0 / delta
    snapshots = {}

    def record(m, t, u, w, c, weights):
        return State(
            m=m,
            t=t,
            u=NodalFunction(mesh, u.copy()),
            w=NodalFunction(mesh, w.copy(), zero_trace=True),
            c=NodalFunction(mesh, c.copy(), zero_trace=True),
            weights=weights,
        )

    if 0 in snap_steps:
        snapshots[0] = state0

    for m in range(1, steps + 1):
        t = m * delta
        rhs_nodal = _nodal_or_zero(problem.s_u, nodes, t)
        if problem.f is not None:
            rhs_nodal = rhs_nodal + np.asarray(problem.f(c), dtype=float)
        u_new, w_new = _geometry_arrays(
            mesh, u, w, 1.0 / q, rhs_nodal, mu_over_delta, inv_delta, problem.u_b
        )
        slope_new = np.diff(u_new) / h
        q_new = np.sqrt(1.0 + slope_new * slope_new)
        c_new = _concentration_arrays(
            mesh, delta, c, q, q_new, _nodal_or_zero(problem.s_c, nodes, t)
        )
        u, w, c, q = u_new, w_new, c_new, q_new

        if accumulator is not None:
            accumulator.push(t, u, w, c)
        length[m] = float(np.sum(h * q))
        wl = w[:-1]
        wr = w[1:]
        bending[m] = float(0.5 * np.sum(h * (wl * wl + wl * wr + wr * wr) / (3.0 * q)))
        c_mass[m] = float(np.sum(h * q * (c[:-1] + c[1:]) / 2.0))
        if m in snap_steps or m == steps:
            weights = ElementWeights(slope=slope_new, q=q_new)
            state = record(m, t, u, w, c, weights)
            if m in snap_steps:
                snapshots[m] = state
        if progress is not None and (m % max(1, steps // 100) == 0 or m == steps):
            progress(m, steps)

    final = state if steps > 0 else state0
    errors = accumulator.report(delta, mu) if accumulator is not None else None
    diagnostics = Diagnostics(
        m=diag_m,
        t=diag_t,
        length=length,
        bending=bending,
        c_mass=c_mass,
        newton_iterations=newton_iterations,
    )
    return RunResult(
        config=cfg,
        mesh=mesh,
        mu=mu,
        delta=delta,
        n_steps=steps,
        initial=state0,
        final=final,
        snapshots=tuple(snapshots[k] for k in sorted(snapshots)),
        diagnostics=diagnostics,
        errors=errors,
    )
