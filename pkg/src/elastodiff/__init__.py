"""Finite elements for elastic flow of a graph coupled to lateral diffusion.

The package discretises the fourth order flow of a curve given as a graph
over the unit interval, written as a second order system for the height u
and the weighted curvature w = -u_xx / Q^2, coupled to an advection
diffusion equation for a concentration living on the moving curve.  Time
stepping is linearly implicit with a velocity penalty mu = C_mu h^r; the
convergence studies reproduce the expected orders with manufactured
solutions.
"""

from .assemble import (
    ElementWeights,
    curvature_force_matrix,
    load_interpolated,
    weighted_mass,
    weighted_stiffness,
)
from .banded import BandedMatrix, SingularMatrixError, solve_banded
from .manufactured import (
    DerivedFields,
    ManufacturedCase,
    case_labels,
    get_case,
    linear_coupling,
    linear_coupling_deriv,
)
from .mesh import GaussRule, Mesh1D, NodalFunction, gauss_rule, interpolate, uniform_mesh
from .metrics import KINDS, SPACE_RULES, EocTable, ErrorReport, SpaceTimeErrors, build_table, eoc
from .projections import (
    NewtonConfig,
    NewtonConvergenceError,
    initial_u_alt,
    initial_w,
    normalized_slope,
    normalized_slope_deriv,
    ritz_u,
    ritz_w,
)
from .scheme import (
    Diagnostics,
    Problem,
    RunResult,
    SchemeConfig,
    State,
    as_problem,
    bending_energy,
    concentration_mass,
    concentration_step,
    discrete_length,
    geometry_step,
    init,
    run,
    step,
)
from .study import PRESETS, StudySpec, run_single, run_study

__version__ = "0.1.0"

__all__ = [
    "BandedMatrix",
    "Diagnostics",
    "DerivedFields",
    "ElementWeights",
    "EocTable",
    "ErrorReport",
    "GaussRule",
    "KINDS",
    "ManufacturedCase",
    "Mesh1D",
    "NewtonConfig",
    "NewtonConvergenceError",
    "NodalFunction",
    "PRESETS",
    "Problem",
    "RunResult",
    "SPACE_RULES",
    "SchemeConfig",
    "SingularMatrixError",
    "SpaceTimeErrors",
    "State",
    "StudySpec",
    "as_problem",
    "bending_energy",
    "build_table",
    "case_labels",
    "concentration_mass",
    "concentration_step",
    "curvature_force_matrix",
    "discrete_length",
    "eoc",
    "gauss_rule",
    "geometry_step",
    "get_case",
    "init",
    "initial_u_alt",
    "initial_w",
    "interpolate",
    "linear_coupling",
    "linear_coupling_deriv",
    "load_interpolated",
    "normalized_slope",
    "normalized_slope_deriv",
    "ritz_u",
    "ritz_w",
    "run",
    "run_single",
    "run_study",
    "solve_banded",
    "step",
    "uniform_mesh",
    "weighted_mass",
    "weighted_stiffness",
]
