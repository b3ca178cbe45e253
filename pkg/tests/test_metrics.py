"""Error accumulator semantics, convergence orders and table assembly."""

import numpy as np
import pytest

from elastodiff import (
    KINDS,
    ErrorReport,
    SchemeConfig,
    SpaceTimeErrors,
    build_table,
    eoc,
    get_case,
    run,
    uniform_mesh,
)

from conftest import quad_error_norms

GRADIENT_KINDS = ("u_LinfH1", "u_H1H1", "w_L2H1", "c_L2H1")
VALUE_KINDS = tuple(k for k in KINDS if k not in GRADIENT_KINDS)


def profile_u(x):
    return 0.3 * np.sin(np.pi * x)


def profile_u_x(x):
    return 0.3 * np.pi * np.cos(np.pi * x)


def profile_w(x):
    return np.cos(2.0 * np.pi * x)


def profile_w_x(x):
    return -2.0 * np.pi * np.sin(2.0 * np.pi * x)


def profile_c(x):
    return x * x * (1.0 - x)


def profile_c_x(x):
    return 2.0 * x - 3.0 * x * x


class LinearInTime:
    """Fields with affine time dependence: exact under the time treatment.

    The accumulator interpolates states linearly inside every step and uses
    difference quotients in time, so for these fields the only error it can
    see is the spatial one, scaled by the known time amplitudes.
    """

    u = staticmethod(lambda x, t: (1.0 + t) * profile_u(x))
    u_x = staticmethod(lambda x, t: (1.0 + t) * profile_u_x(x))
    u_t = staticmethod(lambda x, t: profile_u(x) + 0.0 * t)
    u_xt = staticmethod(lambda x, t: profile_u_x(x) + 0.0 * t)
    w = staticmethod(lambda x, t: (1.0 + 0.5 * t) * profile_w(x))
    w_x = staticmethod(lambda x, t: (1.0 + 0.5 * t) * profile_w_x(x))
    c = staticmethod(lambda x, t: (1.0 + t) * profile_c(x))
    c_x = staticmethod(lambda x, t: (1.0 + t) * profile_c_x(x))


def feed_interpolants(mesh, exact, steps=8, T=1.0, perturb=None, **kwargs):
    """Stream the nodal interpolant of ``exact`` through an accumulator."""
    acc = SpaceTimeErrors(mesh, exact, **kwargs)
    ts = np.linspace(0.0, T, steps + 1)
    acc.start(0.0, exact.u(mesh.nodes, 0.0), exact.w(mesh.nodes, 0.0), exact.c(mesh.nodes, 0.0))
    for m, t in enumerate(ts[1:], start=1):
        u = exact.u(mesh.nodes, t)
        w = exact.w(mesh.nodes, t)
        c = exact.c(mesh.nodes, t)
        if perturb is not None and m == steps:
            u, w, c = perturb(u, w, c)
        acc.push(t, u, w, c)
    return acc.report(ts[1] - ts[0], 0.0)


def test_exact_affine_fields_produce_no_error():
    class Bilinear:
        u = staticmethod(lambda x, t: (1.0 + t) * x)
        u_x = staticmethod(lambda x, t: 1.0 + t + 0.0 * x)
        u_t = staticmethod(lambda x, t: x + 0.0 * t)
        u_xt = staticmethod(lambda x, t: 1.0 + 0.0 * x + 0.0 * t)
        w = staticmethod(lambda x, t: (1.0 - 2.0 * t) * (x - 0.25))
        w_x = staticmethod(lambda x, t: 1.0 - 2.0 * t + 0.0 * x)
        c = staticmethod(lambda x, t: t * (1.0 - x))
        c_x = staticmethod(lambda x, t: -t + 0.0 * x)

    rep = feed_interpolants(uniform_mesh(13), Bilinear(), steps=7)
    for kind in KINDS:
        assert rep[kind] <= 1e-24, kind


def test_magnitudes_match_closed_form_interpolation_errors():
    mesh = uniform_mesh(16)
    rep = feed_interpolants(mesh, LinearInTime())
    eu = quad_error_norms(mesh, profile_u(mesh.nodes), profile_u, profile_u_x)
    ew = quad_error_norms(mesh, profile_w(mesh.nodes), profile_w, profile_w_x)
    ec = quad_error_norms(mesh, profile_c(mesh.nodes), profile_c, profile_c_x)
    T = 1.0
    expected = {
        "u_LinfL2": (1.0 + T) ** 2 * eu[0] ** 2,
        "u_LinfH1": (1.0 + T) ** 2 * eu[1] ** 2,
        "u_H1L2": T * eu[0] ** 2,
        "u_H1H1": T * eu[1] ** 2,
        "w_LinfL2": (1.0 + 0.5 * T) ** 2 * ew[0] ** 2,
        "w_L2H1": 2.0 / 3.0 * ((1.0 + 0.5 * T) ** 3 - 1.0) * ew[1] ** 2,
        "c_LinfL2": (1.0 + T) ** 2 * ec[0] ** 2,
        "c_L2H1": ((1.0 + T) ** 3 - 1.0) / 3.0 * ec[1] ** 2,
    }
    for kind, value in expected.items():
        assert rep[kind] == pytest.approx(value, rel=1e-6), kind


def test_squared_norms_converge_at_twice_the_field_order():
    coarse = feed_interpolants(uniform_mesh(16), LinearInTime())
    fine = feed_interpolants(uniform_mesh(32), LinearInTime())
    for kind in VALUE_KINDS:
        assert 3.9 <= np.log2(coarse[kind] / fine[kind]) <= 4.1, kind
    for kind in GRADIENT_KINDS:
        assert 1.9 <= np.log2(coarse[kind] / fine[kind]) <= 2.1, kind


def test_any_field_perturbation_increases_every_matching_norm():
    mesh = uniform_mesh(16)
    base = feed_interpolants(mesh, LinearInTime())

    def bump(u, w, c):
        u = u.copy(); w = w.copy(); c = c.copy()
        # Larger than every interpolation error, so no cancellation can hide
        # it; applied to the final state, where the suprema are attained.
        u[5] += 3e-2
        w[9] += 3e-2
        c[7] += 3e-2
        return u, w, c

    bumped = feed_interpolants(mesh, LinearInTime(), perturb=bump)
    for kind in KINDS:
        assert bumped[kind] > base[kind], kind


def test_vertex_midpoint_sampling_reweights_known_ratios():
    mesh = uniform_mesh(16)
    gauss = feed_interpolants(mesh, LinearInTime())
    trap = feed_interpolants(mesh, LinearInTime(), space_rule="trapezoid")
    for kind in GRADIENT_KINDS:
        # Sampling the constant slope gap at vertices and midpoint weighs
        # (x - mid)^2 like h^2/8 instead of the exact h^2/12.
        assert 1.49 <= trap[kind] / gauss[kind] <= 1.51, kind
    for kind in VALUE_KINDS:
        # The value error vanishes at the vertices, so only the midpoint
        # contributes: h/2 * (h^2 g''/8)^2 versus the exact h^5 g''^2 / 120.
        assert 0.93 <= trap[kind] / gauss[kind] <= 0.945, kind
    with pytest.raises(ValueError, match="space_rule"):
        SpaceTimeErrors(mesh, LinearInTime(), space_rule="simpson")


def test_quadrature_orders_agree_on_a_real_run():
    cfg = SchemeConfig(n_elements=31, c_mu=40.0, r=1.0)
    low = run(cfg, get_case("A"), space_order=4, time_order=4).errors
    high = run(cfg, get_case("A"), space_order=8, time_order=8).errors
    for kind in KINDS:
        assert abs(low[kind] - high[kind]) <= 1e-3 * high[kind], kind


def test_push_requires_start():
    acc = SpaceTimeErrors(uniform_mesh(4), LinearInTime())
    with pytest.raises(RuntimeError, match="start"):
        acc.push(0.1, np.zeros(5), np.zeros(5), np.zeros(5))


def test_order_computation_on_model_sequences():
    assert eoc([10, 20], [1e-2, 2.5e-3]) == [None, pytest.approx(2.0, abs=1e-12)]
    ns = [10, 20, 40, 80]
    errors = [n ** -3.0 for n in ns]
    orders = eoc(ns, errors)
    assert orders[0] is None
    for value in orders[1:]:
        assert value == pytest.approx(3.0, abs=1e-12)
    # Orders follow the mesh counts actually given, including uneven jumps.
    uneven = eoc([160, 200], [8.779e-07, 5.683e-07])
    assert uneven[1] == pytest.approx(1.9489, abs=5e-4)
    assert eoc([161, 201], [8.779e-07, 5.683e-07])[1] == pytest.approx(1.9598, abs=5e-4)


@pytest.mark.parametrize(
    "ns, errors, message",
    [
        ([10, 20], [1.0], "equal length"),
        ([20, 10], [1.0, 2.0], "strictly increasing"),
        ([10, 20], [1.0, 0.0], "positive"),
    ],
)
def test_order_computation_validation(ns, errors, message):
    with pytest.raises(ValueError, match=message):
        eoc(ns, errors)


def _report(n, **overrides):
    values = {kind: float(n) ** -2.0 for kind in KINDS}
    values.update(overrides)
    return ErrorReport(n_elements=n, delta=1.0 / n**2, mu=40.0 / n, **values)


def test_table_assembly_and_zero_column_guard():
    reports = [_report(10, c_LinfL2=0.0), _report(20, c_LinfL2=0.0)]
    table = build_table("A", 40.0, 1.0, reports)
    assert table.n_values == (10, 20)
    errors, orders = table.column("u_LinfL2")
    assert errors == [1e-2, 2.5e-3]
    assert orders[1] == pytest.approx(2.0, abs=1e-12)
    assert table.column("c_LinfL2")[1] == [None, None]
    assert table.case == "A" and table.c_mu == 40.0 and table.r == 1.0


def test_report_lookup_and_metadata():
    rep = _report(10)
    assert rep["u_LinfL2"] == pytest.approx(1e-2)
    with pytest.raises(KeyError):
        rep["u_L2"]
    d = rep.as_dict()
    assert set(d) == set(KINDS) | {"n_elements", "delta", "mu"}
    assert d["n_elements"] == 10 and d["mu"] == 4.0
