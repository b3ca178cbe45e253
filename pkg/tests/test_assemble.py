"""Element matrices against independently quadrature-assembled references."""

import numpy as np
import pytest

from elastodiff import (
    ElementWeights,
    Mesh1D,
    curvature_force_matrix,
    gauss_rule,
    load_interpolated,
    uniform_mesh,
    weighted_mass,
    weighted_stiffness,
)
from elastodiff.assemble import (
    curvature_weights,
    mass_diagonals,
    stiffness_diagonals,
    tridiagonal_apply,
)


def reference_mesh():
    return Mesh1D([0.0, 0.2, 0.35, 0.55, 0.8, 1.0])


def dense_form(mesh, element_weight, derivative):
    """Galerkin matrix sum_e int_e w_e(x) phi_i^(d) phi_j^(d) dx by quadrature."""
    rule = gauss_rule(6)
    n = mesh.n_nodes
    a = np.zeros((n, n))
    for e in range(mesh.n_elements):
        h = mesh.h[e]
        xg = mesh.nodes[e] + h * rule.points
        wx = element_weight(e, xg)
        for i, gi, phi_i in (
            (e, -1.0 / h, 1.0 - rule.points),
            (e + 1, 1.0 / h, rule.points),
        ):
            for j, gj, phi_j in (
                (e, -1.0 / h, 1.0 - rule.points),
                (e + 1, 1.0 / h, rule.points),
            ):
                if derivative:
                    a[i, j] += h * np.sum(rule.weights * wx) * gi * gj
                else:
                    a[i, j] += h * np.sum(rule.weights * wx * phi_i * phi_j)
    return a


def test_weighted_mass_matches_dense():
    rng = np.random.default_rng(11)
    mesh = reference_mesh()
    w = rng.uniform(0.5, 2.0, size=mesh.n_elements)
    ref = dense_form(mesh, lambda e, x: w[e], derivative=False)
    np.testing.assert_allclose(weighted_mass(mesh, w).to_dense(), ref, rtol=1e-13)


def test_weighted_stiffness_matches_dense():
    rng = np.random.default_rng(12)
    mesh = reference_mesh()
    w = rng.uniform(0.5, 2.0, size=mesh.n_elements)
    ref = dense_form(mesh, lambda e, x: w[e], derivative=True)
    np.testing.assert_allclose(
        weighted_stiffness(mesh, w).to_dense(), ref, rtol=1e-13, atol=1e-15
    )


def test_matrices_symmetric_positive():
    rng = np.random.default_rng(13)
    mesh = reference_mesh()
    w = rng.uniform(0.5, 2.0, size=mesh.n_elements)
    mass = weighted_mass(mesh, w).to_dense()
    stiff = weighted_stiffness(mesh, w).to_dense()
    np.testing.assert_array_equal(mass, mass.T)
    np.testing.assert_array_equal(stiff, stiff.T)
    assert np.all(np.linalg.eigvalsh(mass) > 0.0)
    # The stiffness matrix annihilates constants and is positive definite on
    # the zero-trace interior block.
    np.testing.assert_allclose(stiff @ np.ones(mesh.n_nodes), 0.0, atol=1e-14)
    assert np.all(np.linalg.eigvalsh(stiff[1:-1, 1:-1]) > 0.0)


def test_element_weights_validation():
    mesh = uniform_mesh(4)
    u = np.array([0.0, 0.5, -0.25, 1.0, 0.0])
    ew = ElementWeights.of_values(mesh, u)
    np.testing.assert_allclose(ew.q, np.sqrt(1.0 + ew.slope**2), rtol=1e-15)
    with pytest.raises(ValueError):
        ElementWeights(slope=np.array([1.0]), q=np.array([1.0]))
    with pytest.raises(ValueError):
        ElementWeights(slope=np.array([1.0, 2.0]), q=np.array([np.sqrt(2.0)]))


def test_curvature_force_matrix_matches_dense():
    rng = np.random.default_rng(14)
    mesh = reference_mesh()
    u = rng.normal(scale=0.3, size=mesh.n_nodes)
    wv = rng.normal(size=mesh.n_nodes)
    ew = ElementWeights.of_values(mesh, u)

    def weight(e, x):
        x0, x1 = mesh.nodes[e], mesh.nodes[e + 1]
        lam = (x - x0) / (x1 - x0)
        w_lin = wv[e] * (1.0 - lam) + wv[e + 1] * lam
        return 0.5 * w_lin**2 / ew.q[e] ** 3

    ref = dense_form(mesh, weight, derivative=True)
    got = curvature_force_matrix(mesh, wv, ew).to_dense()
    np.testing.assert_allclose(got, ref, rtol=1e-12, atol=1e-15)
    assert np.all(curvature_weights(wv, ew.q) >= 0.0)
    with pytest.raises(ValueError):
        curvature_force_matrix(mesh, wv[:-1], ew)


def test_tridiagonal_apply_matches_dense():
    rng = np.random.default_rng(15)
    diag = rng.normal(size=6)
    off = rng.normal(size=5)
    dense = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    v = rng.normal(size=6)
    np.testing.assert_allclose(tridiagonal_apply(diag, off, v), dense @ v, rtol=1e-14)


def test_load_interpolated_is_mass_times_nodal_values():
    mesh = reference_mesh()
    g = np.sin(2.0 * np.pi * mesh.nodes)
    ref = weighted_mass(mesh, np.ones(mesh.n_elements)).matvec(g)
    np.testing.assert_allclose(load_interpolated(mesh, g), ref, rtol=1e-14)
    with pytest.raises(ValueError):
        load_interpolated(mesh, g[:-1])


def test_diagonal_helpers_consistent_with_matrices():
    rng = np.random.default_rng(16)
    mesh = reference_mesh()
    w = rng.uniform(0.5, 2.0, size=mesh.n_elements)
    md, mo = mass_diagonals(mesh, w)
    sd, so = stiffness_diagonals(mesh, w)
    np.testing.assert_array_equal(weighted_mass(mesh, w).diagonal(0), md)
    np.testing.assert_array_equal(weighted_mass(mesh, w).diagonal(1), mo)
    np.testing.assert_array_equal(weighted_stiffness(mesh, w).diagonal(0), sd)
    np.testing.assert_array_equal(weighted_stiffness(mesh, w).diagonal(-1), so)
