"""Banded LU solves against dense linear algebra."""

import numpy as np
import pytest

from elastodiff import BandedMatrix, SingularMatrixError, solve_banded, uniform_mesh
from elastodiff.assemble import load_interpolated, stiffness_diagonals


def random_banded(rng, n, lower, upper):
    dense = np.zeros((n, n))
    for d in range(-lower, upper + 1):
        dense += np.diag(rng.normal(size=n - abs(d)), d)
    dense += np.diag(np.full(n, lower + upper + 2.0))
    return dense


@pytest.mark.parametrize(
    "n,lower,upper", [(5, 1, 1), (9, 2, 3), (12, 3, 3), (7, 0, 2), (6, 2, 0)]
)
def test_solve_matches_dense(n, lower, upper):
    rng = np.random.default_rng(3 + n)
    dense = random_banded(rng, n, lower, upper)
    mat = BandedMatrix.from_dense(dense, lower, upper)
    np.testing.assert_allclose(mat.to_dense(), dense)
    b = rng.normal(size=n)
    x = mat.solve(b)
    np.testing.assert_allclose(x, np.linalg.solve(dense, b), rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(mat.matvec(x), b, rtol=1e-10, atol=1e-12)


def test_factorization_reused_and_deterministic():
    rng = np.random.default_rng(5)
    dense = random_banded(rng, 6, 1, 1)
    mat = BandedMatrix.from_dense(dense, 1, 1)
    b1, b2 = rng.normal(size=6), rng.normal(size=6)
    x1 = mat.solve(b1)
    x2 = mat.solve(b2)
    np.testing.assert_allclose(x1, np.linalg.solve(dense, b1), rtol=1e-10)
    np.testing.assert_allclose(x2, np.linalg.solve(dense, b2), rtol=1e-10)
    np.testing.assert_array_equal(mat.solve(b1), x1)
    np.testing.assert_allclose(solve_banded(mat, b1), x1, rtol=1e-13)


def test_tridiagonal_and_diagonals_layout():
    sub = [1.0, 2.0]
    diag = [4.0, 5.0, 6.0]
    sup = [7.0, 8.0]
    expect = np.array([[4.0, 7.0, 0.0], [1.0, 5.0, 8.0], [0.0, 2.0, 6.0]])
    mat = BandedMatrix.from_tridiagonal(sub, diag, sup)
    np.testing.assert_array_equal(mat.to_dense(), expect)
    assert mat.entry(2, 1) == 2.0
    assert mat.entry(0, 2) == 0.0
    mat2 = BandedMatrix.from_diagonals(3, {0: diag, -1: sub, 1: sup})
    np.testing.assert_array_equal(mat2.to_dense(), expect)
    np.testing.assert_array_equal(mat2.diagonal(1), sup)
    with pytest.raises(ValueError):
        BandedMatrix.from_diagonals(3, {0: diag, 1: [1.0, 2.0, 3.0]})
    with pytest.raises(ValueError):
        BandedMatrix(3, 1, 1, np.zeros((2, 3)))


def test_singular_matrix_raises():
    dense = np.array([[1.0, 2.0], [0.5, 1.0]])
    mat = BandedMatrix.from_dense(dense, 1, 1)
    with pytest.raises(SingularMatrixError):
        mat.solve(np.ones(2))


def test_poisson_nodal_convergence():
    # -u'' = pi^2 sin(pi x) with the interpolated load: nodal errors fall
    # at second order.
    errors = []
    for n in (16, 32):
        mesh = uniform_mesh(n)
        diag, off = stiffness_diagonals(mesh, np.ones(n))
        rhs = load_interpolated(mesh, np.pi**2 * np.sin(np.pi * mesh.nodes))
        interior = BandedMatrix.from_tridiagonal(
            off[1:-1], diag[1:-1], off[1:-1]
        ).solve(rhs[1:-1])
        errors.append(np.max(np.abs(interior - np.sin(np.pi * mesh.nodes[1:-1]))))
    assert errors[0] / errors[1] == pytest.approx(4.0, rel=0.05)
