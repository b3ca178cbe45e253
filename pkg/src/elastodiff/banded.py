"""Banded linear algebra for the tridiagonal and block-banded step systems.

Matrices are stored in LAPACK band format: ``ab[u + i - j, j] = A[i, j]``
for ``-l <= i - j <= u`` with ``l`` sub- and ``u`` superdiagonals.  Solves
go through LAPACK's partial-pivot band LU (``gbsv``/``gbtrf``); a matrix
reported singular there is retried densely once and then rejected with
:class:`SingularMatrixError`.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack

__all__ = ["BandedMatrix", "SingularMatrixError", "solve_banded"]

# Relative pivot threshold below which a factorization counts as singular.
PIVOT_TOL = 1e-14


class SingularMatrixError(Exception):
    """Raised when band and dense factorizations both fail."""


class BandedMatrix:
    """Square band matrix with ``lower`` sub- and ``upper`` superdiagonals."""

    def __init__(self, n: int, lower: int, upper: int, ab: np.ndarray):
        ab = np.ascontiguousarray(ab, dtype=float)
        if ab.shape != (lower + upper + 1, n):
            raise ValueError(
                f"band storage must have shape {(lower + upper + 1, n)}, got {ab.shape}"
            )
        self.n = n
        self.lower = lower
        self.upper = upper
        self.ab = ab
        self._factor = None

    @classmethod
    def zeros(cls, n: int, lower: int, upper: int) -> "BandedMatrix":
        return cls(n, lower, upper, np.zeros((lower + upper + 1, n)))

    @classmethod
    def from_tridiagonal(cls, sub, diag, sup) -> "BandedMatrix":
        diag = np.asarray(diag, dtype=float)
        n = diag.size
        ab = np.zeros((3, n))
        ab[0, 1:] = sup
        ab[1, :] = diag
        ab[2, :-1] = sub
        return cls(n, 1, 1, ab)

    @classmethod
    def from_diagonals(cls, n: int, diagonals: dict) -> "BandedMatrix":
        """Build from ``{offset: values}`` with ``values`` of length ``n - |offset|``."""
        upper = max(max(diagonals), 0)
        lower = max(-min(diagonals), 0)
        ab = np.zeros((lower + upper + 1, n))
        for d, values in diagonals.items():
            values = np.asarray(values, dtype=float)
            if values.size != n - abs(d):
                raise ValueError(f"diagonal {d} must have length {n - abs(d)}")
            if d >= 0:
                ab[upper - d, d:] = values
            else:
                ab[upper - d, : n + d] = values
        return cls(n, lower, upper, ab)

    @classmethod
    def from_dense(cls, a: np.ndarray, lower: int, upper: int) -> "BandedMatrix":
        a = np.asarray(a, dtype=float)
        n = a.shape[0]
        mat = cls.zeros(n, lower, upper)
        for d in range(-lower, upper + 1):
            mat.diagonal(d)[:] = np.diagonal(a, d)
        return mat

    def diagonal(self, d: int = 0) -> np.ndarray:
        """Writable view of the ``d``-th diagonal (positive above the main one)."""
        if not -self.lower <= d <= self.upper:
            raise IndexError(f"diagonal {d} outside band ({-self.lower}, {self.upper})")
        row = self.ab[self.upper - d]
        return row[d:] if d >= 0 else row[: self.n + d]

    def entry(self, i: int, j: int) -> float:
        if -self.lower <= i - j <= self.upper:
            return float(self.ab[self.upper + i - j, j])
        return 0.0

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for d in range(-self.lower, self.upper + 1):
            np.fill_diagonal(a[max(0, -d) :, max(0, d) :], self.diagonal(d))
        return a

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.zeros_like(x)
        for d in range(-self.lower, self.upper + 1):
            v = self.diagonal(d)
            if d >= 0:
                y[: self.n - d] += v * x[d:]
            else:
                y[-d:] += v * x[: self.n + d]
        return y

    def factor(self) -> None:
        """Band LU with partial pivoting, cached for repeated solves."""
        padded = np.zeros((2 * self.lower + self.upper + 1, self.n))
        padded[self.lower :, :] = self.ab
        lu, ipiv, info = lapack.dgbtrf(padded, self.lower, self.upper)
        if info > 0:
            self._factor = "singular"
            return
        if info < 0:
            raise ValueError(f"illegal argument {-info} passed to band LU")
        pivots = np.abs(lu[self.lower + self.upper])
        if pivots.size and pivots.min() <= PIVOT_TOL * max(pivots.max(), 1.0):
            self._factor = "singular"
            return
        self._factor = (lu, ipiv)

    def solve(self, b: np.ndarray) -> np.ndarray:
        """Solve ``A x = b``; falls back to a dense solve on a singular pivot."""
        b = np.asarray(b, dtype=float)
        if self._factor is None:
            self.factor()
        if self._factor == "singular":
            return self._solve_dense(b)
        lu, ipiv = self._factor
        x, info = lapack.dgbtrs(lu, self.lower, self.upper, b, ipiv)
        if info != 0:
            return self._solve_dense(b)
        return x

    def _solve_dense(self, b: np.ndarray) -> np.ndarray:
        try:
            x = np.linalg.solve(self.to_dense(), b)
        except np.linalg.LinAlgError as exc:
            raise SingularMatrixError(str(exc)) from exc
        if not np.all(np.isfinite(x)):
            raise SingularMatrixError("dense fallback produced non-finite solution")
        return x


def solve_banded(matrix: BandedMatrix, b: np.ndarray) -> np.ndarray:
    """One-shot band solve (no factorization reuse)."""
    b = np.asarray(b, dtype=float)
    try:
        return sla.solve_banded((matrix.lower, matrix.upper), matrix.ab, b)
    except np.linalg.LinAlgError:
        return matrix._solve_dense(b)
