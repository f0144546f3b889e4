"""Symmetric eigendecomposition.

Two solvers implement the EigenSolver port:

- JacobiEigenSolver: cyclic Jacobi rotations. Accurate and fully
  deterministic, used for the small per-level covariances of the tree.
- LapackEigenSolver: numpy.linalg.eigh, for full-sentence covariances
  (N·D up to several thousand) where O(K²) Python-level rotations per
  sweep are not practical.

AutoEigenSolver picks between them by matrix size and is the default.
Whatever solver runs,
symmetric_eigendecomposition applies the same normalization: eigenvalues
descending (ties keep the solver's slot order), eigenvectors returned as
rows, and each row oriented so its largest-magnitude entry is positive.
"""

from __future__ import annotations

import logging
import math
from typing import Optional

import numpy as np

from tmpca.core.errors import InvalidArgumentError, InvalidInputError, NumericalFailureError
from tmpca.core.interfaces import EigenSolver

logger = logging.getLogger(__name__)

SYMMETRY_TOLERANCE = 1e-10
JACOBI_TOLERANCE = 1e-12
JACOBI_MAX_SWEEPS = 100
DEFAULT_JACOBI_MAX_DIM = 64


def off_diagonal_norm(A: np.ndarray) -> float:
    """Frobenius norm of the off-diagonal part of a square matrix."""
    return float(np.linalg.norm(A - np.diag(np.diagonal(A))))


class JacobiEigenSolver(EigenSolver):
    """Cyclic (row-by-row) Jacobi eigenvalue iteration.

    Each sweep visits every pair (p, q), p < q, in order and applies the
    rotation that zeroes A[p, q]. Iteration stops when the off-diagonal
    Frobenius norm drops below tolerance · scale, where scale is the larger
    of |trace(S)| and ‖S‖_F, or fails after max_sweeps sweeps.
    """

    name = "jacobi"

    def __init__(
        self, tolerance: float = JACOBI_TOLERANCE, max_sweeps: int = JACOBI_MAX_SWEEPS
    ) -> None:
        """Initialize the solver.

        Args:
            tolerance: Relative off-diagonal tolerance.
            max_sweeps: Sweep budget before NumericalFailureError.
        """
        self.tolerance = tolerance
        self.max_sweeps = max_sweeps

    def __repr__(self) -> str:
        return f"JacobiEigenSolver(tolerance={self.tolerance}, max_sweeps={self.max_sweeps})"

    def decompose(self, S: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Diagonalize S by cyclic Jacobi rotations.

        Returns:
            (diagonal of the converged matrix, accumulated rotation matrix
            with eigenvectors in columns).

        Raises:
            NumericalFailureError: If the sweep budget is exhausted.
        """
        A = np.array(S, dtype=np.float64)
        size = A.shape[0]
        V = np.eye(size)
        scale = max(abs(float(np.trace(A))), float(np.linalg.norm(A)))
        threshold = self.tolerance * scale

        off = off_diagonal_norm(A)
        sweeps = 0
        while off > threshold:
            if sweeps == self.max_sweeps:
                raise NumericalFailureError(
                    f"Jacobi iteration did not converge in {self.max_sweeps} sweeps", off
                )
            for p in range(size - 1):
                for q in range(p + 1, size):
                    if A[p, q] != 0.0:
                        self._rotate(A, V, p, q)
            sweeps += 1
            off = off_diagonal_norm(A)

        logger.debug("jacobi converged: size=%d sweeps=%d off=%.3e", size, sweeps, off)
        return np.diagonal(A).copy(), V

    @staticmethod
    def _rotate(A: np.ndarray, V: np.ndarray, p: int, q: int) -> None:
        """Apply A <- JᵀAJ and V <- VJ for the rotation that zeroes A[p, q]."""
        apq = A[p, q]
        app = A[p, p]
        aqq = A[q, q]
        # Negligible next to both diagonal entries: drop it.
        g = 100.0 * abs(apq)
        if abs(app) + g == abs(app) and abs(aqq) + g == abs(aqq):
            A[p, q] = 0.0
            A[q, p] = 0.0
            return

        h = aqq - app
        if abs(h) + g == abs(h):
            t = apq / h
        else:
            theta = h / (2.0 * apq)
            t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
        c = 1.0 / math.sqrt(t * t + 1.0)
        s = t * c

        col_p = A[:, p].copy()
        col_q = A[:, q].copy()
        A[:, p] = c * col_p - s * col_q
        A[:, q] = s * col_p + c * col_q

        row_p = A[p, :].copy()
        row_q = A[q, :].copy()
        A[p, :] = c * row_p - s * row_q
        A[q, :] = s * row_p + c * row_q
        A[p, q] = 0.0
        A[q, p] = 0.0

        vec_p = V[:, p].copy()
        vec_q = V[:, q].copy()
        V[:, p] = c * vec_p - s * vec_q
        V[:, q] = s * vec_p + c * vec_q


class LapackEigenSolver(EigenSolver):
    """numpy.linalg.eigh (LAPACK syevd)."""

    name = "lapack"

    def __repr__(self) -> str:
        return "LapackEigenSolver()"

    def decompose(self, S: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Decompose S with LAPACK.

        Raises:
            NumericalFailureError: If LAPACK reports non-convergence.
        """
        try:
            eigenvalues, vectors = np.linalg.eigh(S)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailureError(f"eigh failed: {exc}", float("nan")) from exc
        return eigenvalues, vectors


class AutoEigenSolver(EigenSolver):
    """Jacobi up to max_jacobi_dim, LAPACK above."""

    name = "auto"

    def __init__(self, max_jacobi_dim: int = DEFAULT_JACOBI_MAX_DIM) -> None:
        """Initialize with the size threshold.

        Args:
            max_jacobi_dim: Largest K solved with Jacobi rotations.
        """
        self.max_jacobi_dim = max_jacobi_dim
        self._jacobi = JacobiEigenSolver()
        self._lapack = LapackEigenSolver()

    def __repr__(self) -> str:
        return f"AutoEigenSolver(max_jacobi_dim={self.max_jacobi_dim})"

    def decompose(self, S: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Dispatch on the matrix size."""
        if S.shape[0] <= self.max_jacobi_dim:
            return self._jacobi.decompose(S)
        return self._lapack.decompose(S)


def create_solver(name: str, max_jacobi_dim: int = DEFAULT_JACOBI_MAX_DIM) -> EigenSolver:
    """Create a solver by configuration name.

    Args:
        name: One of "jacobi", "lapack", "auto".
        max_jacobi_dim: Threshold for the auto solver.

    Raises:
        InvalidArgumentError: If the name is unknown.
    """
    if name == "jacobi":
        return JacobiEigenSolver()
    elif name == "lapack":
        return LapackEigenSolver()
    elif name == "auto":
        return AutoEigenSolver(max_jacobi_dim)
    else:
        raise InvalidArgumentError(f"Unknown eigensolver: {name}")


def orient_rows(vectors: np.ndarray) -> np.ndarray:
    """Flip each row so its largest-magnitude entry is positive.

    Ties in magnitude resolve to the lowest column index.

    Examples:
        >>> orient_rows(np.array([[0.6, -0.8], [-1.0, 0.0]])).tolist()
        [[-0.6, 0.8], [1.0, -0.0]]
    """
    oriented = np.array(vectors, dtype=np.float64)
    if oriented.size == 0:
        return oriented
    pivots = np.argmax(np.abs(oriented), axis=1)
    signs = np.where(oriented[np.arange(oriented.shape[0]), pivots] < 0, -1.0, 1.0)
    return oriented * signs[:, np.newaxis]


def symmetric_eigendecomposition(
    S: np.ndarray, solver: Optional[EigenSolver] = None
) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix with deterministic conventions.

    Args:
        S: Symmetric K×K matrix (symmetric within 1e-10).
        solver: Solver to use; defaults to AutoEigenSolver.

    Returns:
        (eigenvalues, eigenvectors): eigenvalues descending, length K;
        eigenvectors K×K with orthonormal rows, row i paired with
        eigenvalue i and oriented by orient_rows.

    Raises:
        InvalidInputError: If S is not square, not finite or not symmetric.
        NumericalFailureError: If the solver does not converge.

    Examples:
        >>> values, vectors = symmetric_eigendecomposition(np.diag([3.0, 1.0, 2.0]))
        >>> values.tolist()
        [3.0, 2.0, 1.0]
        >>> vectors.tolist()
        [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]]
    """
    matrix = np.asarray(S, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] == 0:
        raise InvalidInputError(f"expected a non-empty square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise InvalidInputError("matrix contains non-finite entries")
    asymmetry = float(np.max(np.abs(matrix - matrix.T)))
    if asymmetry > SYMMETRY_TOLERANCE:
        raise InvalidInputError(f"matrix is not symmetric (max |S - Sᵀ| = {asymmetry:.3e})")

    active = solver if solver is not None else AutoEigenSolver()
    eigenvalues, columns = active.decompose(matrix)
    order = np.argsort(-eigenvalues, kind="stable")
    return eigenvalues[order], orient_rows(columns[:, order].T)
