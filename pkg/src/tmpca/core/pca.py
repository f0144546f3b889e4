"""Principal component analysis kernel.

Fit and apply a centered PCA: the covariance is population-normalized
(1/M), decomposed by a symmetric eigensolver, and truncated to the top d
eigenvectors. Used directly for the full-sentence baseline and once per
level inside the tree transform (tmpca.core.tree).
"""

from __future__ import annotations

import logging
from typing import Any, Optional

import numpy as np

from tmpca.core.eigen import symmetric_eigendecomposition
from tmpca.core.errors import InvalidArgumentError
from tmpca.core.interfaces import EigenSolver
from tmpca.core.models import PcaTransform
from tmpca.core.validation import validate_matrix, validate_positive_int, validate_vector

logger = logging.getLogger(__name__)


def covariance_matrix(data: Any) -> tuple[np.ndarray, np.ndarray]:
    """Column means and population covariance of a data matrix.

    Args:
        data: M×K matrix, one sample per row (M ≥ 1, all entries finite).

    Returns:
        (mean, cov): mean has length K; cov = (1/M) Σ (xᵢ−mean)(xᵢ−mean)ᵀ,
        with the lower triangle mirrored from the upper so it is exactly
        symmetric.

    Raises:
        InvalidInputError: If the matrix is empty or has non-finite entries.

    Examples:
        >>> mean, cov = covariance_matrix([[1.0, 2.0], [3.0, 6.0]])
        >>> mean.tolist(), cov.tolist()
        ([2.0, 4.0], [[1.0, 2.0], [2.0, 4.0]])
    """
    matrix = validate_matrix(data, "data")
    mean = matrix.mean(axis=0)
    centered = matrix - mean
    product = (centered.T @ centered) / matrix.shape[0]
    upper = np.triu(product)
    return mean, upper + np.triu(product, k=1).T


def pca_fit(data: Any, out_dim: int, solver: Optional[EigenSolver] = None) -> PcaTransform:
    """Fit a PCA transform keeping the top out_dim components.

    Args:
        data: M×K training matrix.
        out_dim: Number of components d, 1 ≤ d ≤ K.
        solver: Eigensolver; defaults to AutoEigenSolver.

    Returns:
        PcaTransform with the data mean, the top-d eigenvector rows of the
        covariance and their eigenvalues (negative roundoff clamped to 0).

    Raises:
        InvalidArgumentError: If out_dim is not in [1, K].
        InvalidInputError: If the data is empty or non-finite.
    """
    matrix = validate_matrix(data, "data")
    in_dim = matrix.shape[1]
    out_dim = validate_positive_int(out_dim, "out_dim")
    if out_dim > in_dim:
        raise InvalidArgumentError(f"out_dim {out_dim} exceeds input dimension {in_dim}")

    mean, cov = covariance_matrix(matrix)
    eigenvalues, vectors = symmetric_eigendecomposition(cov, solver)
    eigenvalues = np.maximum(eigenvalues, 0.0)
    logger.debug("pca_fit: rows=%d in_dim=%d out_dim=%d", matrix.shape[0], in_dim, out_dim)
    return PcaTransform(
        in_dim=in_dim,
        out_dim=out_dim,
        mean=mean,
        eigenvalues=eigenvalues[:out_dim],
        basis=vectors[:out_dim],
        total_variance=float(np.trace(cov)),
    )


def pca_apply(transform: PcaTransform, x: Any) -> np.ndarray:
    """Project one vector: basis · (x − mean).

    Raises:
        InvalidArgumentError: If len(x) != transform.in_dim.
    """
    vector = validate_vector(x, transform.in_dim, "x")
    return transform.basis @ (vector - transform.mean)


def pca_apply_batch(transform: PcaTransform, data: Any) -> np.ndarray:
    """Project every row of an M×K matrix; row order is preserved.

    Zero rows give a 0×d result.

    Raises:
        InvalidArgumentError: If the row width differs from transform.in_dim.
    """
    matrix = np.asarray(data, dtype=np.float64)
    if matrix.size == 0 and matrix.ndim < 2:
        matrix = matrix.reshape(0, transform.in_dim)
    if matrix.ndim != 2 or matrix.shape[1] != transform.in_dim:
        raise InvalidArgumentError(
            f"data must have {transform.in_dim} columns, got shape {matrix.shape}"
        )
    return (matrix - transform.mean) @ transform.basis.T


def pca_reconstruct(transform: PcaTransform, y: Any) -> np.ndarray:
    """Map projected coordinates back to input space: mean + basisᵀ · y.

    Raises:
        InvalidArgumentError: If len(y) != transform.out_dim.
    """
    coords = validate_vector(y, transform.out_dim, "y")
    return transform.mean + transform.basis.T @ coords
