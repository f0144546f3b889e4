"""Input validation utilities for tmpca.

Every public operation validates its arguments through these helpers before
doing any numerical work, so shape and range errors surface with a message
that names the offending field instead of as a numpy broadcasting error.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from tmpca.core.errors import InvalidArgumentError, InvalidInputError, InvalidShapeError


def validate_positive_int(value: int, field_name: str) -> int:
    """Validate that an integer parameter is at least one.

    Args:
        value: The value to validate.
        field_name: Name of the parameter, used in the error message.

    Returns:
        The validated value (unchanged).

    Raises:
        InvalidArgumentError: If the value is not a positive integer.

    Examples:
        >>> validate_positive_int(4, "n")
        4
    """
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise InvalidArgumentError(f"{field_name} must be an integer, got {value!r}")
    if value < 1:
        raise InvalidArgumentError(f"{field_name} must be positive, got {value}")
    return int(value)


def validate_branching(p: int) -> int:
    """Validate a tree branching factor (P ≥ 2).

    Raises:
        InvalidArgumentError: If p is not an integer of at least 2.
    """
    p = validate_positive_int(p, "p")
    if p < 2:
        raise InvalidArgumentError(f"branching factor p must be at least 2, got {p}")
    return p


def tree_depth(n: int, p: int) -> int:
    """Return L such that p**L == n exactly.

    Args:
        n: Sequence length.
        p: Branching factor.

    Returns:
        The exact base-p logarithm of n (0 when n == 1).

    Raises:
        InvalidShapeError: If n is not a power of p.

    Examples:
        >>> tree_depth(8, 2)
        3
        >>> tree_depth(1, 4)
        0
    """
    n = validate_positive_int(n, "n")
    p = validate_branching(p)
    depth = 0
    remaining = n
    while remaining > 1:
        if remaining % p:
            raise InvalidShapeError(
                f"sentence length {n} is not a power of branching factor {p}; pad it first"
            )
        remaining //= p
        depth += 1
    return depth


def is_power_of(n: int, p: int) -> bool:
    """Return True if n is a (non-negative integer) power of p."""
    try:
        tree_depth(n, p)
    except InvalidShapeError:
        return False
    return True


def next_power_of(n: int, p: int) -> int:
    """Return the smallest power of p that is at least n.

    Examples:
        >>> next_power_of(50, 2)
        64
        >>> next_power_of(64, 2)
        64
        >>> next_power_of(10, 3)
        27
    """
    n = validate_positive_int(n, "n")
    p = validate_branching(p)
    power = 1
    while power < n:
        power *= p
    return power


def validate_matrix(data: Any, field_name: str, *, allow_empty: bool = False) -> np.ndarray:
    """Convert data to a finite float64 matrix.

    Args:
        data: Anything numpy can turn into a 2-D array.
        field_name: Name used in error messages.
        allow_empty: Accept zero rows (batch operations do).

    Returns:
        A float64 ndarray of shape (rows, cols).

    Raises:
        InvalidInputError: If the matrix is empty, ragged or has non-finite entries.
    """
    try:
        matrix = np.asarray(data, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{field_name} is not a numeric matrix: {exc}") from exc
    if matrix.ndim != 2:
        raise InvalidInputError(f"{field_name} must be 2-dimensional, got shape {matrix.shape}")
    if matrix.shape[1] == 0 or (matrix.shape[0] == 0 and not allow_empty):
        raise InvalidInputError(f"{field_name} is empty (shape {matrix.shape})")
    if not np.all(np.isfinite(matrix)):
        raise InvalidInputError(f"{field_name} contains non-finite entries")
    return matrix


def validate_vector(x: Any, length: int, field_name: str) -> np.ndarray:
    """Convert x to a float64 vector of the expected length.

    Raises:
        InvalidArgumentError: If x is not 1-D or its length differs.
    """
    vector = np.asarray(x, dtype=np.float64)
    if vector.ndim != 1 or vector.shape[0] != length:
        raise InvalidArgumentError(
            f"{field_name} must be a vector of length {length}, got shape {vector.shape}"
        )
    return vector


def validate_sentences(sentences: Any, field_name: str = "sentences") -> np.ndarray:
    """Convert a batch of sentences to a float64 array of shape (M, N, D).

    Zero sentences are accepted; the caller decides whether that is an error.

    Raises:
        InvalidShapeError: If the sentences are ragged or not 3-dimensional.
        InvalidInputError: If any entry is non-finite.
    """
    try:
        batch = np.asarray(sentences, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidShapeError(f"{field_name} must share one (N, D) shape: {exc}") from exc
    if batch.size == 0 and batch.ndim < 3:
        return batch.reshape(0, 0, 0)
    if batch.ndim != 3:
        raise InvalidShapeError(
            f"{field_name} must have shape (M, N, D), got {batch.shape}"
        )
    if not np.all(np.isfinite(batch)):
        raise InvalidInputError(f"{field_name} contain non-finite entries")
    return batch
