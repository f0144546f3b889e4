"""Tree-structured multi-linear PCA (TMPCA).

A sentence of N word vectors (each of size D) is reduced level by level:
at every level the sequence is cut into non-overlapping P-tuples, each
tuple is concatenated into one P·D vector and projected back to D
dimensions by a PCA transform shared by all positions of that level. After
log_P(N) levels one D-vector remains.

    level 0:  w1  w2  w3  w4          (N = 4, P = 2)
    level 1:  U1[w1‖w2]  U1[w3‖w4]
    level 2:  U2[...‖...]             -> output, length D
"""

from __future__ import annotations

import logging
from typing import Any, Optional

import numpy as np

from tmpca.core.errors import InvalidArgumentError, InvalidInputError, InvalidShapeError
from tmpca.core.interfaces import EigenSolver
from tmpca.core.models import PcaTransform, TmpcaModel
from tmpca.core.pca import pca_apply_batch, pca_fit
from tmpca.core.validation import tree_depth, validate_branching, validate_sentences

logger = logging.getLogger(__name__)


def build_level_matrix(sentences: Any, p: int) -> np.ndarray:
    """Stack the non-overlapping p-tuples of every sentence as rows.

    Args:
        sentences: M sentences, each ℓ vectors of width D (array-like, M×ℓ×D).
        p: Branching factor.

    Returns:
        (M·ℓ/p)×(p·D) matrix; row i·ℓ/p + j is sentence i's vectors
        [j·p, j·p + p) concatenated.

    Raises:
        InvalidShapeError: If ℓ is not divisible by p or sentences are ragged.

    Examples:
        >>> build_level_matrix([[[1.0], [2.0], [3.0], [4.0]]], 2).tolist()
        [[1.0, 2.0], [3.0, 4.0]]
    """
    p = validate_branching(p)
    batch = validate_sentences(sentences)
    m, length, width = batch.shape
    if length % p:
        raise InvalidShapeError(f"sequence length {length} is not divisible by p={p}")
    return batch.reshape(m * (length // p), p * width)


def _next_level(transform: PcaTransform, level_matrix: np.ndarray, m: int) -> np.ndarray:
    """Project a level matrix and regroup the outputs per sentence (M×ℓ'×D)."""
    reduced = pca_apply_batch(transform, level_matrix)
    return reduced.reshape(m, -1, transform.out_dim)


def tmpca_fit(sentences: Any, p: int, solver: Optional[EigenSolver] = None) -> TmpcaModel:
    """Fit one shared PCA per tree level.

    Args:
        sentences: M sentences of N vectors of dimension D; N must be a
            power of p (pad first).
        p: Branching factor P ≥ 2.
        solver: Eigensolver for every level; defaults to AutoEigenSolver.

    Returns:
        TmpcaModel with log_p(N) levels, level 1 first.

    Raises:
        InvalidInputError: If there are no sentences.
        InvalidShapeError: If N is not a power of p.
    """
    p = validate_branching(p)
    batch = validate_sentences(sentences)
    if batch.shape[0] == 0:
        raise InvalidInputError("tmpca_fit needs at least one sentence")
    m, n, d = batch.shape
    depth = tree_depth(n, p)

    levels: list[PcaTransform] = []
    current = batch
    for level in range(1, depth + 1):
        level_matrix = build_level_matrix(current, p)
        transform = pca_fit(level_matrix, d, solver)
        levels.append(transform)
        logger.info(
            "level %d/%d: %d rows x %d cols, retained variance %.4f",
            level,
            depth,
            level_matrix.shape[0],
            level_matrix.shape[1],
            float(transform.explained_variance_ratio().sum()),
        )
        current = _next_level(transform, level_matrix, m)
    return TmpcaModel(n=n, d=d, p=p, levels=levels)


def _check_shape(model: TmpcaModel, batch: np.ndarray) -> None:
    if batch.shape[1:] != (model.n, model.d):
        raise InvalidArgumentError(
            f"sentences must be {model.n}x{model.d} for this model, "
            f"got {batch.shape[1]}x{batch.shape[2]}"
        )


def tmpca_apply_batch(model: TmpcaModel, sentences: Any) -> np.ndarray:
    """Reduce every sentence to one D-vector; row order is preserved.

    Args:
        model: Fitted tree.
        sentences: M×N×D array-like; an empty list gives a 0×D matrix.

    Returns:
        M×D matrix.

    Raises:
        InvalidArgumentError: If the sentence shape differs from (model.n, model.d).
    """
    batch = validate_sentences(sentences)
    if batch.shape[0] == 0:
        return np.zeros((0, model.d))
    _check_shape(model, batch)
    m = batch.shape[0]
    current = batch
    for transform in model.levels:
        current = _next_level(transform, build_level_matrix(current, model.p), m)
    return current.reshape(m, model.d)


def tmpca_apply(model: TmpcaModel, sentence: Any) -> np.ndarray:
    """Reduce one N×D sentence to a D-vector.

    Raises:
        InvalidArgumentError: If the sentence is not N×D.
    """
    matrix = np.asarray(sentence, dtype=np.float64)
    if matrix.ndim != 2:
        raise InvalidArgumentError(f"sentence must be a {model.n}x{model.d} matrix")
    return tmpca_apply_batch(model, matrix[np.newaxis])[0]


def level_shapes(model: TmpcaModel) -> list[tuple[int, int, int]]:
    """Per-level (tuples per sentence, input width, output width).

    Examples:
        >>> from tmpca.core.models import TmpcaModel
        >>> level_shapes(TmpcaModel(n=1, d=3, p=2, levels=[]))
        []
    """
    return [
        (model.n // model.p**level, model.p * model.d, model.d)
        for level in range(1, model.depth + 1)
    ]
