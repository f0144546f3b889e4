"""Binary linear SVM trained with Pegasos-style sub-gradient descent.

The hinge objective  λ/2·‖w‖² + mean(max(0, 1 − y(w·x + b)))  is minimized
with step size 1/(λt) at step t. Each epoch visits the training set in a
seeded random order, in batches of batch_size (1 = classic per-sample
Pegasos). The bias follows the same averaged sub-gradient but is not
regularized. No projection step is applied; the final iterate is returned.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from typing import Any, Optional

import numpy as np

from tmpca.core.errors import InvalidArgumentError, InvalidInputError
from tmpca.core.models import SvmModel
from tmpca.core.validation import validate_matrix, validate_positive_int, validate_vector

logger = logging.getLogger(__name__)

DEFAULT_LAMBDA = 1e-4
DEFAULT_EPOCHS = 50
DEFAULT_SEED = 17
DEFAULT_LAMBDA_GRID = (1e-2, 1e-3, 1e-4)


def _validate_labels(labels: Any, size: int) -> np.ndarray:
    y = validate_vector(labels, size, "labels")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise InvalidInputError("labels must be +1 or -1")
    return y


def svm_fit(
    features: Any,
    labels: Any,
    lambda_: float = DEFAULT_LAMBDA,
    epochs: int = DEFAULT_EPOCHS,
    seed: int = DEFAULT_SEED,
    batch_size: int = 1,
    objective_log: Optional[list[float]] = None,
) -> SvmModel:
    """Train a linear SVM.

    Args:
        features: M×d training matrix (M ≥ 2).
        labels: Length-M vector of ±1 labels; both classes must occur.
        lambda_: Regularization strength λ > 0.
        epochs: Passes over the training set (≥ 1).
        seed: Seed for the per-epoch shuffles.
        batch_size: Samples per sub-gradient step.
        objective_log: If given, the regularized hinge objective on each
            step's batch (evaluated before the update) is appended to it.

    Returns:
        The final iterate as an SvmModel. Identical inputs give a
        bit-identical model.

    Raises:
        InvalidInputError: Single-class labels, too few samples or
            non-finite features.
        InvalidArgumentError: Non-positive λ, epochs or batch_size.
    """
    X = validate_matrix(features, "features")
    m, dim = X.shape
    y = _validate_labels(labels, m)
    if m < 2 or np.all(y == y[0]):
        raise InvalidInputError("svm_fit needs at least two samples from both classes")
    if not lambda_ > 0:
        raise InvalidArgumentError(f"lambda must be positive, got {lambda_}")
    epochs = validate_positive_int(epochs, "epochs")
    batch_size = validate_positive_int(batch_size, "batch_size")

    rng = np.random.default_rng(seed)
    w = np.zeros(dim)
    b = 0.0
    step = 0
    for _ in range(epochs):
        order = rng.permutation(m)
        for start in range(0, m, batch_size):
            batch = order[start : start + batch_size]
            step += 1
            eta = 1.0 / (lambda_ * step)
            X_batch = X[batch]
            y_batch = y[batch]
            margins = y_batch * (X_batch @ w + b)
            violating = margins < 1.0
            if objective_log is not None:
                hinge = float(np.mean(np.maximum(0.0, 1.0 - margins)))
                objective_log.append(0.5 * lambda_ * float(w @ w) + hinge)
            w *= 1.0 - eta * lambda_
            if violating.any():
                scale = eta / batch.shape[0]
                w += scale * (y_batch[violating] @ X_batch[violating])
                b += scale * float(y_batch[violating].sum())

    logger.debug(
        "svm_fit: m=%d dim=%d steps=%d |w|=%.4f b=%.4f", m, dim, step, np.linalg.norm(w), b
    )
    return SvmModel(
        weights=w,
        bias=b,
        lambda_=lambda_,
        epochs_trained=epochs,
        seed=seed,
        batch_size=batch_size,
    )


def decision_function(model: SvmModel, features: Any) -> np.ndarray:
    """Return w·x + b for every row of an M×d matrix.

    Raises:
        InvalidArgumentError: If the feature width differs from the model's.
    """
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.dim:
        raise InvalidArgumentError(
            f"features must have {model.dim} columns, got shape {X.shape}"
        )
    return X @ model.weights + model.bias


def predict_batch(model: SvmModel, features: Any) -> np.ndarray:
    """Return ±1 predictions for every row; a zero score predicts +1."""
    scores = decision_function(model, features)
    return np.where(scores >= 0.0, 1.0, -1.0)


def svm_predict(model: SvmModel, x: Any) -> int:
    """Predict the label of one vector: sign(w·x + b) with sign(0) = +1.

    Raises:
        InvalidArgumentError: If len(x) differs from the model's width.
    """
    vector = validate_vector(x, model.dim, "x")
    return 1 if float(vector @ model.weights) + model.bias >= 0.0 else -1


def error_rate(model: SvmModel, features: Any, labels: Any) -> float:
    """Fraction of misclassified samples, in [0, 1].

    Raises:
        InvalidArgumentError: If the set is empty or shapes disagree.
    """
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise InvalidArgumentError("error_rate needs at least one sample")
    y = validate_vector(labels, X.shape[0], "labels")
    return float(np.mean(predict_batch(model, X) != y))


def select_lambda(
    train_features: Any,
    train_labels: Any,
    dev_features: Any,
    dev_labels: Any,
    grid: Sequence[float] = DEFAULT_LAMBDA_GRID,
    epochs: int = DEFAULT_EPOCHS,
    seed: int = DEFAULT_SEED,
    batch_size: int = 1,
) -> tuple[SvmModel, dict[float, float]]:
    """Train one model per λ in grid and keep the best on the dev split.

    Ties go to the earlier grid entry.

    Returns:
        (best model, {λ: dev error rate}).

    Raises:
        InvalidArgumentError: If the grid is empty.
    """
    if not grid:
        raise InvalidArgumentError("lambda grid is empty")
    best: Optional[SvmModel] = None
    best_error = float("inf")
    dev_errors: dict[float, float] = {}
    for candidate in grid:
        model = svm_fit(train_features, train_labels, candidate, epochs, seed, batch_size)
        dev_errors[candidate] = error_rate(model, dev_features, dev_labels)
        logger.info("lambda=%g dev error=%.4f", candidate, dev_errors[candidate])
        if dev_errors[candidate] < best_error:
            best, best_error = model, dev_errors[candidate]
    assert best is not None
    return best, dev_errors
