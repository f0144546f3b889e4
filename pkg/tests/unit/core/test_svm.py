"""Tests for the Pegasos linear SVM."""

from __future__ import annotations

import numpy as np
import pytest

from tmpca.core.errors import InvalidArgumentError, InvalidInputError
from tmpca.core.models import SvmModel
from tmpca.core.svm import (
    DEFAULT_LAMBDA,
    decision_function,
    error_rate,
    predict_batch,
    select_lambda,
    svm_fit,
    svm_predict,
)


@pytest.fixture
def separable(rng):
    """40 points x = y·(2, u) with u uniform in [-1, 1]."""
    labels = np.where(np.arange(40) % 2 == 0, 1.0, -1.0)
    noise = rng.uniform(-1.0, 1.0, size=40)
    features = labels[:, np.newaxis] * np.column_stack([np.full(40, 2.0), noise])
    return features, labels


def fixed_model(weights, bias):
    """SvmModel with hand-picked parameters."""
    return SvmModel(weights=weights, bias=bias, lambda_=0.01, epochs_trained=0, seed=0)


# ============================================================================
# Test: Training
# ============================================================================


class TestSvmFit:
    """Training behavior."""

    def test_separable_reaches_zero_training_error(self, separable):
        """Linearly separable data is fitted perfectly."""
        features, labels = separable
        model = svm_fit(features, labels, lambda_=0.01, epochs=20, seed=3)
        assert error_rate(model, features, labels) == 0.0
        assert model.weights[0] > 0

    def test_bit_reproducible(self, separable):
        """Same data, hyperparameters and seed give a bit-identical model."""
        features, labels = separable
        first = svm_fit(features, labels, 0.01, 10, seed=5, batch_size=4)
        second = svm_fit(features.copy(), labels.copy(), 0.01, 10, seed=5, batch_size=4)
        np.testing.assert_array_equal(first.weights, second.weights)
        assert first.bias == second.bias

    def test_label_negation_negates_model(self, separable):
        """Flipping every label gives exactly the negated weights and bias."""
        features, labels = separable
        model = svm_fit(features, labels, 0.01, 5, seed=2)
        flipped = svm_fit(features, -labels, 0.01, 5, seed=2)
        np.testing.assert_array_equal(flipped.weights, -model.weights)
        assert flipped.bias == -model.bias

    @pytest.mark.parametrize(
        "lambda_, epochs, seeds",
        [(0.01, 50, range(20)), (DEFAULT_LAMBDA, 5000, range(3))],
    )
    def test_zero_features_learn_majority_bias(self, lambda_, epochs, seeds):
        """With all-zero features only the bias moves, toward the majority class.

        The final-iterate bias settles once 1/(λ·t) is well below 1; at the
        default λ that takes thousands of epochs on 12 samples.
        """
        labels = np.array([1.0] * 9 + [-1.0] * 3)
        for seed in seeds:
            model = svm_fit(np.zeros((12, 3)), labels, lambda_=lambda_, epochs=epochs, seed=seed)
            assert not model.weights.any()
            assert svm_predict(model, [0.0, 0.0, 0.0]) == 1, f"seed {seed}"

    def test_provenance_recorded(self, separable):
        """The model records λ, epochs, seed and batch size."""
        features, labels = separable
        model = svm_fit(features, labels, 0.001, 3, seed=9, batch_size=8)
        assert (model.lambda_, model.epochs_trained, model.seed, model.batch_size) == (
            0.001,
            3,
            9,
            8,
        )

    def test_objective_log(self, separable):
        """One objective value per step, with the first at w = 0 equal to 1."""
        features, labels = separable
        log: list[float] = []
        svm_fit(features, labels, 0.01, 2, seed=0, batch_size=10, objective_log=log)
        assert len(log) == 8
        assert log[0] == pytest.approx(1.0)
        assert all(value >= 0.0 for value in log)

    def test_objective_decreases(self, separable):
        """The mean objective over the last 10% of steps is below the first 10%."""
        features, labels = separable
        log: list[float] = []
        svm_fit(features, labels, 0.01, 20, seed=4, objective_log=log)
        tenth = len(log) // 10
        assert np.mean(log[-tenth:]) < np.mean(log[:tenth])

    def test_gaussian_blobs_separated(self, rng):
        """Two tight blobs centred at (±3, 0) are classified without error."""
        labels = np.repeat([1.0, -1.0], 100)
        centres = labels[:, np.newaxis] * np.array([3.0, 0.0])
        features = centres + 0.5 * rng.standard_normal((200, 2))
        model = svm_fit(features, labels, lambda_=0.01, epochs=50, seed=0)
        assert error_rate(model, features, labels) == 0.0

    def test_unit_margin_data_within_200_epochs(self, rng):
        """Data with y·x₀ ≥ 1 reaches zero training error in 200 epochs."""
        labels = np.where(rng.uniform(size=50) < 0.5, 1.0, -1.0)
        first = labels * (1.0 + rng.uniform(0.0, 1.0, size=50))
        features = np.column_stack([first, rng.uniform(-5.0, 5.0, size=50)])
        model = svm_fit(features, labels, lambda_=0.01, epochs=200, seed=6)
        assert error_rate(model, features, labels) == 0.0

    def test_single_class_rejected(self):
        """Only one label value raises InvalidInputError."""
        with pytest.raises(InvalidInputError, match="both classes"):
            svm_fit(np.ones((4, 2)), np.ones(4))

    def test_bad_labels_rejected(self):
        """Labels other than ±1 raise InvalidInputError."""
        with pytest.raises(InvalidInputError, match=r"\+1 or -1"):
            svm_fit(np.ones((2, 2)), [1.0, 0.0])

    def test_bad_lambda_rejected(self, separable):
        """λ ≤ 0 raises InvalidArgumentError."""
        features, labels = separable
        with pytest.raises(InvalidArgumentError, match="lambda"):
            svm_fit(features, labels, lambda_=0.0)

    def test_bad_batch_size_rejected(self, separable):
        """batch_size 0 raises InvalidArgumentError."""
        features, labels = separable
        with pytest.raises(InvalidArgumentError):
            svm_fit(features, labels, batch_size=0)


# ============================================================================
# Test: Prediction
# ============================================================================


class TestPrediction:
    """Decision function, sign convention and error rate."""

    def test_zero_score_predicts_positive(self):
        """sign(0) is +1."""
        model = fixed_model([1.0, -1.0], 0.0)
        assert svm_predict(model, [2.0, 2.0]) == 1
        assert predict_batch(model, [[2.0, 2.0]]).tolist() == [1.0]

    def test_decision_function(self):
        """w·x + b per row."""
        model = fixed_model([1.0, 2.0], -0.5)
        np.testing.assert_allclose(decision_function(model, [[1.0, 1.0], [0.0, 0.0]]), [2.5, -0.5])

    def test_error_rate_fraction(self):
        """Error rate is the fraction of wrong predictions."""
        model = fixed_model([1.0], 0.0)
        assert error_rate(model, [[1.0], [-1.0], [2.0], [-3.0]], [1, -1, -1, -1]) == 0.25

    def test_width_mismatch(self):
        """Features of the wrong width raise InvalidArgumentError."""
        model = fixed_model([1.0, 2.0], 0.0)
        with pytest.raises(InvalidArgumentError, match="2 columns"):
            decision_function(model, [[1.0, 2.0, 3.0]])
        with pytest.raises(InvalidArgumentError):
            svm_predict(model, [1.0])

    def test_error_rate_empty(self):
        """An empty evaluation set raises InvalidArgumentError."""
        with pytest.raises(InvalidArgumentError):
            error_rate(fixed_model([1.0], 0.0), np.zeros((0, 1)), [])


# ============================================================================
# Test: select_lambda
# ============================================================================


class TestSelectLambda:
    """Dev-set selection over the λ grid."""

    def test_reports_every_candidate(self, separable):
        """Every grid value gets a dev error, and the best is returned."""
        features, labels = separable
        model, dev_errors = select_lambda(
            features[:30], labels[:30], features[30:], labels[30:], epochs=5
        )
        assert list(dev_errors) == [1e-2, 1e-3, 1e-4]
        assert dev_errors[model.lambda_] == min(dev_errors.values())

    def test_ties_keep_first_candidate(self, separable):
        """When every candidate scores the same the first grid entry wins."""
        features, labels = separable
        dev_features = np.array([[2.0, 0.0], [2.0, 0.0]])
        model, dev_errors = select_lambda(
            features, labels, dev_features, [1.0, -1.0], grid=(0.1, 0.01), epochs=5
        )
        assert set(dev_errors.values()) == {0.5}
        assert model.lambda_ == 0.1

    def test_empty_grid(self, separable):
        """An empty grid raises InvalidArgumentError."""
        features, labels = separable
        with pytest.raises(InvalidArgumentError, match="empty"):
            select_lambda(features, labels, features, labels, grid=())
