"""Experiment - orchestrator for fit, transform, train/evaluate and benchmark runs.

An Experiment binds one RunConfig to a Container and runs the workflows
the command line exposes:

1. fit        numericalize the train split and fit a TMPCA tree or a
              full-sentence PCA
2. transform  reduce texts with a fitted model (or flatten them for raw)
3. train_eval per method: fit the reducer on train, choose the SVM λ on
              dev, report the test error; optionally an n-gram sweep that
              trains on gram-merged text and tests on unigram text
4. bench      synthetic scaling benchmark

Embedded splits are cached per (split, n-gram size), so methods sharing a
run numericalize each text once.
"""

from __future__ import annotations

import logging
from typing import Any, Callable, Optional, TypeVar, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from tmpca.adapters.datasets import load_dataset
from tmpca.adapters.storage import PlotPoint, ReducerModel
from tmpca.container import Container
from tmpca.core.bench import scaling_experiment
from tmpca.core.config import RunConfig
from tmpca.core.cost import pca_cost, tmpca_cost
from tmpca.core.errors import ConfigurationError, InvalidArgumentError
from tmpca.core.models import (
    EvaluationRow,
    LabeledDataset,
    Method,
    PcaTransform,
    ScalingResult,
    Split,
    SvmModel,
    TimingMethod,
    TmpcaModel,
)
from tmpca.core.pca import pca_apply_batch, pca_fit
from tmpca.core.svm import error_rate, select_lambda, svm_fit
from tmpca.core.tree import tmpca_apply_batch, tmpca_fit
from tmpca.text.numericalize import Numericalizer

logger = logging.getLogger(__name__)

T = TypeVar("T")


class FitOutcome(BaseModel):
    """A fitted reducer and what it cost."""

    model_config = ConfigDict(frozen=True)

    method: Method
    model: Union[TmpcaModel, PcaTransform]
    seconds: float
    predicted_cost: float
    sentences: int


class MethodOutcome(BaseModel):
    """Evaluation of one feature regime."""

    model_config = ConfigDict(frozen=True)

    row: EvaluationRow
    svm: SvmModel
    dev_errors: dict[float, float]


def sweep_method_name(ngram: int) -> str:
    """Report name of an n-gram sweep row, e.g. "tmpca-2gram"."""
    return f"tmpca-{ngram}gram"


class Experiment:
    """Runs the configured workflows against injected dependencies.

    Example:
        >>> container = Container.create_default()
        >>> experiment = Experiment(container, load_config("run.ini"))
        >>> rows = experiment.train_eval()
    """

    def __init__(
        self,
        container: Container,
        config: RunConfig,
        dataset: Optional[LabeledDataset] = None,
    ) -> None:
        """Initialize the experiment.

        Args:
            container: Clock, eigensolver, thread count and optional
                embedding source.
            config: Validated run configuration.
            dataset: Dataset to use instead of loading [dataset].
        """
        self._container = container
        self.config = config
        self._dataset = dataset
        self._numericalizer: Optional[Numericalizer] = None
        self._embedded: dict[tuple[Split, int], np.ndarray] = {}

    @property
    def numericalizer(self) -> Numericalizer:
        """Text pipeline built from [pipeline] on first use."""
        if self._numericalizer is None:
            self._numericalizer = Numericalizer.from_config(
                self.config.pipeline, self._container.embedding
            )
        return self._numericalizer

    @property
    def dataset(self) -> LabeledDataset:
        """Dataset loaded from [dataset] on first use."""
        if self._dataset is None:
            self._dataset = load_dataset(self.config.dataset, self.config.run.seed)
            logger.info(
                "dataset %s: %s",
                self._dataset.name,
                {split.value: count for split, count in self._dataset.counts().items()},
            )
        return self._dataset

    def _timed(self, action: Callable[[], T]) -> tuple[T, float]:
        clock = self._container.time_provider
        start = clock.monotonic()
        result = action()
        return result, clock.monotonic() - start

    def embed(self, texts: list[str], ngram: Optional[int] = None) -> np.ndarray:
        """Numericalize texts into an M×N×D batch."""
        return self.numericalizer.numericalize_many(texts, self._container.threads, ngram)

    def embed_split(self, split: Split, ngram: Optional[int] = None) -> np.ndarray:
        """Numericalize one split of the dataset (cached)."""
        size = self.config.pipeline.ngram if ngram is None else ngram
        key = (split, size)
        if key not in self._embedded:
            self._embedded[key] = self.embed(self.dataset.texts(split), size)
        return self._embedded[key]

    def check_model(self, model: ReducerModel) -> None:
        """Verify a loaded model matches the configured sentence shape.

        Raises:
            InvalidArgumentError: Naming both shapes.
        """
        n, d = self.config.pipeline.effective_len, self.config.pipeline.embed_dim
        if isinstance(model, TmpcaModel):
            if (model.n, model.d) != (n, d):
                raise InvalidArgumentError(
                    f"model expects {model.n}x{model.d} sentences, pipeline produces {n}x{d}"
                )
        elif model.in_dim != n * d:
            raise InvalidArgumentError(
                f"PCA model expects {model.in_dim}-dim inputs, pipeline produces {n}x{d} = {n * d}"
            )

    def fit_reducer(
        self, method: Method, sentences: np.ndarray
    ) -> tuple[Optional[ReducerModel], float]:
        """Fit the reducer for one method (None for raw) and time it."""
        if method == Method.TMPCA:
            return self._timed(
                lambda: tmpca_fit(sentences, self.config.pipeline.branching, self._container.solver)
            )
        if method == Method.PCA:
            m, n, d = sentences.shape
            return self._timed(
                lambda: pca_fit(sentences.reshape(m, n * d), d, self._container.solver)
            )
        return None, 0.0

    @staticmethod
    def reduce(model: Optional[ReducerModel], sentences: np.ndarray) -> np.ndarray:
        """Apply a reducer to an M×N×D batch; None flattens to M×(N·D)."""
        m = sentences.shape[0]
        if isinstance(model, TmpcaModel):
            return tmpca_apply_batch(model, sentences)
        flat = sentences.reshape(m, -1)
        if model is None:
            return flat
        return pca_apply_batch(model, flat)

    def fit(self, method: Optional[Method] = None) -> FitOutcome:
        """Fit a reducer on the train split.

        Args:
            method: tmpca or pca; defaults to the first configured method.

        Raises:
            ConfigurationError: For method raw, which has no model.
            InvalidInputError: If the train split is empty.
        """
        chosen = method if method is not None else self.config.run.methods[0]
        if chosen == Method.RAW:
            raise ConfigurationError("method raw has no reduction model to fit")
        sentences = self.embed_split(Split.TRAIN)
        model, seconds = self.fit_reducer(chosen, sentences)
        assert model is not None
        m, n, d = sentences.shape
        cost = (
            tmpca_cost(n, d, m, self.config.pipeline.branching)
            if chosen == Method.TMPCA
            else pca_cost(n, d, m)
        )
        logger.info("fitted %s on %d sentences in %.6fs", chosen.value, m, seconds)
        return FitOutcome(
            method=chosen, model=model, seconds=seconds, predicted_cost=cost, sentences=m
        )

    def transform(self, model: Optional[ReducerModel], texts: list[str]) -> np.ndarray:
        """Reduce texts with a model; None means raw pass-through.

        Returns:
            One row per text: D columns for a reducer, N·D for raw.

        Raises:
            InvalidArgumentError: If the model does not fit the pipeline shape.
        """
        if model is not None:
            self.check_model(model)
        return self.reduce(model, self.embed(texts))

    def evaluate(
        self, method: Method, name: Optional[str] = None, train_ngram: Optional[int] = None
    ) -> MethodOutcome:
        """Fit, train and test one feature regime.

        Args:
            method: Feature regime.
            name: Report name; defaults to the method value.
            train_ngram: Gram size for the train split only; dev and test
                are then embedded as unigrams. None uses the configured
                size everywhere.
        """
        eval_ngram = None if train_ngram is None else 1
        train = self.embed_split(Split.TRAIN, train_ngram)
        reducer, reduce_seconds = self.fit_reducer(method, train)
        train_x = self.reduce(reducer, train)
        train_y = self.dataset.labels(Split.TRAIN)

        svm_config = self.config.svm
        dev_errors: dict[float, float] = {}
        if self.dataset.counts()[Split.DEV]:
            dev_x = self.reduce(reducer, self.embed_split(Split.DEV, eval_ngram))
            dev_y = self.dataset.labels(Split.DEV)
            (svm, dev_errors), svm_seconds = self._timed(
                lambda: select_lambda(
                    train_x,
                    train_y,
                    dev_x,
                    dev_y,
                    svm_config.lambda_grid,
                    svm_config.epochs,
                    self.config.svm_seed,
                    svm_config.batch_size,
                )
            )
        else:
            svm, svm_seconds = self._timed(
                lambda: svm_fit(
                    train_x,
                    train_y,
                    svm_config.lambda_,
                    svm_config.epochs,
                    self.config.svm_seed,
                    svm_config.batch_size,
                )
            )

        test_x = self.reduce(reducer, self.embed_split(Split.TEST, eval_ngram))
        error = error_rate(svm, test_x, self.dataset.labels(Split.TEST))
        record_timings = self.config.run.record_timings
        row = EvaluationRow(
            method=name or method.value,
            dataset=self.config.dataset.dataset_name,
            split=Split.TEST,
            error_rate=error,
            train_seconds=reduce_seconds + svm_seconds if record_timings else None,
            reduce_seconds=reduce_seconds,
            svm_seconds=svm_seconds,
            feature_dim=int(train_x.shape[1]),
            svm_lambda=svm.lambda_,
        )
        logger.info(
            "%s: test error %.4f, %d features, lambda %g",
            row.method,
            error,
            row.feature_dim,
            svm.lambda_,
        )
        return MethodOutcome(row=row, svm=svm, dev_errors=dev_errors)

    def train_eval(self) -> list[MethodOutcome]:
        """Evaluate every configured method, then every n-gram sweep size."""
        outcomes = [self.evaluate(method) for method in self.config.run.methods]
        for ngram in self.config.run.ngram_sweep:
            outcomes.append(
                self.evaluate(Method.TMPCA, sweep_method_name(ngram), train_ngram=ngram)
            )
        return outcomes

    def bench(self) -> ScalingResult:
        """Run the [bench] scaling grid."""
        bench = self.config.bench
        return scaling_experiment(
            bench.n_list,
            bench.d,
            bench.m,
            bench.p,
            self.config.run.seed,
            bench.repetitions,
            bench.methods,
            time_provider=self._container.time_provider,
            solver=self._container.solver,
            element_budget=bench.element_budget,
            threads=self._container.threads,
            svm_epochs=bench.svm_epochs,
        )


def bench_plot_points(result: ScalingResult) -> tuple[list[PlotPoint], list[PlotPoint]]:
    """Split benchmark records into (total fit time, SVM training time) chart data."""
    total: list[PlotPoint] = []
    svm: list[PlotPoint] = []
    for record in result.records:
        config = f"m={record.m} n={record.n} d={record.d}"
        if record.method in (TimingMethod.TMPCA, TimingMethod.PCA):
            total.append(
                PlotPoint(series=record.method.value, config=config, seconds=record.wall_seconds)
            )
        else:
            series = "raw" if record.method == TimingMethod.SVM_RAW else "reduced"
            svm.append(PlotPoint(series=series, config=config, seconds=record.wall_seconds))
    return total, svm


def evaluation_plot_points(rows: list[EvaluationRow]) -> tuple[list[PlotPoint], list[PlotPoint]]:
    """Split report rows into (total training time, SVM training time) chart data."""
    total = [
        PlotPoint(
            series=row.method, config=row.dataset, seconds=row.reduce_seconds + row.svm_seconds
        )
        for row in rows
    ]
    svm = [
        PlotPoint(series=row.method, config=row.dataset, seconds=row.svm_seconds) for row in rows
    ]
    return total, svm


def describe(value: Any) -> str:
    """Short label for a reducer model in command output."""
    if isinstance(value, TmpcaModel):
        return f"TMPCA tree n={value.n} d={value.d} p={value.p} ({value.depth} levels)"
    if isinstance(value, PcaTransform):
        return f"PCA {value.in_dim}->{value.out_dim}"
    return "raw"
