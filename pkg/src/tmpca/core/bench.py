"""Scaling benchmark: time tree and full-sentence PCA fits on synthetic data.

Timing protocol: one untimed warm-up run, then `repetitions` timed runs on
the injected TimeProvider; the record keeps the median. BLAS runs with at
most `threads` threads for all of them (one by default). A log-log
least-squares fit of median seconds against sentence length gives the
empirical growth exponent of each method.
"""

from __future__ import annotations

import logging
import math
import statistics
from collections.abc import Sequence
from typing import Callable, Optional

import numpy as np
from threadpoolctl import threadpool_limits

from tmpca.core.cost import pca_cost, svm_cost, tmpca_cost
from tmpca.core.errors import ClockResolutionError, InvalidArgumentError, ResourceBudgetError
from tmpca.core.interfaces import EigenSolver, TimeProvider
from tmpca.core.models import ScalingResult, TimingMethod, TimingRecord
from tmpca.core.pca import pca_fit
from tmpca.core.svm import DEFAULT_LAMBDA, svm_fit
from tmpca.core.tree import tmpca_fit
from tmpca.core.validation import is_power_of, validate_branching, validate_positive_int

logger = logging.getLogger(__name__)

MIN_REPETITIONS = 3
DEFAULT_ELEMENT_BUDGET = 2**24
DEFAULT_SVM_EPOCHS = 5


def synth_corpus(m: int, n: int, d: int, seed: int) -> np.ndarray:
    """Draw M sentences of N standard-normal D-vectors.

    Returns:
        M×N×D float64 array; deterministic per seed, empty when m == 0.
    """
    if m < 0:
        raise InvalidArgumentError(f"m must be non-negative, got {m}")
    n = validate_positive_int(n, "n")
    d = validate_positive_int(d, "d")
    return np.random.default_rng(seed).standard_normal((m, n, d))


def synth_labels(corpus: np.ndarray) -> np.ndarray:
    """Label each sentence by the sign of its first-coordinate sum (0 → +1)."""
    return np.where(corpus[:, :, 0].sum(axis=1) >= 0.0, 1.0, -1.0)


def check_budget(method: TimingMethod, n: int, d: int, p: int, element_budget: int) -> None:
    """Refuse fits whose covariance matrix would exceed element_budget entries.

    Raises:
        ResourceBudgetError: With the offending size and the budget.
    """
    if method == TimingMethod.PCA:
        width = n * d
    elif method == TimingMethod.TMPCA:
        width = p * d
    else:
        return
    if width * width > element_budget:
        raise ResourceBudgetError(
            f"{method.value} at n={n}, d={d} needs a {width}x{width} covariance "
            f"({width * width} elements), over the budget of {element_budget}; "
            "lower n or d, or raise bench.element_budget"
        )


def predicted_cost(method: TimingMethod, m: int, n: int, d: int, p: int, svm_epochs: int) -> float:
    """Operation count the matching cost formula predicts for one timed run."""
    if method == TimingMethod.TMPCA:
        return tmpca_cost(n, d, m, p)
    if method == TimingMethod.PCA:
        return pca_cost(n, d, m)
    if method == TimingMethod.SVM_RAW:
        return svm_cost(m, n * d, svm_epochs)
    return svm_cost(m, d, svm_epochs)


def _workload(
    method: TimingMethod,
    corpus: np.ndarray,
    p: int,
    solver: Optional[EigenSolver],
    svm_epochs: int,
    seed: int,
) -> Callable[[], object]:
    m, n, d = corpus.shape
    if method == TimingMethod.TMPCA:
        return lambda: tmpca_fit(corpus, p, solver)
    if method == TimingMethod.PCA:
        flat = corpus.reshape(m, n * d)
        return lambda: pca_fit(flat, d, solver)
    labels = synth_labels(corpus)
    features = corpus.reshape(m, n * d) if method == TimingMethod.SVM_RAW else corpus.mean(axis=1)
    return lambda: svm_fit(features, labels, DEFAULT_LAMBDA, svm_epochs, seed)


def time_fit(
    method: TimingMethod,
    m: int,
    n: int,
    d: int,
    p: int,
    repetitions: int = MIN_REPETITIONS,
    seed: int = 0,
    *,
    time_provider: TimeProvider,
    solver: Optional[EigenSolver] = None,
    element_budget: int = DEFAULT_ELEMENT_BUDGET,
    threads: int = 1,
    svm_epochs: int = DEFAULT_SVM_EPOCHS,
) -> TimingRecord:
    """Time one method on a synthetic corpus.

    svm_raw trains on the flattened N·D sentences, svm_reduced on the
    per-sentence mean D-vector; both use synth_labels.

    Args:
        method: What to time.
        m, n, d, p: Corpus size, sentence length, embedding size, branching.
        repetitions: Timed runs (at least 3); the median is recorded.
        seed: Corpus (and SVM shuffle) seed.
        time_provider: Clock the timed runs are measured on.
        solver: Eigensolver for the PCA methods.
        element_budget: Largest covariance size (entries) allowed.
        threads: BLAS thread limit for the warm-up and timed runs; recorded
            in the result.
        svm_epochs: Epochs for the SVM methods.

    Raises:
        ResourceBudgetError: If the covariance would exceed element_budget.
        ClockResolutionError: If the median is below the clock resolution.
    """
    if repetitions < MIN_REPETITIONS:
        raise InvalidArgumentError(
            f"repetitions must be at least {MIN_REPETITIONS}, got {repetitions}"
        )
    p = validate_branching(p)
    threads = validate_positive_int(threads, "threads")
    check_budget(method, n, d, p, element_budget)

    corpus = synth_corpus(m, n, d, seed)
    run = _workload(method, corpus, p, solver, svm_epochs, seed)
    samples = []
    with threadpool_limits(limits=threads, user_api="blas"):
        run()
        for _ in range(repetitions):
            start = time_provider.monotonic()
            run()
            samples.append(time_provider.monotonic() - start)
    median = statistics.median(samples)

    resolution = time_provider.resolution()
    if median <= 0.0 or median < resolution:
        raise ClockResolutionError(
            f"{method.value} at m={m}, n={n}, d={d} took {median:.3e}s, below the clock "
            f"resolution of {resolution:.3e}s; increase m or repetitions"
        )
    record = TimingRecord(
        method=method,
        m=m,
        n=n,
        d=d,
        p=p,
        wall_seconds=median,
        predicted_cost=predicted_cost(method, m, n, d, p, svm_epochs),
        repetitions=repetitions,
        seed=seed,
        threads=threads,
    )
    logger.info(
        "timed %s m=%d n=%d d=%d: median %.6fs over %d runs",
        method.value,
        m,
        n,
        d,
        median,
        repetitions,
    )
    return record


def fit_loglog_slope(ns: Sequence[float], seconds: Sequence[float]) -> float:
    """Least-squares slope of log(seconds) against log(n).

    Raises:
        InvalidArgumentError: On fewer than two points, unequal lengths or
            non-positive values.

    Examples:
        >>> round(fit_loglog_slope([16, 32, 64], [1.0, 4.0, 16.0]), 9)
        2.0
    """
    x = np.asarray(ns, dtype=np.float64)
    y = np.asarray(seconds, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or x.size < 2:
        raise InvalidArgumentError("need two or more (n, seconds) pairs of equal length")
    if np.any(x <= 0) or np.any(y <= 0):
        raise InvalidArgumentError("log-log fit needs positive n and seconds")
    if np.all(x == x[0]):
        raise InvalidArgumentError("log-log fit needs at least two distinct n")
    slope, _intercept = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope)


def _validate_n_list(n_list: Sequence[int], p: int) -> list[int]:
    ns = [validate_positive_int(n, "n") for n in n_list]
    if len(ns) < 3:
        raise InvalidArgumentError(f"n_list needs at least 3 sizes, got {len(ns)}")
    if any(later <= earlier for earlier, later in zip(ns, ns[1:])):
        raise InvalidArgumentError(f"n_list must be strictly ascending, got {ns}")
    off_grid = [n for n in ns if not is_power_of(n, p)]
    if off_grid:
        raise InvalidArgumentError(f"n_list entries {off_grid} are not powers of p={p}")
    return ns


def _slope(records: list[TimingRecord], method: TimingMethod, predicted: bool) -> float:
    selected = [record for record in records if record.method == method]
    if len(selected) < 2:
        return math.nan
    values = [record.predicted_cost if predicted else record.wall_seconds for record in selected]
    return fit_loglog_slope([record.n for record in selected], values)


def scaling_experiment(
    n_list: Sequence[int],
    d: int,
    m: int,
    p: int,
    seed: int,
    repetitions: int = MIN_REPETITIONS,
    methods: Sequence[TimingMethod] = (TimingMethod.TMPCA, TimingMethod.PCA),
    *,
    time_provider: TimeProvider,
    solver: Optional[EigenSolver] = None,
    element_budget: int = DEFAULT_ELEMENT_BUDGET,
    threads: int = 1,
    svm_epochs: int = DEFAULT_SVM_EPOCHS,
) -> ScalingResult:
    """Time every method at every sentence length and fit the scaling slopes.

    Records are ordered method-major, then by n. The budget is checked for
    every grid point before any timing starts.

    Raises:
        InvalidArgumentError: If n_list is shorter than 3, not ascending or
            not made of powers of p.
        ResourceBudgetError: If any grid point is over budget.
        ClockResolutionError: If any timing is below the clock resolution.
    """
    p = validate_branching(p)
    ns = _validate_n_list(n_list, p)
    for method in methods:
        for n in ns:
            check_budget(method, n, d, p, element_budget)

    records = [
        time_fit(
            method,
            m,
            n,
            d,
            p,
            repetitions,
            seed,
            time_provider=time_provider,
            solver=solver,
            element_budget=element_budget,
            threads=threads,
            svm_epochs=svm_epochs,
        )
        for method in methods
        for n in ns
    ]
    result = ScalingResult(
        records=records,
        slope_tmpca=_slope(records, TimingMethod.TMPCA, predicted=False),
        slope_pca=_slope(records, TimingMethod.PCA, predicted=False),
        predicted_slope_tmpca=_slope(records, TimingMethod.TMPCA, predicted=True),
        predicted_slope_pca=_slope(records, TimingMethod.PCA, predicted=True),
    )
    logger.info(
        "scaling slopes: tmpca %.3f (formula %.3f), pca %.3f (formula %.3f)",
        result.slope_tmpca,
        result.predicted_slope_tmpca,
        result.slope_pca,
        result.predicted_slope_pca,
    )
    return result
