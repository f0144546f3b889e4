"""tmpca - Tree-structured multi-linear PCA for sentence reduction.

A sentence of N embedded words (N×D) is reduced to one D-vector by a tree
of per-level PCA transforms. Each level concatenates non-overlapping
P-tuples of vectors and projects them back to D dimensions. The reduced
features train a linear SVM. A benchmark harness compares how the tree fit
and a full-sentence PCA scale with N.

Usage:
    from tmpca import Container, Experiment, load_config

    config = load_config("sms.ini")
    experiment = Experiment(Container.create_default(), config)
    for outcome in experiment.train_eval():
        print(outcome.row.method, outcome.row.error_rate)

Library usage without a config file:
    from tmpca import pca_fit, tmpca_fit, tmpca_apply_batch

    model = tmpca_fit(sentences, p=2)  # sentences: M×N×D, N a power of 2
    features = tmpca_apply_batch(model, sentences)  # M×D

Exit Codes (CLI):
    0 - All outputs written
    1 - Configuration error
    2 - Input, ingestion or shape error
    3 - Numerical failure, resource budget or clock resolution error
    4 - Unexpected error
"""

from tmpca.container import Container
from tmpca.core.config import RunConfig, load_config
from tmpca.core.models import (
    EvaluationRow,
    LabeledDataset,
    LabeledRecord,
    Method,
    PcaTransform,
    ScalingResult,
    Split,
    SvmModel,
    TimingMethod,
    TimingRecord,
    TmpcaModel,
)
from tmpca.core.pca import pca_apply, pca_apply_batch, pca_fit
from tmpca.core.svm import error_rate, svm_fit, svm_predict
from tmpca.core.tree import tmpca_apply, tmpca_apply_batch, tmpca_fit
from tmpca.experiment import Experiment

__version__ = "0.1.0"

__all__ = [
    # Orchestration
    "Container",
    "Experiment",
    "RunConfig",
    "load_config",
    # Reduction
    "pca_fit",
    "pca_apply",
    "pca_apply_batch",
    "tmpca_fit",
    "tmpca_apply",
    "tmpca_apply_batch",
    "PcaTransform",
    "TmpcaModel",
    # Classification
    "svm_fit",
    "svm_predict",
    "error_rate",
    "SvmModel",
    # Data and reports
    "LabeledDataset",
    "LabeledRecord",
    "Split",
    "Method",
    "EvaluationRow",
    "TimingMethod",
    "TimingRecord",
    "ScalingResult",
]
