"""Data models for tmpca.

This module defines the pydantic models and enums shared across the
library: fitted transforms, classifiers, datasets and benchmark records.
Numeric payloads are held as read-only float64 ndarrays and serialized as
plain JSON lists; float formatting is shortest-round-trip, so a model file
reloads bit-exactly.
"""

from __future__ import annotations

from enum import Enum
from typing import Annotated, Any, Literal, Optional

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PlainSerializer,
    PlainValidator,
    model_validator,
)

from tmpca.core.validation import tree_depth

ORTHONORMALITY_TOLERANCE = 1e-8


def _to_readonly_array(value: Any) -> np.ndarray:
    array = np.array(value, dtype=np.float64)
    if not np.all(np.isfinite(array)):
        raise ValueError("array contains non-finite entries")
    array.setflags(write=False)
    return array


FloatArray = Annotated[
    np.ndarray,
    PlainValidator(_to_readonly_array),
    PlainSerializer(lambda array: array.tolist(), return_type=list),
]
"""Read-only float64 ndarray field, serialized as a (nested) JSON list."""


class Split(str, Enum):
    """Dataset split a record belongs to."""

    TRAIN = "train"
    DEV = "dev"
    TEST = "test"


class Method(str, Enum):
    """Feature regime fed to the classifier."""

    TMPCA = "tmpca"
    """Tree-structured PCA: N×D sentence reduced to one D-vector."""

    PCA = "pca"
    """Full-sentence PCA: flattened N·D vector reduced to its top D components."""

    RAW = "raw"
    """No reduction: the flattened N·D vector."""


class TimingMethod(str, Enum):
    """What a benchmark record timed."""

    TMPCA = "tmpca"
    PCA = "pca"
    SVM_RAW = "svm_raw"
    SVM_REDUCED = "svm_reduced"


class PcaTransform(BaseModel):
    """One fitted PCA level: centering mean plus orthonormal projection.

    Immutable after construction; safe to share between threads.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    in_dim: int = Field(ge=1)
    """Input dimension K."""

    out_dim: int = Field(ge=1)
    """Output dimension d (≤ in_dim)."""

    mean: FloatArray
    """Input-space mean, length K."""

    eigenvalues: FloatArray
    """Retained covariance eigenvalues, length d, non-negative and descending."""

    basis: FloatArray
    """d×K matrix whose rows are the principal directions."""

    total_variance: float = Field(default=0.0, ge=0.0)
    """Trace of the fitted covariance (total variance before truncation)."""

    @model_validator(mode="after")
    def _check_invariants(self) -> PcaTransform:
        if self.out_dim > self.in_dim:
            raise ValueError(f"out_dim {self.out_dim} exceeds in_dim {self.in_dim}")
        if self.mean.shape != (self.in_dim,):
            raise ValueError(f"mean must have length {self.in_dim}, got {self.mean.shape}")
        if self.eigenvalues.shape != (self.out_dim,):
            raise ValueError(
                f"eigenvalues must have length {self.out_dim}, got {self.eigenvalues.shape}"
            )
        if self.basis.shape != (self.out_dim, self.in_dim):
            raise ValueError(
                f"basis must be {self.out_dim}x{self.in_dim}, got {self.basis.shape}"
            )
        if np.any(self.eigenvalues < 0):
            raise ValueError("eigenvalues must be non-negative")
        if np.any(np.diff(self.eigenvalues) > 0):
            raise ValueError("eigenvalues must be sorted in descending order")
        gram = self.basis @ self.basis.T
        if not np.allclose(gram, np.eye(self.out_dim), rtol=0.0, atol=ORTHONORMALITY_TOLERANCE):
            raise ValueError("basis rows are not orthonormal")
        return self

    def explained_variance_ratio(self) -> np.ndarray:
        """Fraction of the total variance carried by each retained component."""
        if self.total_variance == 0.0:
            return np.zeros(self.out_dim)
        return self.eigenvalues / self.total_variance


class TmpcaModel(BaseModel):
    """A fitted TMPCA tree: one shared PcaTransform per level, level 1 first."""

    model_config = ConfigDict(frozen=True)

    format_version: Literal[1] = 1
    n: int = Field(ge=1)
    """Sentence length N (a power of p)."""

    d: int = Field(ge=1)
    """Embedding size D."""

    p: int = Field(ge=2)
    """Branching factor P."""

    levels: list[PcaTransform]

    @model_validator(mode="after")
    def _check_levels(self) -> TmpcaModel:
        if self.p > self.n and self.n > 1:
            raise ValueError(f"branching factor {self.p} exceeds sentence length {self.n}")
        depth = tree_depth(self.n, self.p)
        if len(self.levels) != depth:
            raise ValueError(f"expected {depth} levels for n={self.n}, p={self.p}")
        for index, level in enumerate(self.levels, start=1):
            if level.in_dim != self.p * self.d or level.out_dim != self.d:
                raise ValueError(
                    f"level {index} maps {level.in_dim}->{level.out_dim}, "
                    f"expected {self.p * self.d}->{self.d}"
                )
        return self

    @property
    def depth(self) -> int:
        """Number of tree levels, log_p(N)."""
        return len(self.levels)

    def retained_variance(self) -> list[float]:
        """Per-level fraction of input variance kept by the D retained components."""
        return [float(level.explained_variance_ratio().sum()) for level in self.levels]


class SvmModel(BaseModel):
    """Linear SVM decision function sign(w·x + b) plus training provenance."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    weights: FloatArray
    bias: float
    lambda_: float = Field(alias="lambda", gt=0.0)
    epochs_trained: int = Field(ge=0)
    seed: int
    batch_size: int = Field(default=1, ge=1)

    @property
    def dim(self) -> int:
        """Feature width the model was trained on."""
        return int(self.weights.shape[0])


class LabeledRecord(BaseModel):
    """One labeled sentence."""

    model_config = ConfigDict(frozen=True)

    text: str
    label: Literal[1, -1]
    split: Split = Split.TRAIN


class LabeledDataset(BaseModel):
    """Binary-labeled sentences with per-record split assignment."""

    name: str
    records: list[LabeledRecord] = Field(default_factory=list)
    dropped_empty: int = 0
    """Records discarded at ingestion because their text was empty."""

    def select(self, split: Split) -> list[LabeledRecord]:
        """Return the records of one split, in file order."""
        return [record for record in self.records if record.split == split]

    def texts(self, split: Split) -> list[str]:
        """Return the texts of one split, in file order."""
        return [record.text for record in self.select(split)]

    def labels(self, split: Split) -> np.ndarray:
        """Return the ±1 labels of one split as a float64 vector."""
        return np.array([record.label for record in self.select(split)], dtype=np.float64)

    def counts(self) -> dict[Split, int]:
        """Return the number of records per split."""
        return {split: len(self.select(split)) for split in Split}


class TimingRecord(BaseModel):
    """One benchmark measurement."""

    model_config = ConfigDict(frozen=True)

    method: TimingMethod
    m: int = Field(ge=0)
    n: int = Field(ge=1)
    d: int = Field(ge=1)
    p: int = Field(ge=2)
    wall_seconds: float = Field(gt=0.0)
    """Median wall-clock seconds over the repetitions."""

    predicted_cost: float
    """Operation count predicted by the matching cost formula."""

    repetitions: int = Field(ge=1)
    seed: int
    threads: int = Field(default=1, ge=1)


class ScalingResult(BaseModel):
    """Outcome of a scaling experiment over several sentence lengths."""

    model_config = ConfigDict(frozen=True)

    records: list[TimingRecord]
    slope_tmpca: float
    slope_pca: float
    predicted_slope_tmpca: float = float("nan")
    """Log-log slope of the cost formula over the same sentence lengths."""

    predicted_slope_pca: float = float("nan")

    @property
    def slope_gap(self) -> float:
        """slope_pca − slope_tmpca."""
        return self.slope_pca - self.slope_tmpca


class EvaluationRow(BaseModel):
    """One row of the evaluation report plus the timings behind it."""

    model_config = ConfigDict(frozen=True)

    method: str
    dataset: str
    split: Split = Split.TEST
    error_rate: float = Field(ge=0.0, le=1.0)
    train_seconds: Optional[float] = None
    """Reduction fit plus SVM fit wall time; None when timings are not recorded."""

    reduce_seconds: float = 0.0
    svm_seconds: float = 0.0
    feature_dim: int = 0
    svm_lambda: Optional[float] = None
