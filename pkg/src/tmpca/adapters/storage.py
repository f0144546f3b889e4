"""File formats and the output directory.

Models are JSON written by pydantic (shortest round-trip float repr, so a
reload is bit-exact). Features, reports and timings are CSV with floats
written by repr(). Every file a command writes goes through an OutputDir,
which deletes them again if the command fails.
"""

from __future__ import annotations

import csv
import json
import logging
from collections.abc import Iterable, Sequence
from pathlib import Path
from types import TracebackType
from typing import Any, Optional, Union

import numpy as np
from pydantic import BaseModel, ValidationError

from tmpca.core.errors import ConfigurationError, IngestionError
from tmpca.core.models import (
    EvaluationRow,
    PcaTransform,
    Split,
    SvmModel,
    TimingMethod,
    TimingRecord,
    TmpcaModel,
)

logger = logging.getLogger(__name__)

MODEL_FILE = "model.json"
FEATURES_FILE = "features.csv"
REPORT_FILE = "report.csv"
TIMINGS_FILE = "timings.csv"
EFFECTIVE_CONFIG_FILE = "effective-config.txt"
TOTAL_TIME_FILE = "total-training-time.csv"
SVM_TIME_FILE = "svm-training-time.csv"

REPORT_HEADER = ("method", "dataset", "split", "error_rate", "train_seconds")
TIMINGS_HEADER = (
    "method",
    "m",
    "n",
    "d",
    "p",
    "wall_seconds",
    "predicted_cost",
    "repetitions",
    "seed",
    "threads",
)

ReducerModel = Union[TmpcaModel, PcaTransform]


class PlotPoint(BaseModel):
    """One bar of a timing chart: a series (method or feature regime) at one configuration."""

    series: str
    config: str
    seconds: float


def _float(value: float) -> str:
    return repr(float(value))


def _open_csv(path: Path) -> Any:
    return open(path, "w", encoding="utf-8", newline="")


def _writer(handle: Any) -> Any:
    return csv.writer(handle, lineterminator="\n")


def _read_json(path: Union[str, Path]) -> Any:
    json_path = Path(path)
    if not json_path.is_file():
        raise ConfigurationError(f"model file not found: {json_path}")
    try:
        return json.loads(json_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise IngestionError(f"invalid JSON: {exc.msg}", json_path, exc.lineno) from exc


def write_model(model: BaseModel, path: Union[str, Path]) -> Path:
    """Write a TmpcaModel, PcaTransform or SvmModel as JSON."""
    target = Path(path)
    target.write_text(model.model_dump_json(by_alias=True, indent=2) + "\n", encoding="utf-8")
    return target


def read_model(path: Union[str, Path]) -> ReducerModel:
    """Read a reducer model file.

    A file with "levels" is a TmpcaModel, anything else a full-sentence
    PcaTransform.

    Raises:
        ConfigurationError: If the file does not exist.
        IngestionError: If the file is not valid JSON or not a valid model.
    """
    data = _read_json(path)
    model_type: type[BaseModel] = (
        TmpcaModel if isinstance(data, dict) and "levels" in data else PcaTransform
    )
    try:
        return model_type.model_validate(data)  # type: ignore[return-value]
    except ValidationError as exc:
        raise IngestionError(f"not a valid {model_type.__name__}: {exc}", Path(path)) from exc


def read_svm_model(path: Union[str, Path]) -> SvmModel:
    """Read an SvmModel JSON file."""
    data = _read_json(path)
    try:
        return SvmModel.model_validate(data)
    except ValidationError as exc:
        raise IngestionError(f"not a valid SvmModel: {exc}", Path(path)) from exc


def write_features(
    features: np.ndarray, path: Union[str, Path], labels: Optional[Sequence[int]] = None
) -> Path:
    """Write one CSV row per sentence, with an optional leading ±1 label column."""
    target = Path(path)
    with _open_csv(target) as handle:
        writer = _writer(handle)
        for index, row in enumerate(np.asarray(features, dtype=np.float64)):
            values = [_float(value) for value in row]
            if labels is not None:
                values.insert(0, str(int(labels[index])))
            writer.writerow(values)
    return target


def read_features(
    path: Union[str, Path], label_column: bool = False
) -> tuple[np.ndarray, Optional[np.ndarray]]:
    """Read a features CSV back into (features, labels or None)."""
    with open(path, encoding="utf-8", newline="") as handle:
        rows = [[float(value) for value in row] for row in csv.reader(handle) if row]
    if not rows:
        return np.zeros((0, 0)), (np.zeros(0) if label_column else None)
    table = np.array(rows, dtype=np.float64)
    if label_column:
        return table[:, 1:], table[:, 0]
    return table, None


def write_report(rows: Iterable[EvaluationRow], path: Union[str, Path]) -> Path:
    """Write the evaluation report; a None train_seconds is written as an empty cell."""
    target = Path(path)
    with _open_csv(target) as handle:
        writer = _writer(handle)
        writer.writerow(REPORT_HEADER)
        for row in rows:
            seconds = "" if row.train_seconds is None else _float(row.train_seconds)
            writer.writerow(
                [row.method, row.dataset, row.split.value, _float(row.error_rate), seconds]
            )
    return target


def read_report(path: Union[str, Path]) -> list[EvaluationRow]:
    """Parse a report written by write_report."""
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        return [
            EvaluationRow(
                method=row["method"],
                dataset=row["dataset"],
                split=Split(row["split"]),
                error_rate=float(row["error_rate"]),
                train_seconds=float(row["train_seconds"]) if row["train_seconds"] else None,
            )
            for row in reader
        ]


def emit_csv(records: Iterable[TimingRecord], path: Union[str, Path]) -> Path:
    """Write timing records in the given order; no records gives a header-only file."""
    target = Path(path)
    with _open_csv(target) as handle:
        writer = _writer(handle)
        writer.writerow(TIMINGS_HEADER)
        for record in records:
            writer.writerow(
                [
                    record.method.value,
                    record.m,
                    record.n,
                    record.d,
                    record.p,
                    _float(record.wall_seconds),
                    _float(record.predicted_cost),
                    record.repetitions,
                    record.seed,
                    record.threads,
                ]
            )
    return target


def read_timings(path: Union[str, Path]) -> list[TimingRecord]:
    """Parse a timings CSV written by emit_csv."""
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if tuple(reader.fieldnames or ()) != TIMINGS_HEADER:
            raise IngestionError(f"unexpected header {reader.fieldnames}", Path(path), 1)
        return [
            TimingRecord(
                method=TimingMethod(row["method"]),
                m=int(row["m"]),
                n=int(row["n"]),
                d=int(row["d"]),
                p=int(row["p"]),
                wall_seconds=float(row["wall_seconds"]),
                predicted_cost=float(row["predicted_cost"]),
                repetitions=int(row["repetitions"]),
                seed=int(row["seed"]),
                threads=int(row["threads"]),
            )
            for row in reader
        ]


def write_plot_data(
    points: Sequence[PlotPoint], path: Union[str, Path], series_header: str
) -> Path:
    """Write one chart's data as series,config,seconds rows."""
    target = Path(path)
    with _open_csv(target) as handle:
        writer = _writer(handle)
        writer.writerow([series_header, "config", "seconds"])
        for point in points:
            writer.writerow([point.series, point.config, _float(point.seconds)])
    return target


class OutputDir:
    """Output directory whose files are removed if the enclosing command fails.

    Example:
        with OutputDir(Path("out")) as out:
            write_model(model, out.track(MODEL_FILE))
    """

    def __init__(self, root: Union[str, Path]) -> None:
        """Initialize with the directory path; it is created on enter."""
        self.root = Path(root)
        self._written: list[Path] = []
        self._created_root = False

    def __repr__(self) -> str:
        return f"OutputDir({str(self.root)!r})"

    def __enter__(self) -> OutputDir:
        if not self.root.exists():
            self._created_root = True
        self.root.mkdir(parents=True, exist_ok=True)
        return self

    def __exit__(
        self,
        exc_type: Optional[type[BaseException]],
        exc: Optional[BaseException],
        traceback: Optional[TracebackType],
    ) -> None:
        if exc_type is not None:
            self.rollback()

    @property
    def written(self) -> list[Path]:
        """Files registered so far, in order."""
        return list(self._written)

    def track(self, name: str) -> Path:
        """Register a file name and return its path under the directory."""
        path = self.root / name
        if path not in self._written:
            self._written.append(path)
        return path

    def write_text(self, name: str, text: str) -> Path:
        """Write a tracked text file."""
        path = self.track(name)
        path.write_text(text, encoding="utf-8")
        return path

    def rollback(self) -> None:
        """Delete every tracked file, and the directory if this run created it."""
        for path in self._written:
            path.unlink(missing_ok=True)
        if self._created_root and self.root.is_dir() and not any(self.root.iterdir()):
            self.root.rmdir()
        logger.info("removed %d partial output files from %s", len(self._written), self.root)
        self._written.clear()
