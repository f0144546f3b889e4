"""Shared pytest fixtures for tmpca tests.

This module provides common fixtures used across integration and unit tests:
fixture-file paths, a scripted clock, test containers and a factory for
INI configuration files.
"""

from __future__ import annotations

from collections.abc import Iterable
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np
import pytest

from tmpca.container import Container
from tmpca.core.interfaces import TimeProvider

# Path to fixtures directory
FIXTURES_DIR = Path(__file__).parent / "fixtures"
DATASETS_DIR = FIXTURES_DIR / "datasets"
EMBEDDINGS_DIR = FIXTURES_DIR / "embeddings"


@pytest.fixture
def fixtures_dir() -> Path:
    """Return path to the fixtures directory."""
    return FIXTURES_DIR


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for random test data."""
    return np.random.default_rng(20240917)


# ============================================================================
# Scripted clock
# ============================================================================


class ScriptedTimeProvider(TimeProvider):
    """Clock that returns a fixed sequence of readings.

    Useful for timing tests: each timed block consumes two readings, so the
    measured spans are exactly the differences of consecutive pairs.
    """

    def __init__(self, readings: Iterable[float], resolution: float = 1e-9) -> None:
        """Initialize with the readings to hand out, in order."""
        self._readings = list(readings)
        self._resolution = resolution
        self.calls = 0

    def monotonic(self) -> float:
        """Return the next scripted reading."""
        if self.calls >= len(self._readings):
            raise AssertionError("scripted clock ran out of readings")
        value = self._readings[self.calls]
        self.calls += 1
        return value

    def resolution(self) -> float:
        """Return the configured resolution."""
        return self._resolution


def spans_to_readings(spans: Iterable[float]) -> list[float]:
    """Clock readings whose consecutive (start, stop) pairs measure the given spans."""
    readings: list[float] = []
    now = 100.0
    for span in spans:
        readings.extend([now, now + span])
        now += span + 1.0
    return readings


@pytest.fixture
def scripted_clock() -> Callable[..., ScriptedTimeProvider]:
    """Factory for a ScriptedTimeProvider measuring the given spans."""

    def _create(spans: Iterable[float], resolution: float = 1e-9) -> ScriptedTimeProvider:
        return ScriptedTimeProvider(spans_to_readings(spans), resolution)

    return _create


@pytest.fixture
def test_container() -> Container:
    """Container with the deterministic test clock and the Jacobi solver."""
    return Container.create_for_testing()


# ============================================================================
# Configuration files
# ============================================================================


def render_ini(sections: dict[str, dict[str, Any]]) -> str:
    """Render {section: {key: value}} as INI text."""
    lines: list[str] = []
    for section, values in sections.items():
        lines.append(f"[{section}]")
        lines.extend(f"{key} = {value}" for key, value in values.items())
        lines.append("")
    return "\n".join(lines)


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[..., Path]:
    """Factory writing an INI file into tmp_path.

    Sections are merged over a default whose [run] out_dir is tmp_path/out.
    """

    def _write(
        sections: Optional[dict[str, dict[str, Any]]] = None, name: str = "run.ini"
    ) -> Path:
        merged: dict[str, dict[str, Any]] = {"run": {"out_dir": tmp_path / "out"}}
        for section, values in (sections or {}).items():
            merged.setdefault(section, {}).update(values)
        path = tmp_path / name
        path.write_text(render_ini(merged), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def separable_sections() -> dict[str, dict[str, Any]]:
    """Config sections for the linearly separable cash/lunch fixture.

    Every spam text uses the words cash and win, every ham text lunch and
    talk; the table maps them to +e1 and -e1 (N=4, D=2, P=2).
    """
    return {
        "dataset": {
            "name": "separable",
            "split": "files",
            "train_path": DATASETS_DIR / "separable_train.tsv",
            "test_path": DATASETS_DIR / "separable_test.tsv",
            "label_map": "spam:1,ham:-1",
        },
        "pipeline": {
            "sentence_len": 4,
            "embed_dim": 2,
            "branching": 2,
            "embedding": "table",
            "embedding_path": EMBEDDINGS_DIR / "tiny_table.vec",
        },
        "svm": {"epochs": 20, "lambda": 0.1},
        "run": {"seed": 5, "solver": "jacobi"},
    }


@pytest.fixture
def separable_config(
    write_config: Callable[..., Path], separable_sections: dict[str, dict[str, Any]]
) -> Path:
    """INI file for the separable fixture."""
    return write_config(separable_sections)


@pytest.fixture
def tiny_sections() -> dict[str, dict[str, Any]]:
    """Config sections for the 10-record SMS-style fixture with hash embeddings."""
    return {
        "dataset": {"path": DATASETS_DIR / "tiny.tsv", "label_map": "spam:1,ham:-1"},
        "pipeline": {"sentence_len": 4, "embed_dim": 8, "branching": 2, "hash_seed": 3},
        "run": {"seed": 11, "solver": "jacobi"},
    }
