"""Run configuration.

Configuration is an INI file with one section per module:

    [dataset]   where the labeled text comes from and how it is split
    [pipeline]  text numericalization (N, D, P, n-gram, embedding)
    [svm]       classifier hyperparameters
    [run]       methods, output directory, seed, threads, solver
    [bench]     scaling-benchmark grid

Values are strings in the file and validated into pydantic models. Every
problem (unknown key, bad value, missing file) is collected and raised
together as one ConfigurationError. Command-line flags are applied as
overrides before validation.
"""

from __future__ import annotations

import configparser
import io
from pathlib import Path
from typing import Any, Literal, Optional, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from tmpca.core.errors import ConfigurationError
from tmpca.core.models import Method, TimingMethod
from tmpca.core.validation import next_power_of

SECTIONS = ("dataset", "pipeline", "svm", "run", "bench")

Overrides = dict[str, dict[str, Any]]


def _split_list(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


class DatasetProfile(BaseModel):
    """Published setup of one benchmark corpus."""

    model_config = ConfigDict(frozen=True)

    label_map: dict[str, int]
    sentence_len: int
    dev_count: int
    test_count: int


DATASET_PROFILES: dict[str, DatasetProfile] = {
    "sms_spam": DatasetProfile(
        label_map={"spam": 1, "ham": -1}, sentence_len=64, dev_count=500, test_count=558
    ),
    "sst": DatasetProfile(
        label_map={"positive": 1, "negative": -1}, sentence_len=64, dev_count=500, test_count=1803
    ),
    "semeval": DatasetProfile(
        label_map={"positive": 1, "negative": -1}, sentence_len=32, dev_count=915, test_count=2034
    ),
    "imdb": DatasetProfile(
        label_map={"positive": 1, "negative": -1}, sentence_len=64, dev_count=500, test_count=500
    ),
}
"""Label maps, sentence lengths and dev/test sizes of the four reference corpora."""


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class DatasetConfig(_Section):
    """[dataset] section."""

    path: Optional[Path] = None
    name: Optional[str] = None
    profile: Optional[str] = None
    label_map: dict[str, int] = Field(default_factory=lambda: {"spam": 1, "ham": -1})
    split: Literal["seeded", "files"] = "seeded"
    dev_count: int = Field(default=0, ge=0)
    test_count: int = Field(default=0, ge=0)
    train_path: Optional[Path] = None
    dev_path: Optional[Path] = None
    test_path: Optional[Path] = None

    @field_validator("label_map", mode="before")
    @classmethod
    def _parse_label_map(cls, value: Any) -> Any:
        if not isinstance(value, str):
            return value
        mapping: dict[str, str] = {}
        for item in _split_list(value):
            label, sep, target = item.rpartition(":")
            if not sep:
                raise ValueError(f"label_map entry {item!r} must be 'label:+1' or 'label:-1'")
            mapping[label.strip()] = target.strip()
        return mapping

    @field_validator("label_map")
    @classmethod
    def _check_label_targets(cls, value: dict[str, int]) -> dict[str, int]:
        bad = {label: target for label, target in value.items() if target not in (1, -1)}
        if bad:
            raise ValueError(f"labels must map to +1 or -1: {bad}")
        if not value:
            raise ValueError("label_map is empty")
        return value

    @field_validator("profile")
    @classmethod
    def _check_profile(cls, value: Optional[str]) -> Optional[str]:
        if value is not None and value not in DATASET_PROFILES:
            raise ValueError(f"unknown profile {value!r}; known: {sorted(DATASET_PROFILES)}")
        return value

    @property
    def dataset_name(self) -> str:
        """Name used in reports: explicit name, profile, then file stem."""
        if self.name:
            return self.name
        if self.profile:
            return self.profile
        source = self.path or self.train_path
        return source.stem if source is not None else "dataset"


class PipelineConfig(_Section):
    """[pipeline] section: text to fixed-shape embedded sentences."""

    sentence_len: int = Field(default=64, ge=1)
    embed_dim: int = Field(default=64, ge=1)
    branching: int = Field(default=2, ge=2)
    ngram: int = Field(default=1, ge=1)
    stopword_path: Optional[Path] = None
    embedding: Literal["hash", "table", "onehot"] = "hash"
    embedding_path: Optional[Path] = None
    hash_seed: int = Field(default=0, ge=0)
    lowercase: bool = True

    @model_validator(mode="after")
    def _check_embedding_path(self) -> PipelineConfig:
        if self.embedding != "hash" and self.embedding_path is None:
            raise ValueError(f"embedding = {self.embedding} requires embedding_path")
        return self

    @property
    def effective_len(self) -> int:
        """Padded sentence length: the smallest power of branching ≥ sentence_len."""
        return next_power_of(self.sentence_len, self.branching)


class SvmConfig(_Section):
    """[svm] section."""

    lambda_: float = Field(default=1e-4, gt=0.0, alias="lambda")
    epochs: int = Field(default=50, ge=1)
    seed: Optional[int] = None
    """SVM shuffle seed; None uses [run] seed."""

    batch_size: int = Field(default=1, ge=1)
    lambda_grid: list[float] = Field(default_factory=lambda: [1e-2, 1e-3, 1e-4])

    _split_grid = field_validator("lambda_grid", mode="before")(_split_list)

    @field_validator("lambda_grid")
    @classmethod
    def _check_grid(cls, value: list[float]) -> list[float]:
        if any(candidate <= 0 for candidate in value):
            raise ValueError("lambda_grid entries must be positive")
        return value


class RunSection(_Section):
    """[run] section."""

    methods: list[Method] = Field(default_factory=lambda: [Method.TMPCA, Method.PCA, Method.RAW])
    out_dir: Path = Path("out")
    seed: int = 17
    threads: int = Field(default=1, ge=1)
    solver: Literal["auto", "jacobi", "lapack"] = "auto"
    jacobi_max_dim: int = Field(default=64, ge=1)
    ngram_sweep: list[int] = Field(default_factory=list)
    record_timings: bool = True
    label_column: bool = True
    plot_data: bool = False

    _split_methods = field_validator("methods", "ngram_sweep", mode="before")(_split_list)

    @field_validator("ngram_sweep")
    @classmethod
    def _check_sweep(cls, value: list[int]) -> list[int]:
        if any(n < 1 for n in value):
            raise ValueError("ngram_sweep entries must be at least 1")
        return value


class BenchConfig(_Section):
    """[bench] section: reference scaling grid."""

    n_list: list[int] = Field(default_factory=lambda: [16, 32, 64, 128])
    d: int = Field(default=8, ge=1)
    m: int = Field(default=2000, ge=1)
    p: int = Field(default=2, ge=2)
    repetitions: int = Field(default=3, ge=3)
    methods: list[TimingMethod] = Field(
        default_factory=lambda: [TimingMethod.TMPCA, TimingMethod.PCA]
    )
    element_budget: int = Field(default=2**24, ge=1)
    svm_epochs: int = Field(default=5, ge=1)

    _split_lists = field_validator("n_list", "methods", mode="before")(_split_list)


class RunConfig(BaseModel):
    """The whole configuration."""

    model_config = ConfigDict(extra="forbid")

    dataset: DatasetConfig = Field(default_factory=DatasetConfig)
    pipeline: PipelineConfig = Field(default_factory=PipelineConfig)
    svm: SvmConfig = Field(default_factory=SvmConfig)
    run: RunSection = Field(default_factory=RunSection)
    bench: BenchConfig = Field(default_factory=BenchConfig)

    @property
    def svm_seed(self) -> int:
        """Seed used for SVM shuffles."""
        return self.svm.seed if self.svm.seed is not None else self.run.seed

    def missing_paths(self, need_dataset: bool = True) -> list[str]:
        """List referenced input files that do not exist."""
        problems = []
        candidates: list[tuple[str, Optional[Path]]] = [
            ("pipeline.stopword_path", self.pipeline.stopword_path),
            ("pipeline.embedding_path", self.pipeline.embedding_path),
        ]
        if need_dataset:
            if self.dataset.split == "files":
                candidates += [
                    ("dataset.train_path", self.dataset.train_path),
                    ("dataset.test_path", self.dataset.test_path),
                    ("dataset.dev_path", self.dataset.dev_path),
                ]
                if self.dataset.train_path is None or self.dataset.test_path is None:
                    problems.append("dataset: split = files requires train_path and test_path")
            else:
                if self.dataset.path is None:
                    problems.append("dataset.path: required")
                candidates.append(("dataset.path", self.dataset.path))
        for key, path in candidates:
            if path is not None and not path.is_file():
                problems.append(f"{key}: file not found: {path}")
        return problems


def _read_ini(path: Path) -> Overrides:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle)
    except (OSError, configparser.Error) as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    return {section: dict(parser.items(section)) for section in parser.sections()}


def _apply_profile(raw: Overrides) -> None:
    profile_name = raw.get("dataset", {}).get("profile")
    profile = DATASET_PROFILES.get(str(profile_name)) if profile_name else None
    if profile is None:
        return
    dataset = raw.setdefault("dataset", {})
    dataset.setdefault("label_map", dict(profile.label_map))
    dataset.setdefault("dev_count", profile.dev_count)
    dataset.setdefault("test_count", profile.test_count)
    raw.setdefault("pipeline", {}).setdefault("sentence_len", profile.sentence_len)


def load_config(
    path: Optional[Union[str, Path]] = None, overrides: Optional[Overrides] = None
) -> RunConfig:
    """Read, merge and validate a configuration.

    Args:
        path: INI file, or None for all defaults.
        overrides: {section: {key: value}} applied on top of the file
            (command-line flags). None values are ignored.

    Returns:
        The validated RunConfig.

    Raises:
        ConfigurationError: Listing every problem found.
    """
    raw: Overrides = _read_ini(Path(path)) if path is not None else {}
    problems = [f"[{section}]: unknown section" for section in raw if section not in SECTIONS]
    for section, values in (overrides or {}).items():
        for key, value in values.items():
            if value is not None:
                raw.setdefault(section, {})[key] = value
    _apply_profile(raw)
    if problems:
        raise ConfigurationError(problems)
    try:
        return RunConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigurationError(
            [
                f"{'.'.join(str(part) for part in error['loc'])}: {error['msg']}"
                for error in exc.errors()
            ]
        ) from exc


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, dict):
        return ",".join(f"{key}:{target}" for key, target in value.items())
    if isinstance(value, list):
        return ",".join(_format_value(item) for item in value)
    return str(value)


def render_config(config: RunConfig) -> str:
    """Render a configuration in the INI format load_config reads."""
    parser = configparser.ConfigParser(interpolation=None)
    dumped = config.model_dump(mode="json", by_alias=True)
    for section in SECTIONS:
        parser.add_section(section)
        for key, value in dumped[section].items():
            if value is not None:
                parser.set(section, key, _format_value(value))
    buffer = io.StringIO()
    parser.write(buffer)
    return buffer.getvalue()
