"""Thin CLI wrapper around Experiment.

Every command reads an INI config (see tmpca.core.config), applies its
flags as overrides, echoes the effective config into the output directory
and writes its results there under fixed names.

Exit codes:
    0 - All outputs written
    1 - Configuration error (bad key or value, missing file)
    2 - Input error (malformed data file, bad values, shape mismatch)
    3 - Numerical failure, resource budget or clock resolution error
    4 - Unexpected error

On any nonzero exit the files the command wrote are removed.

Example:
    $ tmpca fit --config sms.ini --method tmpca
    $ tmpca transform --config sms.ini --model out/model.json --no-label
    $ tmpca train-eval --config sms.ini --ngram-sweep 1,2,4,8
    $ tmpca bench --out-dir bench-out --plot-data
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Any, Callable, Optional

import click

from tmpca import __version__
from tmpca.adapters.storage import (
    EFFECTIVE_CONFIG_FILE,
    FEATURES_FILE,
    MODEL_FILE,
    REPORT_FILE,
    SVM_TIME_FILE,
    TIMINGS_FILE,
    TOTAL_TIME_FILE,
    OutputDir,
    emit_csv,
    read_model,
    write_features,
    write_model,
    write_plot_data,
    write_report,
)
from tmpca.container import Container
from tmpca.core.config import Overrides, RunConfig, load_config, render_config
from tmpca.core.errors import (
    ClockResolutionError,
    ConfigurationError,
    IngestionError,
    InvalidArgumentError,
    InvalidInputError,
    NumericalFailureError,
    ResourceBudgetError,
)
from tmpca.core.models import Method, TmpcaModel
from tmpca.experiment import Experiment, bench_plot_points, describe, evaluation_plot_points

logger = logging.getLogger(__name__)

EXIT_CODES: list[tuple[type[BaseException], int]] = [
    (ConfigurationError, 1),
    (IngestionError, 2),
    (InvalidInputError, 2),
    (InvalidArgumentError, 2),
    (NumericalFailureError, 3),
    (ResourceBudgetError, 3),
    (ClockResolutionError, 3),
]
UNEXPECTED_EXIT_CODE = 4


def exit_code_for(error: BaseException) -> int:
    """Map an exception to its exit code (first matching class wins)."""
    for error_type, code in EXIT_CODES:
        if isinstance(error, error_type):
            return code
    return UNEXPECTED_EXIT_CODE


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def shared_options(command: Callable[..., Any]) -> Callable[..., Any]:
    """Options every subcommand accepts."""
    options = [
        click.option(
            "--config",
            "config_path",
            type=click.Path(path_type=Path, dir_okay=False),
            default=None,
            help="INI configuration file",
        ),
        click.option("--seed", type=int, default=None, help="Run seed (run.seed)"),
        click.option("--threads", type=int, default=None, help="Worker threads (run.threads)"),
        click.option(
            "--out-dir",
            type=click.Path(path_type=Path, file_okay=False),
            default=None,
            help="Output directory (run.out_dir)",
        ),
        click.option("--ngram", type=int, default=None, help="Gram size (pipeline.ngram)"),
        click.option(
            "--method",
            default=None,
            help="Method(s), comma-separated: tmpca, pca, raw (run.methods)",
        ),
        click.option(
            "--branch",
            type=int,
            default=None,
            help="Branching factor P (pipeline.branching; bench.p for bench)",
        ),
        click.option("--verbose", "-v", is_flag=True, help="Log progress to stderr"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _overrides(options: dict[str, Any], branch_key: tuple[str, str]) -> Overrides:
    overrides: Overrides = {
        "run": {
            "seed": options.get("seed"),
            "threads": options.get("threads"),
            "out_dir": options.get("out_dir"),
            "methods": options.get("method"),
            "ngram_sweep": options.get("ngram_sweep"),
            "label_column": options.get("label"),
            "plot_data": True if options.get("plot_data") else None,
            "record_timings": False if options.get("no_timings") else None,
        },
        "pipeline": {"ngram": options.get("ngram")},
        "dataset": {"path": options.get("dataset")},
    }
    section, key = branch_key
    overrides.setdefault(section, {})[key] = options.get("branch")
    return overrides


def _run_command(
    options: dict[str, Any],
    body: Callable[[Experiment, OutputDir], None],
    need_dataset: bool = True,
    branch_key: tuple[str, str] = ("pipeline", "branching"),
) -> None:
    """Load config, run body inside an output transaction and exit with its code."""
    _configure_logging(options.get("verbose", False))
    try:
        config: RunConfig = load_config(options.get("config_path"), _overrides(options, branch_key))
        if need_dataset:
            problems = config.missing_paths()
            if problems:
                raise ConfigurationError(problems)
        container = Container.create_default(
            solver=config.run.solver,
            max_jacobi_dim=config.run.jacobi_max_dim,
            threads=config.run.threads,
        )
        experiment = Experiment(container, config)
        with OutputDir(config.run.out_dir) as out:
            out.write_text(EFFECTIVE_CONFIG_FILE, render_config(config))
            body(experiment, out)
    except Exception as error:
        code = exit_code_for(error)
        if code == UNEXPECTED_EXIT_CODE and options.get("verbose"):
            logger.exception("unexpected error")
        click.echo(f"Error: {error}", err=True)
        sys.exit(code)


@click.group()
@click.version_option(version=__version__)
def main() -> None:
    """Tree-structured multi-linear PCA for text classification."""


@main.command()
@shared_options
def fit(**options: Any) -> None:
    """Fit a TMPCA tree (or full-sentence PCA) on the train split; writes model.json."""

    def body(experiment: Experiment, out: OutputDir) -> None:
        outcome = experiment.fit()
        write_model(outcome.model, out.track(MODEL_FILE))
        click.echo(
            f"fitted {describe(outcome.model)} on {outcome.sentences} sentences "
            f"in {outcome.seconds:.6f}s (predicted cost {outcome.predicted_cost:.6g})"
        )
        if isinstance(outcome.model, TmpcaModel) and outcome.model.depth:
            retained = ", ".join(f"{value:.4f}" for value in outcome.model.retained_variance())
            click.echo(f"retained variance per level: {retained}")

    _run_command(options, body)


@main.command()
@shared_options
@click.option(
    "--model",
    "model_path",
    type=click.Path(path_type=Path, dir_okay=False),
    default=None,
    help="Model file from `tmpca fit`; omit for --method raw",
)
@click.option("--dataset", type=str, default=None, help="TSV dataset (dataset.path)")
@click.option(
    "--label/--no-label",
    default=None,
    help="Write a leading label column (run.label_column)",
)
def transform(**options: Any) -> None:
    """Reduce every record of a dataset; writes features.csv in file order."""
    model_path: Optional[Path] = options.get("model_path")

    def body(experiment: Experiment, out: OutputDir) -> None:
        if model_path is not None:
            model = read_model(model_path)
        elif experiment.config.run.methods[0] == Method.RAW:
            model = None
        else:
            raise ConfigurationError("transform needs --model unless --method raw")
        records = experiment.dataset.records
        features = experiment.transform(model, [record.text for record in records])
        labels = None
        if experiment.config.run.label_column:
            labels = [record.label for record in records]
        write_features(features, out.track(FEATURES_FILE), labels)
        click.echo(
            f"wrote {features.shape[0]}x{features.shape[1]} {describe(model)} features "
            f"to {out.root / FEATURES_FILE}"
        )

    _run_command(options, body)


@main.command("train-eval")
@shared_options
@click.option(
    "--ngram-sweep",
    default=None,
    help="Comma-separated gram sizes trained on n-gram text, tested on unigrams",
)
@click.option("--plot-data", is_flag=True, help="Also write the training-time chart data")
@click.option(
    "--no-timings",
    is_flag=True,
    help="Leave train_seconds empty so report.csv is byte-reproducible",
)
def train_eval(**options: Any) -> None:
    """Train and test an SVM on each feature regime; writes report.csv."""

    def body(experiment: Experiment, out: OutputDir) -> None:
        outcomes = experiment.train_eval()
        rows = [outcome.row for outcome in outcomes]
        write_report(rows, out.track(REPORT_FILE))
        for outcome in outcomes:
            write_model(outcome.svm, out.track(f"svm-{outcome.row.method}.json"))
        if experiment.config.run.plot_data:
            total, svm = evaluation_plot_points(rows)
            write_plot_data(total, out.track(TOTAL_TIME_FILE), "method")
            write_plot_data(svm, out.track(SVM_TIME_FILE), "features")
        for row in rows:
            click.echo(
                f"{row.method:<14} {row.dataset}: test error {row.error_rate:.4f} "
                f"({row.feature_dim} features, lambda {row.svm_lambda:g})"
            )

    _run_command(options, body)


@main.command()
@shared_options
@click.option("--plot-data", is_flag=True, help="Also write the per-chart timing data")
def bench(**options: Any) -> None:
    """Time tree and full PCA fits on synthetic data; writes timings.csv."""

    def body(experiment: Experiment, out: OutputDir) -> None:
        result = experiment.bench()
        emit_csv(result.records, out.track(TIMINGS_FILE))
        if experiment.config.run.plot_data:
            total, svm = bench_plot_points(result)
            write_plot_data(total, out.track(TOTAL_TIME_FILE), "method")
            write_plot_data(svm, out.track(SVM_TIME_FILE), "features")
        click.echo(
            f"slope tmpca {result.slope_tmpca:.3f} (formula {result.predicted_slope_tmpca:.3f})"
        )
        click.echo(f"slope pca   {result.slope_pca:.3f} (formula {result.predicted_slope_pca:.3f})")
        click.echo(f"slope gap   {result.slope_gap:.3f}")

    _run_command(options, body, need_dataset=False, branch_key=("bench", "p"))
