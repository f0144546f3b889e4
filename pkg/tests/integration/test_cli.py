"""Integration tests for the tmpca CLI.

This module tests the CLI interface using Click's CliRunner, verifying
option handling, the files each command writes, exit codes and cleanup
of partial outputs.
"""

from __future__ import annotations

import csv
import json

import numpy as np
import pytest
from click.testing import CliRunner

from tmpca import __version__
from tmpca.adapters.storage import read_features, read_report, read_timings
from tmpca.cli import EXIT_CODES, UNEXPECTED_EXIT_CODE, exit_code_for, main
from tmpca.core.errors import (
    ClockResolutionError,
    ConfigurationError,
    IngestionError,
    NumericalFailureError,
)
from tmpca.core.models import TimingMethod


@pytest.fixture
def cli_runner() -> CliRunner:
    """Create a Click CliRunner for testing."""
    return CliRunner()


@pytest.fixture
def tiny_config(write_config, tiny_sections):
    """INI file for the 10-record fixture."""
    return write_config(tiny_sections)


def read_rows(path):
    """CSV rows as lists of strings."""
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


# ============================================================================
# Test: fit
# ============================================================================


class TestFit:
    """tmpca fit."""

    def test_writes_model_and_effective_config(self, cli_runner, tiny_config, tmp_path):
        """model.json holds a two-level tree; the effective config is echoed."""
        result = cli_runner.invoke(main, ["fit", "--config", str(tiny_config)])
        assert result.exit_code == 0, result.output
        assert "TMPCA tree n=4 d=8 p=2 (2 levels)" in result.output
        assert "retained variance per level" in result.output

        model = json.loads((tmp_path / "out" / "model.json").read_text())
        assert (model["n"], model["d"], model["p"]) == (4, 8, 2)
        assert len(model["levels"]) == 2
        effective = (tmp_path / "out" / "effective-config.txt").read_text()
        assert "sentence_len = 4" in effective

    def test_refit_writes_identical_model(self, cli_runner, tiny_config, tmp_path):
        """Two fits with the same config and seed write byte-identical model.json."""
        paths = []
        for name in ("first", "second"):
            target = tmp_path / name
            result = cli_runner.invoke(
                main, ["fit", "--config", str(tiny_config), "--out-dir", str(target)]
            )
            assert result.exit_code == 0, result.output
            paths.append(target / "model.json")
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_method_flag_selects_pca(self, cli_runner, tiny_config, tmp_path):
        """--method pca fits the full-sentence PCA."""
        result = cli_runner.invoke(main, ["fit", "--config", str(tiny_config), "--method", "pca"])
        assert result.exit_code == 0, result.output
        assert "PCA 32->8" in result.output

    def test_out_dir_flag(self, cli_runner, tiny_config, tmp_path):
        """--out-dir overrides run.out_dir."""
        target = tmp_path / "elsewhere"
        result = cli_runner.invoke(
            main, ["fit", "--config", str(tiny_config), "--out-dir", str(target)]
        )
        assert result.exit_code == 0, result.output
        assert (target / "model.json").is_file()
        assert not (tmp_path / "out").exists()

    def test_raw_has_nothing_to_fit(self, cli_runner, tiny_config, tmp_path):
        """--method raw is a configuration error and leaves no files."""
        result = cli_runner.invoke(main, ["fit", "--config", str(tiny_config), "--method", "raw"])
        assert result.exit_code == 1
        assert "Error: method raw has no reduction model to fit" in result.output
        assert not (tmp_path / "out").exists()


# ============================================================================
# Test: transform
# ============================================================================


class TestTransform:
    """tmpca transform."""

    def test_transform_with_model(self, cli_runner, tiny_config, tmp_path, fixtures_dir):
        """A fitted tree reduces every record to D features plus the label."""
        fitted = cli_runner.invoke(main, ["fit", "--config", str(tiny_config)])
        assert fitted.exit_code == 0, fitted.output

        out_dir = tmp_path / "features"
        result = cli_runner.invoke(
            main,
            [
                "transform",
                "--config",
                str(tiny_config),
                "--model",
                str(tmp_path / "out" / "model.json"),
                "--dataset",
                str(fixtures_dir / "datasets" / "separable_test.tsv"),
                "--out-dir",
                str(out_dir),
            ],
        )
        assert result.exit_code == 0, result.output
        features, labels = read_features(out_dir / "features.csv", label_column=True)
        assert features.shape == (4, 8)
        assert set(labels.tolist()) == {1.0, -1.0}

    def test_full_width_tree_matches_pca(self, cli_runner, tiny_config, tmp_path):
        """With --branch equal to the sentence length, tmpca and pca features agree."""
        outputs = {}
        for method in ("tmpca", "pca"):
            fit_dir = tmp_path / f"{method}-model"
            common = ["--config", str(tiny_config), "--branch", "4", "--method", method]
            fitted = cli_runner.invoke(main, ["fit", *common, "--out-dir", str(fit_dir)])
            assert fitted.exit_code == 0, fitted.output
            feature_dir = tmp_path / f"{method}-features"
            result = cli_runner.invoke(
                main,
                [
                    "transform",
                    *common,
                    "--model",
                    str(fit_dir / "model.json"),
                    "--out-dir",
                    str(feature_dir),
                ],
            )
            assert result.exit_code == 0, result.output
            outputs[method] = read_features(feature_dir / "features.csv", label_column=True)
        np.testing.assert_allclose(outputs["tmpca"][0], outputs["pca"][0], rtol=0, atol=1e-8)
        np.testing.assert_array_equal(outputs["tmpca"][1], outputs["pca"][1])

    def test_raw_without_label(self, cli_runner, tiny_config, tmp_path):
        """--method raw flattens sentences; --no-label drops the label column."""
        result = cli_runner.invoke(
            main,
            ["transform", "--config", str(tiny_config), "--method", "raw", "--no-label"],
        )
        assert result.exit_code == 0, result.output
        features, labels = read_features(tmp_path / "out" / "features.csv")
        assert features.shape == (10, 32)
        assert labels is None

    def test_reducer_needs_model(self, cli_runner, tiny_config):
        """Without --model only raw can transform."""
        result = cli_runner.invoke(main, ["transform", "--config", str(tiny_config)])
        assert result.exit_code == 1
        assert "--model" in result.output

    def test_model_shape_mismatch(self, cli_runner, tiny_config, tmp_path):
        """A model fitted for another sentence shape exits 2."""
        fitted = cli_runner.invoke(main, ["fit", "--config", str(tiny_config)])
        assert fitted.exit_code == 0, fitted.output
        result = cli_runner.invoke(
            main,
            [
                "transform",
                "--config",
                str(tiny_config),
                "--model",
                str(tmp_path / "out" / "model.json"),
                "--branch",
                "3",
                "--out-dir",
                str(tmp_path / "mismatch"),
            ],
        )
        assert result.exit_code == 2
        assert "model expects 4x8 sentences" in result.output
        assert not (tmp_path / "mismatch").exists()


# ============================================================================
# Test: train-eval
# ============================================================================


class TestTrainEval:
    """tmpca train-eval."""

    def test_report_and_svm_models(self, cli_runner, separable_config, tmp_path):
        """One report row and one SVM model per method."""
        result = cli_runner.invoke(main, ["train-eval", "--config", str(separable_config)])
        assert result.exit_code == 0, result.output

        out = tmp_path / "out"
        rows = read_report(out / "report.csv")
        assert [row.method for row in rows] == ["tmpca", "pca", "raw"]
        assert all(row.error_rate == 0.0 for row in rows)
        assert all(row.train_seconds is not None for row in rows)
        for method in ("tmpca", "pca", "raw"):
            svm = json.loads((out / f"svm-{method}.json").read_text())
            assert svm["lambda"] == 0.1
        assert not (out / "total-training-time.csv").exists()

    def test_no_timings_is_reproducible(self, cli_runner, separable_config, tmp_path):
        """Two runs with --no-timings write identical reports."""
        reports = []
        for name in ("first", "second"):
            out_dir = tmp_path / name
            result = cli_runner.invoke(
                main,
                [
                    "train-eval",
                    "--config",
                    str(separable_config),
                    "--no-timings",
                    "--out-dir",
                    str(out_dir),
                ],
            )
            assert result.exit_code == 0, result.output
            reports.append((out_dir / "report.csv").read_bytes())
        assert reports[0] == reports[1]
        assert read_rows(tmp_path / "first" / "report.csv")[1] == [
            "tmpca",
            "separable",
            "test",
            "0.0",
            "",
        ]

    def test_ngram_sweep_and_plot_data(self, cli_runner, separable_config, tmp_path):
        """Sweep rows follow the method rows; chart data has one bar per row."""
        result = cli_runner.invoke(
            main,
            [
                "train-eval",
                "--config",
                str(separable_config),
                "--method",
                "tmpca",
                "--ngram-sweep",
                "1,2",
                "--plot-data",
            ],
        )
        assert result.exit_code == 0, result.output
        out = tmp_path / "out"
        assert [row.method for row in read_report(out / "report.csv")] == [
            "tmpca",
            "tmpca-1gram",
            "tmpca-2gram",
        ]
        total = read_rows(out / "total-training-time.csv")
        assert total[0] == ["method", "config", "seconds"]
        assert [row[0] for row in total[1:]] == ["tmpca", "tmpca-1gram", "tmpca-2gram"]
        assert read_rows(out / "svm-training-time.csv")[0][0] == "features"

    def test_malformed_dataset(self, cli_runner, write_config, tmp_path):
        """A line without a tab exits 2 and removes partial outputs."""
        broken = tmp_path / "broken.tsv"
        broken.write_text("spam\tfree cash\nno tab on this line\n", encoding="utf-8")
        config = write_config({"dataset": {"path": broken}, "pipeline": {"sentence_len": 4}})
        result = cli_runner.invoke(main, ["train-eval", "--config", str(config)])
        assert result.exit_code == 2
        assert "Error:" in result.output
        assert not (tmp_path / "out").exists()

    def test_existing_out_dir_kept_on_failure(self, cli_runner, write_config, tmp_path):
        """Rollback removes written files but not a directory that already existed."""
        out = tmp_path / "out"
        out.mkdir()
        (out / "notes.txt").write_text("keep me", encoding="utf-8")
        broken = tmp_path / "broken.tsv"
        broken.write_text("maybe\tunknown label\n", encoding="utf-8")
        config = write_config({"dataset": {"path": broken}})
        result = cli_runner.invoke(main, ["train-eval", "--config", str(config)])
        assert result.exit_code == 2
        assert sorted(path.name for path in out.iterdir()) == ["notes.txt"]


# ============================================================================
# Test: bench
# ============================================================================


class TestBench:
    """tmpca bench."""

    def test_timings_and_slopes(self, cli_runner, write_config, tmp_path):
        """timings.csv has one row per method and n; slopes are printed."""
        config = write_config({"bench": {"n_list": "2,4,8", "d": 2, "m": 20}})
        result = cli_runner.invoke(main, ["bench", "--config", str(config), "--plot-data"])
        assert result.exit_code == 0, result.output
        assert "slope gap" in result.output

        out = tmp_path / "out"
        records = read_timings(out / "timings.csv")
        assert [(record.method, record.n) for record in records] == [
            (TimingMethod.TMPCA, 2),
            (TimingMethod.TMPCA, 4),
            (TimingMethod.TMPCA, 8),
            (TimingMethod.PCA, 2),
            (TimingMethod.PCA, 4),
            (TimingMethod.PCA, 8),
        ]
        assert all(record.wall_seconds > 0 for record in records)
        assert (out / "total-training-time.csv").is_file()

    def test_no_dataset_needed(self, cli_runner, write_config):
        """bench runs without a [dataset] section."""
        config = write_config({"bench": {"n_list": "2,4,8", "d": 2, "m": 10}})
        result = cli_runner.invoke(main, ["bench", "--config", str(config)])
        assert result.exit_code == 0, result.output

    def test_over_budget(self, cli_runner, write_config, tmp_path):
        """An over-budget grid exits 3 before timing anything."""
        config = write_config(
            {"bench": {"n_list": "2,4,8", "d": 2, "m": 10, "element_budget": 16}}
        )
        result = cli_runner.invoke(main, ["bench", "--config", str(config)])
        assert result.exit_code == 3
        assert not (tmp_path / "out").exists()


# ============================================================================
# Test: Configuration errors and exit codes
# ============================================================================


class TestConfigurationErrors:
    """Bad configs exit 1 without writing anything."""

    def test_unknown_key(self, cli_runner, write_config, tmp_path):
        """Unknown keys are reported by name."""
        config = write_config({"pipeline": {"colour": "red"}})
        result = cli_runner.invoke(main, ["bench", "--config", str(config)])
        assert result.exit_code == 1
        assert "pipeline.colour" in result.output
        assert not (tmp_path / "out").exists()

    def test_missing_dataset_file(self, cli_runner, write_config, tmp_path):
        """A dataset path that does not exist is a configuration error."""
        config = write_config({"dataset": {"path": tmp_path / "absent.tsv"}})
        result = cli_runner.invoke(main, ["fit", "--config", str(config)])
        assert result.exit_code == 1
        assert "file not found" in result.output

    def test_bad_flag_value(self, cli_runner, tiny_config):
        """A flag value that fails validation exits 1."""
        result = cli_runner.invoke(main, ["fit", "--config", str(tiny_config), "--branch", "1"])
        assert result.exit_code == 1
        assert "pipeline.branching" in result.output

    @pytest.mark.parametrize(
        "error, code",
        [
            (ConfigurationError("x"), 1),
            (IngestionError("x", "data.tsv"), 2),
            (NumericalFailureError("x", 1.0), 3),
            (ClockResolutionError("x"), 3),
            (RuntimeError("x"), UNEXPECTED_EXIT_CODE),
        ],
    )
    def test_exit_code_for(self, error, code):
        """Each error family maps to its exit code."""
        assert exit_code_for(error) == code

    def test_codes_documented(self):
        """Codes stay within the documented range."""
        assert {code for _, code in EXIT_CODES} == {1, 2, 3}


class TestVersion:
    """--version."""

    def test_version(self, cli_runner):
        """Prints the package version."""
        result = cli_runner.invoke(main, ["--version"])
        assert result.exit_code == 0
        assert __version__ in result.output
