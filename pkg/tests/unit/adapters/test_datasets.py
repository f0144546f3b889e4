"""Tests for labeled dataset ingestion and split assignment."""

from __future__ import annotations

import pytest

from tmpca.adapters.datasets import assign_splits, ingest_tsv, load_dataset
from tmpca.core.config import DatasetConfig
from tmpca.core.errors import ConfigurationError, IngestionError, InvalidArgumentError
from tmpca.core.models import Split

LABELS = {"spam": 1, "ham": -1}


@pytest.fixture
def tiny_path(fixtures_dir):
    """The 10-record SMS-style fixture."""
    return fixtures_dir / "datasets" / "tiny.tsv"


# ============================================================================
# Test: ingest_tsv
# ============================================================================


class TestIngestTsv:
    """Reading label<TAB>text files."""

    def test_reads_fixture_in_order(self, tiny_path):
        """Records keep file order and map labels to ±1."""
        dataset = ingest_tsv(tiny_path, LABELS)
        assert dataset.name == "tiny"
        assert len(dataset.records) == 10
        assert dataset.records[0].label == -1
        assert dataset.records[2].label == 1
        assert dataset.records[2].text.startswith("Free entry")
        assert all(record.split == Split.TRAIN for record in dataset.records)

    def test_split_and_name_arguments(self, tiny_path):
        """The split tag and name are applied to every record."""
        dataset = ingest_tsv(tiny_path, LABELS, Split.TEST, name="sms")
        assert dataset.name == "sms"
        assert dataset.counts()[Split.TEST] == 10

    def test_blank_lines_skipped(self, tmp_path):
        """Blank lines are not records."""
        path = tmp_path / "data.tsv"
        path.write_text("spam\twin now\n\n   \nham\tsee you\n", encoding="utf-8")
        assert len(ingest_tsv(path, LABELS).records) == 2

    def test_empty_text_dropped_with_warning(self, tmp_path):
        """Records with empty text are counted and reported once."""
        path = tmp_path / "data.tsv"
        path.write_text("spam\twin now\nham\t  \nham\t\nham\tok\n", encoding="utf-8")
        with pytest.warns(UserWarning, match="dropped 2 records"):
            dataset = ingest_tsv(path, LABELS)
        assert dataset.dropped_empty == 2
        assert [record.text for record in dataset.records] == ["win now", "ok"]

    def test_empty_file_warns(self, tmp_path):
        """An empty file gives an empty dataset and a warning."""
        path = tmp_path / "empty.tsv"
        path.write_text("", encoding="utf-8")
        with pytest.warns(UserWarning, match="no records"):
            assert ingest_tsv(path, LABELS).records == []

    def test_missing_tab(self, tmp_path):
        """A line without a tab names the file and line."""
        path = tmp_path / "data.tsv"
        path.write_text("spam\twin\nham see you\n", encoding="utf-8")
        with pytest.raises(IngestionError) as exc_info:
            ingest_tsv(path, LABELS)
        assert exc_info.value.line_number == 2
        assert "label<TAB>text" in str(exc_info.value)

    def test_unknown_label(self, tmp_path):
        """An unmapped label lists the known labels."""
        path = tmp_path / "data.tsv"
        path.write_text("junk\tbuy now\n", encoding="utf-8")
        expected = r"unknown label 'junk' \(known: \['ham', 'spam'\]\)"
        with pytest.raises(IngestionError, match=expected):
            ingest_tsv(path, LABELS)

    def test_invalid_utf8_replaced(self, tmp_path):
        """Undecodable bytes are replaced, not fatal."""
        path = tmp_path / "data.tsv"
        path.write_bytes(b"spam\twin \xff now\n")
        assert "�" in ingest_tsv(path, LABELS).records[0].text

    def test_crlf_line_endings(self, tmp_path):
        """Windows line endings are stripped."""
        path = tmp_path / "data.tsv"
        path.write_bytes(b"spam\twin\r\nham\tok\r\n")
        assert [record.text for record in ingest_tsv(path, LABELS).records] == ["win", "ok"]

    def test_missing_file(self, tmp_path):
        """A missing dataset is a configuration error."""
        with pytest.raises(ConfigurationError, match="not found"):
            ingest_tsv(tmp_path / "absent.tsv", LABELS)


# ============================================================================
# Test: Splits
# ============================================================================


class TestSplits:
    """Seeded split assignment and config-driven loading."""

    def test_counts_and_file_order(self, tiny_path):
        """Exactly the requested counts; records stay in file order."""
        dataset = assign_splits(ingest_tsv(tiny_path, LABELS), dev_count=2, test_count=3, seed=1)
        assert dataset.counts() == {Split.TRAIN: 5, Split.DEV: 2, Split.TEST: 3}
        assert [record.text for record in dataset.records] == [
            record.text for record in ingest_tsv(tiny_path, LABELS).records
        ]

    def test_seed_determines_assignment(self, tiny_path):
        """The same seed gives the same splits."""
        base = ingest_tsv(tiny_path, LABELS)
        first = assign_splits(base, 2, 3, seed=5)
        second = assign_splits(base, 2, 3, seed=5)
        assert [r.split for r in first.records] == [r.split for r in second.records]

    def test_test_drawn_before_dev(self, tiny_path):
        """Growing dev_count leaves the test split unchanged."""
        base = ingest_tsv(tiny_path, LABELS)
        small = assign_splits(base, 1, 3, seed=5)
        large = assign_splits(base, 4, 3, seed=5)
        assert small.texts(Split.TEST) == large.texts(Split.TEST)

    def test_too_many_requested(self, tiny_path):
        """dev + test above the record count is rejected."""
        with pytest.raises(InvalidArgumentError, match="out of 10 records"):
            assign_splits(ingest_tsv(tiny_path, LABELS), 6, 5, seed=0)

    def test_load_seeded(self, tiny_path):
        """Seeded mode reads one file and splits it."""
        config = DatasetConfig(path=tiny_path, dev_count=2, test_count=2)
        dataset = load_dataset(config, seed=3)
        assert dataset.counts() == {Split.TRAIN: 6, Split.DEV: 2, Split.TEST: 2}

    def test_load_files(self, fixtures_dir):
        """Files mode tags each file with its split."""
        datasets = fixtures_dir / "datasets"
        config = DatasetConfig(
            name="separable",
            split="files",
            train_path=datasets / "separable_train.tsv",
            test_path=datasets / "separable_test.tsv",
        )
        dataset = load_dataset(config, seed=0)
        assert dataset.name == "separable"
        assert dataset.counts() == {Split.TRAIN: 8, Split.DEV: 0, Split.TEST: 4}

    def test_load_seeded_needs_path(self):
        """Seeded mode without a path is a configuration error."""
        with pytest.raises(ConfigurationError):
            load_dataset(DatasetConfig(), seed=0)
