"""Labeled dataset ingestion.

Datasets are tab-separated files with one "label<TAB>text" record per
line (the SMS Spam Collection layout). Labels are mapped to ±1 through a
configured label map; the split is either taken from separate files or
assigned by a seeded shuffle with fixed dev/test counts.
"""

from __future__ import annotations

import logging
import warnings
from pathlib import Path
from typing import Optional, Union

import numpy as np

from tmpca.core.config import DatasetConfig
from tmpca.core.errors import ConfigurationError, IngestionError, InvalidArgumentError
from tmpca.core.models import LabeledDataset, LabeledRecord, Split

logger = logging.getLogger(__name__)


def ingest_tsv(
    path: Union[str, Path],
    label_map: dict[str, int],
    split: Split = Split.TRAIN,
    name: Optional[str] = None,
) -> LabeledDataset:
    """Read a "label<TAB>text" file.

    Blank lines are skipped. Records whose text is empty are dropped and
    counted (one warning reports the count); an empty file yields an empty
    dataset and a warning.

    Args:
        path: TSV file, read as UTF-8 with replacement of invalid bytes.
        label_map: Label string to +1/−1, e.g. {"spam": 1, "ham": -1}.
        split: Split tag given to every record.
        name: Dataset name; defaults to the file stem.

    Returns:
        LabeledDataset in file order.

    Raises:
        ConfigurationError: If the file does not exist.
        IngestionError: On a line without a tab or with an unknown label.
    """
    tsv_path = Path(path)
    if not tsv_path.is_file():
        raise ConfigurationError(f"dataset file not found: {tsv_path}")

    records: list[LabeledRecord] = []
    dropped = 0
    with open(tsv_path, encoding="utf-8", errors="replace") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            label, sep, text = line.partition("\t")
            if not sep:
                raise IngestionError("expected 'label<TAB>text'", tsv_path, line_number)
            label = label.strip()
            if label not in label_map:
                raise IngestionError(
                    f"unknown label {label!r} (known: {sorted(label_map)}) in line {line!r}",
                    tsv_path,
                    line_number,
                )
            text = text.strip()
            if not text:
                dropped += 1
                continue
            records.append(LabeledRecord(text=text, label=label_map[label], split=split))

    if dropped:
        warnings.warn(
            f"{tsv_path}: dropped {dropped} records with empty text", UserWarning, stacklevel=2
        )
    if not records:
        warnings.warn(f"{tsv_path}: no records", UserWarning, stacklevel=2)
    logger.info("ingested %d records from %s", len(records), tsv_path)
    return LabeledDataset(name=name or tsv_path.stem, records=records, dropped_empty=dropped)


def assign_splits(
    dataset: LabeledDataset, dev_count: int, test_count: int, seed: int
) -> LabeledDataset:
    """Assign dev/test/train splits by a seeded shuffle.

    The first test_count shuffled positions become test, the next dev_count
    dev and the rest train. Records stay in file order.

    Raises:
        InvalidArgumentError: If dev_count + test_count exceeds the record count.
    """
    total = len(dataset.records)
    if dev_count < 0 or test_count < 0 or dev_count + test_count > total:
        raise InvalidArgumentError(
            f"cannot carve dev={dev_count} and test={test_count} out of {total} records"
        )
    order = np.random.default_rng(seed).permutation(total)
    splits = [Split.TRAIN] * total
    for position, index in enumerate(order[: test_count + dev_count]):
        splits[index] = Split.TEST if position < test_count else Split.DEV
    records = [
        record.model_copy(update={"split": split})
        for record, split in zip(dataset.records, splits)
    ]
    return dataset.model_copy(update={"records": records})


def load_dataset(config: DatasetConfig, seed: int) -> LabeledDataset:
    """Load the dataset a [dataset] section describes.

    Raises:
        ConfigurationError: If a required path is missing.
        IngestionError: On malformed records.
    """
    name = config.dataset_name
    if config.split == "files":
        if config.train_path is None or config.test_path is None:
            raise ConfigurationError("split = files requires train_path and test_path")
        parts = [
            ingest_tsv(config.train_path, config.label_map, Split.TRAIN, name),
            ingest_tsv(config.test_path, config.label_map, Split.TEST, name),
        ]
        if config.dev_path is not None:
            parts.append(ingest_tsv(config.dev_path, config.label_map, Split.DEV, name))
        return LabeledDataset(
            name=name,
            records=[record for part in parts for record in part.records],
            dropped_empty=sum(part.dropped_empty for part in parts),
        )

    if config.path is None:
        raise ConfigurationError("dataset.path is required for split = seeded")
    dataset = ingest_tsv(config.path, config.label_map, Split.TRAIN, name)
    return assign_splits(dataset, config.dev_count, config.test_count, seed)
