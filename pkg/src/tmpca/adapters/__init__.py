"""Adapters for clocks, embedding sources and files.

This module exports the concrete implementations of the ports defined in
tmpca.core.interfaces plus the dataset and output-file adapters.
"""

from tmpca.adapters.datasets import assign_splits, ingest_tsv, load_dataset
from tmpca.adapters.embeddings import (
    HashEmbedding,
    OneHotEmbedding,
    TableEmbedding,
    load_embedding_table,
    load_vocabulary,
)
from tmpca.adapters.storage import OutputDir, emit_csv, read_model, write_model
from tmpca.adapters.time_provider import MockTimeProvider, SystemTimeProvider

__all__ = [
    "HashEmbedding",
    "MockTimeProvider",
    "OneHotEmbedding",
    "OutputDir",
    "SystemTimeProvider",
    "TableEmbedding",
    "assign_splits",
    "emit_csv",
    "ingest_tsv",
    "load_dataset",
    "load_embedding_table",
    "load_vocabulary",
    "read_model",
    "write_model",
]
