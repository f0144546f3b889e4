"""Raw text to fixed-shape embedded sentences.

A Numericalizer runs the preprocessing stages, fits the unit sequence to
the effective sentence length and embeds each unit:

- the pad unit embeds to the zero vector;
- an n-gram embeds to the mean of its constituent token vectors;
- a token the source does not know embeds to zero and is counted.

The result for one text is an N×D float64 matrix whose pad rows are the
trailing zero rows.
"""

from __future__ import annotations

import logging
import threading
import warnings
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Union

import numpy as np

from tmpca.adapters.embeddings import (
    HashEmbedding,
    OneHotEmbedding,
    load_embedding_table,
    load_vocabulary,
)
from tmpca.core.config import PipelineConfig
from tmpca.core.errors import ConfigurationError
from tmpca.core.interfaces import EmbeddingSource
from tmpca.core.validation import validate_positive_int
from tmpca.text.preprocess import (
    PAD_GRAM,
    Gram,
    load_stopwords,
    ngram_merge,
    pad_or_truncate,
    porter_stem,
    remove_stopwords,
    tokenize,
)

logger = logging.getLogger(__name__)

Unit = Union[str, Gram]


def create_embedding_source(config: PipelineConfig) -> EmbeddingSource:
    """Build the embedding source a [pipeline] section selects.

    Raises:
        ConfigurationError: If a file is missing or a table's dimension
            disagrees with embed_dim.
        IngestionError: If a table file is malformed.
    """
    if config.embedding == "hash":
        return HashEmbedding(config.embed_dim, config.hash_seed)
    if config.embedding_path is None:
        raise ConfigurationError(f"embedding = {config.embedding} requires embedding_path")
    if config.embedding == "onehot":
        return OneHotEmbedding(load_vocabulary(config.embedding_path), config.embed_dim)
    table = load_embedding_table(config.embedding_path)
    if table.dim != config.embed_dim:
        raise ConfigurationError(
            f"embedding table {config.embedding_path} has dim {table.dim}, "
            f"pipeline.embed_dim is {config.embed_dim}"
        )
    return table


def _embed(unit: Unit, source: EmbeddingSource) -> tuple[np.ndarray, int]:
    """Embed a token or gram; returns (vector, number of unknown tokens)."""
    tokens = (unit,) if isinstance(unit, str) else unit
    vector = np.zeros(source.dim)
    if tokens == PAD_GRAM:
        return vector, 0
    missing = 0
    for token in tokens:
        found = source.lookup(token)
        if found is None:
            missing += 1
        else:
            vector += found
    return vector / len(tokens), missing


def embed_token(unit: Unit, source: EmbeddingSource) -> np.ndarray:
    """Embed one token or gram; unknown tokens and the pad unit contribute zero.

    Examples:
        >>> from tmpca.adapters.embeddings import TableEmbedding
        >>> table = TableEmbedding({"a": np.array([1.0, 0.0]), "b": np.array([0.0, 1.0])}, 2)
        >>> embed_token(("a", "b"), table).tolist()
        [0.5, 0.5]
    """
    return _embed(unit, source)[0]


class Numericalizer:
    """Text → N×D matrix pipeline bound to one configuration.

    Thread-safe: preprocessing is pure and the out-of-vocabulary counters
    are guarded by a lock.
    """

    def __init__(
        self,
        source: EmbeddingSource,
        stopwords: frozenset[str],
        sentence_len: int,
        ngram: int = 1,
        lowercase: bool = True,
    ) -> None:
        """Initialize the pipeline.

        Args:
            source: Token embedding source; its dim is D.
            stopwords: Words removed before stemming.
            sentence_len: Effective sentence length N (already padded to a
                power of the branching factor).
            ngram: Default gram size.
            lowercase: Lowercase before tokenizing.
        """
        self.source = source
        self.stopwords = stopwords
        self.sentence_len = validate_positive_int(sentence_len, "sentence_len")
        self.ngram = validate_positive_int(ngram, "ngram")
        self.lowercase = lowercase
        self._lock = threading.Lock()
        self._lookups = 0
        self._missing = 0

    @classmethod
    def from_config(
        cls, config: PipelineConfig, source: Optional[EmbeddingSource] = None
    ) -> Numericalizer:
        """Build a Numericalizer from a [pipeline] section.

        Args:
            config: Pipeline configuration.
            source: Prebuilt embedding source (skips loading files).
        """
        return cls(
            source=source if source is not None else create_embedding_source(config),
            stopwords=load_stopwords(config.stopword_path),
            sentence_len=config.effective_len,
            ngram=config.ngram,
            lowercase=config.lowercase,
        )

    def __repr__(self) -> str:
        return (
            f"Numericalizer(source={self.source!r}, sentence_len={self.sentence_len}, "
            f"ngram={self.ngram})"
        )

    @property
    def dim(self) -> int:
        """Embedding dimension D."""
        return self.source.dim

    @property
    def oov_count(self) -> int:
        """Token lookups the source could not answer."""
        return self._missing

    @property
    def lookup_count(self) -> int:
        """Token lookups performed (pad units excluded)."""
        return self._lookups

    def preprocess(self, text: Union[str, bytes], ngram: Optional[int] = None) -> list[Gram]:
        """Tokenize, drop stop words, stem, gram-merge and pad/truncate.

        Returns:
            Exactly sentence_len units; PAD_GRAM fills the tail.
        """
        tokens = remove_stopwords(tokenize(text, self.lowercase), self.stopwords)
        stems = [porter_stem(token) for token in tokens]
        size = self.ngram if ngram is None else ngram
        grams = ngram_merge(stems, size) if stems else []
        return pad_or_truncate(grams, self.sentence_len, PAD_GRAM)

    def embed_unit(self, unit: Unit) -> np.ndarray:
        """Embed one unit and count unknown constituents."""
        vector, missing = _embed(unit, self.source)
        if unit != PAD_GRAM:
            with self._lock:
                self._lookups += 1 if isinstance(unit, str) else len(unit)
                self._missing += missing
        return vector

    def numericalize(self, text: Union[str, bytes], ngram: Optional[int] = None) -> np.ndarray:
        """Turn one text into a sentence_len×D matrix.

        Args:
            text: Raw text.
            ngram: Gram size for this call; defaults to the configured one.
        """
        units = self.preprocess(text, ngram)
        return np.stack([self.embed_unit(unit) for unit in units])

    def numericalize_many(
        self, texts: Sequence[Union[str, bytes]], threads: int = 1, ngram: Optional[int] = None
    ) -> np.ndarray:
        """Numericalize a batch, in order, optionally on a thread pool.

        Returns:
            M×sentence_len×D array (0×sentence_len×D for no texts).
        """
        threads = validate_positive_int(threads, "threads")
        before_lookups, before_missing = self._lookups, self._missing
        if not texts:
            return np.zeros((0, self.sentence_len, self.dim))
        if threads == 1:
            matrices = [self.numericalize(text, ngram) for text in texts]
        else:
            with ThreadPoolExecutor(max_workers=threads) as executor:
                matrices = list(executor.map(lambda text: self.numericalize(text, ngram), texts))

        lookups = self._lookups - before_lookups
        missing = self._missing - before_missing
        if missing:
            warnings.warn(
                f"{missing} of {lookups} token lookups were out of vocabulary",
                UserWarning,
                stacklevel=2,
            )
        logger.info("numericalized %d texts (%d lookups)", len(texts), lookups)
        return np.stack(matrices)
