"""Embedding sources: deterministic hashing, pretrained tables, one-hot.

All three implement the EmbeddingSource port. Returned vectors are
read-only and shared; callers copy before mutating.
"""

from __future__ import annotations

import hashlib
import logging
import warnings
from collections.abc import Iterable
from pathlib import Path
from typing import Optional, Union

import numpy as np

from tmpca.core.errors import ConfigurationError, IngestionError, InvalidArgumentError
from tmpca.core.interfaces import EmbeddingSource
from tmpca.core.validation import validate_positive_int

logger = logging.getLogger(__name__)


class HashEmbedding(EmbeddingSource):
    """Pseudorandom unit vectors keyed by (seed, token bytes).

    The token's UTF-8 bytes are hashed with keyed BLAKE2b; the digest seeds a
    numpy PCG64 generator whose standard-normal draw is normalized to unit
    length. Identical tokens map to identical vectors on every run and
    platform, and distinct tokens collide only if their 128-bit digests do.

    Example:
        >>> source = HashEmbedding(dim=8, seed=0)
        >>> bool(np.isclose(np.linalg.norm(source.lookup("cat")), 1.0))
        True
    """

    def __init__(self, dim: int, seed: int = 0) -> None:
        """Initialize the embedder.

        Args:
            dim: Embedding dimension D.
            seed: Non-negative key mixed into every token hash.

        Raises:
            InvalidArgumentError: If dim is not positive or seed is negative.
        """
        self._dim = validate_positive_int(dim, "dim")
        if seed < 0 or seed >= 2**64:
            raise InvalidArgumentError(f"hash seed must be in [0, 2**64), got {seed}")
        self.seed = seed
        self._key = seed.to_bytes(8, "little")
        self._cache: dict[str, np.ndarray] = {}

    def __repr__(self) -> str:
        return f"HashEmbedding(dim={self._dim}, seed={self.seed})"

    @property
    def dim(self) -> int:
        """Embedding dimension D."""
        return self._dim

    def lookup(self, token: str) -> np.ndarray:
        """Return the token's unit vector (never None)."""
        cached = self._cache.get(token)
        if cached is not None:
            return cached
        digest = hashlib.blake2b(
            token.encode("utf-8", errors="surrogatepass"), digest_size=16, key=self._key
        ).digest()
        rng = np.random.Generator(np.random.PCG64(np.frombuffer(digest, dtype="<u4")))
        vector = rng.standard_normal(self._dim)
        vector /= np.linalg.norm(vector)
        vector.setflags(write=False)
        self._cache[token] = vector
        return vector


class TableEmbedding(EmbeddingSource):
    """Exact lookup in a pretrained token → vector table."""

    def __init__(self, vectors: dict[str, np.ndarray], dim: int) -> None:
        """Initialize from an already-validated mapping.

        Args:
            vectors: Token to length-dim vector.
            dim: Embedding dimension D.
        """
        self._dim = validate_positive_int(dim, "dim")
        self._vectors = vectors

    def __repr__(self) -> str:
        return f"TableEmbedding(size={len(self._vectors)}, dim={self._dim})"

    def __len__(self) -> int:
        return len(self._vectors)

    def __contains__(self, token: object) -> bool:
        return token in self._vectors

    @property
    def dim(self) -> int:
        """Embedding dimension D."""
        return self._dim

    def lookup(self, token: str) -> Optional[np.ndarray]:
        """Return the stored vector, or None for an out-of-vocabulary token."""
        return self._vectors.get(token)


class OneHotEmbedding(EmbeddingSource):
    """Basis vector e_i for the i-th of the first dim vocabulary tokens."""

    def __init__(self, vocabulary: Iterable[str], dim: int) -> None:
        """Initialize from an ordered vocabulary.

        Args:
            vocabulary: Tokens in priority order; only the first dim are kept.
            dim: Embedding dimension D.
        """
        self._dim = validate_positive_int(dim, "dim")
        self._index: dict[str, int] = {}
        for token in vocabulary:
            if len(self._index) == self._dim:
                break
            self._index.setdefault(token, len(self._index))
        self._basis = np.eye(self._dim)
        self._basis.setflags(write=False)

    def __repr__(self) -> str:
        return f"OneHotEmbedding(size={len(self._index)}, dim={self._dim})"

    @property
    def dim(self) -> int:
        """Embedding dimension D."""
        return self._dim

    def lookup(self, token: str) -> Optional[np.ndarray]:
        """Return the token's basis vector, or None if outside the vocabulary."""
        index = self._index.get(token)
        return None if index is None else self._basis[index]


def load_embedding_table(path: Union[str, Path]) -> TableEmbedding:
    """Load a plain-text embedding table.

    Format: a header line "<vocab_size> <dim>", then one line per token:
    the token followed by dim space-separated floats. Duplicate tokens keep
    the last vector (a warning reports how many were overridden).

    Args:
        path: Table file (UTF-8; invalid sequences are replaced).

    Returns:
        TableEmbedding with the header's dimension.

    Raises:
        ConfigurationError: If the file does not exist.
        IngestionError: On a malformed header, a wrong-width line or a
            non-numeric value, naming the line.
    """
    table_path = Path(path)
    if not table_path.is_file():
        raise ConfigurationError(f"embedding table not found: {table_path}")

    vectors: dict[str, np.ndarray] = {}
    duplicates = 0
    with open(table_path, encoding="utf-8", errors="replace") as handle:
        header = handle.readline().split()
        try:
            declared_size, dim = (int(field) for field in header)
        except ValueError as exc:
            raise IngestionError(
                "header must be '<vocab_size> <dim>'", table_path, line_number=1
            ) from exc
        if dim < 1:
            raise IngestionError(f"dimension must be positive, got {dim}", table_path, 1)

        for line_number, line in enumerate(handle, start=2):
            parts = line.split()
            if not parts:
                continue
            token, values = parts[0], parts[1:]
            if len(values) != dim:
                raise IngestionError(
                    f"token {token!r} has {len(values)} values, header declares {dim}",
                    table_path,
                    line_number,
                )
            try:
                vector = np.array([float(value) for value in values])
            except ValueError as exc:
                raise IngestionError(f"non-numeric value: {exc}", table_path, line_number) from exc
            if not np.all(np.isfinite(vector)):
                raise IngestionError("non-finite value", table_path, line_number)
            vector.setflags(write=False)
            if token in vectors:
                duplicates += 1
            vectors[token] = vector

    if duplicates:
        warnings.warn(
            f"{table_path}: {duplicates} duplicate tokens, last occurrence kept",
            UserWarning,
            stacklevel=2,
        )
    if declared_size != len(vectors) + duplicates:
        logger.warning(
            "%s: header declares %d entries, file has %d",
            table_path,
            declared_size,
            len(vectors) + duplicates,
        )
    return TableEmbedding(vectors, dim)


def load_vocabulary(path: Union[str, Path]) -> list[str]:
    """Read a one-token-per-line vocabulary file (blank lines skipped).

    Raises:
        ConfigurationError: If the file does not exist.
    """
    vocab_path = Path(path)
    if not vocab_path.is_file():
        raise ConfigurationError(f"vocabulary file not found: {vocab_path}")
    with open(vocab_path, encoding="utf-8", errors="replace") as handle:
        return [line.strip() for line in handle if line.strip()]
