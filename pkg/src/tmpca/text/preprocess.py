"""Text preprocessing stages.

Each stage is a pure function so records can be processed in parallel:

    tokenize -> remove_stopwords -> porter_stem -> ngram_merge -> pad_or_truncate

Stemming delegates to NLTK's Porter stemmer in its original-algorithm mode.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from importlib import resources
from pathlib import Path
from typing import Optional, TypeVar, Union

from nltk.stem.porter import PorterStemmer

from tmpca.core.errors import ConfigurationError, InvalidArgumentError
from tmpca.core.validation import validate_positive_int

PAD_TOKEN = "<pad>"
"""Padding symbol; cannot collide with a token since tokens are alphanumeric."""

Gram = tuple[str, ...]
PAD_GRAM: Gram = (PAD_TOKEN,)

# Maximal runs of letters or digits (\w minus underscore).
_TOKEN_PATTERN = re.compile(r"[^\W_]+")

_STEMMER = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)

T = TypeVar("T")


def tokenize(text: Union[str, bytes], lowercase: bool = True) -> list[str]:
    """Split text on every maximal run of non-alphanumeric characters.

    Args:
        text: Input text; bytes are decoded as UTF-8 with replacement.
        lowercase: Lowercase the tokens.

    Returns:
        Non-empty tokens in order.

    Examples:
        >>> tokenize("Free entry!! Call now.")
        ['free', 'entry', 'call', 'now']
        >>> tokenize("don't stop")
        ['don', 't', 'stop']
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    if lowercase:
        text = text.lower()
    return _TOKEN_PATTERN.findall(text)


def load_stopwords(path: Optional[Union[str, Path]] = None) -> frozenset[str]:
    """Load a stop-word list: one lowercase word per line, '#' starts a comment.

    Args:
        path: List file; None loads the bundled English list.

    Raises:
        ConfigurationError: If the file does not exist.
    """
    if path is None:
        bundled = resources.files("tmpca").joinpath("data").joinpath("stopwords_en.txt")
        content = bundled.read_text("utf-8")
    else:
        stop_path = Path(path)
        if not stop_path.is_file():
            raise ConfigurationError(f"stop-word file not found: {stop_path}")
        content = stop_path.read_text(encoding="utf-8", errors="replace")
    words = (line.split("#", 1)[0].strip().lower() for line in content.splitlines())
    return frozenset(word for word in words if word)


def remove_stopwords(tokens: Iterable[str], stopset: frozenset[str]) -> list[str]:
    """Drop stop words, preserving order.

    Examples:
        >>> remove_stopwords(["the", "cat", "sat"], frozenset({"the"}))
        ['cat', 'sat']
    """
    return [token for token in tokens if token not in stopset]


def porter_stem(token: str) -> str:
    """Stem a lowercase alphabetic token with the classic Porter algorithm.

    Tokens that are not lowercase ASCII letters are returned unchanged.

    Examples:
        >>> porter_stem("caresses"), porter_stem("ponies"), porter_stem("run")
        ('caress', 'poni', 'run')
    """
    if not (token.isascii() and token.isalpha() and token.islower()):
        return token
    return str(_STEMMER.stem(token))


def ngram_merge(tokens: Sequence[str], n: int) -> list[Gram]:
    """Group tokens into overlapping windows of n.

    A sequence shorter than n becomes a single gram holding all of it, so
    the result always has max(len(tokens) − n + 1, 1) grams.

    Raises:
        InvalidArgumentError: If n < 1.

    Examples:
        >>> ngram_merge(["1", "2", "3", "4"], 2)
        [('1', '2'), ('2', '3'), ('3', '4')]
        >>> ngram_merge(["a"], 3)
        [('a',)]
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InvalidArgumentError(f"n-gram size must be at least 1, got {n!r}")
    if len(tokens) < n:
        return [tuple(tokens)]
    return [tuple(tokens[start : start + n]) for start in range(len(tokens) - n + 1)]


def pad_or_truncate(units: Sequence[T], target_len: int, pad: T) -> list[T]:
    """Fit a sequence to exactly target_len items.

    Shorter sequences get trailing pad items; longer ones keep their prefix.

    Examples:
        >>> pad_or_truncate(["a", "b", "c"], 4, "<pad>")
        ['a', 'b', 'c', '<pad>']
        >>> pad_or_truncate(["a", "b", "c", "d", "e"], 4, "<pad>")
        ['a', 'b', 'c', 'd']
    """
    target_len = validate_positive_int(target_len, "target_len")
    fitted = list(units[:target_len])
    fitted.extend([pad] * (target_len - len(fitted)))
    return fitted
