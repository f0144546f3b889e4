"""Text pipeline: preprocessing stages and the Numericalizer."""

from tmpca.text.numericalize import Numericalizer, create_embedding_source, embed_token
from tmpca.text.preprocess import (
    PAD_TOKEN,
    load_stopwords,
    ngram_merge,
    pad_or_truncate,
    porter_stem,
    remove_stopwords,
    tokenize,
)

__all__ = [
    "PAD_TOKEN",
    "Numericalizer",
    "create_embedding_source",
    "embed_token",
    "load_stopwords",
    "ngram_merge",
    "pad_or_truncate",
    "porter_stem",
    "remove_stopwords",
    "tokenize",
]
