"""word2vec-text embedding tables and mean-pooled comment vectors."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ..exceptions import FormatError
from ..preprocess import CommentVariants
from .tfidf import _variants

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EmbeddingTable:
    dim: int
    vectors: dict[str, np.ndarray]

    def __post_init__(self):
        if self.dim <= 0:
            raise FormatError("embedding dimension must be positive")

    def __len__(self) -> int:
        return len(self.vectors)

    def mean(self, tokens) -> np.ndarray:
        """Mean of the known token vectors; zeros when none is known."""
        rows = [self.vectors[t] for t in tokens if t in self.vectors]
        if not rows:
            return np.zeros(self.dim)
        return np.mean(rows, axis=0)


def load_embeddings(path, lowercase: bool = False) -> EmbeddingTable:
    """Parse the word2vec text format: a ``vocab_size dim`` header, then one token per line."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise FormatError(f"{path}:1: expected header 'vocab_size dim'")
        try:
            size, dim = int(header[0]), int(header[1])
        except ValueError:
            raise FormatError(f"{path}:1: header values must be integers") from None
        if dim <= 0:
            raise FormatError(f"{path}:1: dimension must be positive")
        vectors: dict[str, np.ndarray] = {}
        for lineno, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").rstrip().split(" ")
            if not parts or parts == [""]:
                continue
            token, values = parts[0], parts[1:]
            if len(values) != dim:
                raise FormatError(f"{path}:{lineno}: {len(values)} values for dimension {dim}")
            try:
                vec = np.array([float(x) for x in values])
            except ValueError:
                raise FormatError(f"{path}:{lineno}: non-numeric vector component") from None
            token = token.lower() if lowercase else token
            if token in vectors:
                log.warning("%s:%d: duplicate token %r, keeping the later vector", path, lineno, token)
            vectors[token] = vec
    if not vectors:
        raise FormatError(f"{path}: empty vocabulary")
    if size != len(vectors):
        log.warning("%s: header announces %d tokens, found %d", path, size, len(vectors))
    return EmbeddingTable(dim, vectors)


def embed_comment(v: CommentVariants, text_table: EmbeddingTable, code_table: EmbeddingTable) -> np.ndarray:
    """[mean text-token vector | mean code-token vector]."""
    return np.concatenate([text_table.mean(v.text_tokens), code_table.mean(v.code_tokens)])


class EmbeddingVectorizer(TransformerMixin, BaseEstimator):
    """Stateless transformer around :func:`embed_comment`.

    Text tokens are looked up verbatim first, then lowercased.
    """

    def __init__(self, text_table: EmbeddingTable | None = None, code_table: EmbeddingTable | None = None):
        self.text_table = text_table
        self.code_table = code_table

    def fit(self, X=None, y=None):
        if self.text_table is None or self.code_table is None:
            raise ValueError("EmbeddingVectorizer needs both a text and a code table")
        self.n_features_out_ = self.text_table.dim + self.code_table.dim
        return self

    def transform(self, X) -> np.ndarray:
        rows = []
        for doc in X:
            v = _variants(doc)
            text = [t if t in self.text_table.vectors else t.lower() for t in v.text_tokens]
            rows.append(np.concatenate([self.text_table.mean(text), self.code_table.mean(v.code_tokens)]))
        return np.array(rows, dtype=float).reshape(-1, self.text_table.dim + self.code_table.dim)
