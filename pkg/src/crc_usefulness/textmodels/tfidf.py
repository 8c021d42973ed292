"""Bag-of-words with smoothed TF-IDF weighting."""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ..corpus import ReviewComment
from ..exceptions import VectorizerError
from ..preprocess import CommentVariants, cached_variants, tokenize_text
from .normalize import STOPWORD_SETS, lemmatize, stem, stopwords

VARIANTS = ("comment", "code", "text", "text_clean", "text_tokens", "code_tokens")
_HAS_ALNUM = re.compile(r"[^\W_]")


@dataclass(frozen=True)
class VectorizeConfig:
    variant: str = "text_tokens"
    stopword_set: str = "none"
    stem: bool = False
    lemmatize: bool = False
    lowercase: bool = True

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        if self.stopword_set not in STOPWORD_SETS:
            raise ValueError(f"unknown stopword set {self.stopword_set!r}; expected one of {STOPWORD_SETS}")
        if self.stem and self.lemmatize:
            raise ValueError("stem and lemmatize are mutually exclusive")

    @property
    def tag(self) -> str:
        """Short label such as ``text_tokens/programming-py/stemmed``."""
        norm = "stemmed" if self.stem else "lemmatized" if self.lemmatize else "nc"
        return f"{self.variant}/{self.stopword_set}/{norm}"


def _variants(doc) -> CommentVariants:
    if isinstance(doc, CommentVariants):
        return doc
    if isinstance(doc, ReviewComment):
        return cached_variants(doc.raw)
    return cached_variants(str(doc))


def variant_tokens(doc, variant: str) -> list[str]:
    v = _variants(doc)
    if variant == "text_tokens":
        return list(v.text_tokens)
    if variant == "code_tokens":
        return list(v.code_tokens)
    return tokenize_text(getattr(v, variant))


def analyze(doc, cfg: VectorizeConfig) -> list[str]:
    """Token stream of one document under ``cfg``; punctuation-only tokens are dropped."""
    sw = stopwords(cfg.stopword_set)
    out = []
    for tok in variant_tokens(doc, cfg.variant):
        if not _HAS_ALNUM.search(tok):
            continue
        low = tok.lower()
        if low in sw:
            continue
        t = low if cfg.lowercase else tok
        if cfg.stem:
            t = stem(t)
        elif cfg.lemmatize:
            t = lemmatize(t)
        out.append(t)
    return out


@dataclass(frozen=True)
class TfidfVocab:
    terms: Mapping[str, tuple[int, int]]  # term -> (index, df)
    n_docs: int
    config: VectorizeConfig = field(default_factory=VectorizeConfig)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def index(self) -> dict[str, int]:
        return {t: i for t, (i, _) in self.terms.items()}

    @property
    def feature_names(self) -> list[str]:
        names = [""] * len(self.terms)
        for t, (i, _) in self.terms.items():
            names[i] = t
        return names

    def idf(self) -> np.ndarray:
        out = np.empty(len(self.terms))
        for _, (i, df) in self.terms.items():
            out[i] = math.log((1 + self.n_docs) / (1 + df)) + 1.0
        return out


def fit_tfidf(docs, cfg: VectorizeConfig | None = None) -> TfidfVocab:
    cfg = cfg or VectorizeConfig()
    docs = list(docs)
    if not docs:
        raise VectorizerError("cannot fit a vocabulary on zero documents")
    df: Counter[str] = Counter()
    for d in docs:
        df.update(set(analyze(d, cfg)))
    if not df:
        raise VectorizerError("every document is empty after tokenization and filtering")
    terms = {t: (i, df[t]) for i, t in enumerate(sorted(df))}
    return TfidfVocab(terms, len(docs), cfg)


def transform_tfidf(vocab: TfidfVocab, docs, idf: np.ndarray | None = None) -> sp.csr_matrix:
    """Rows of raw-count tf times idf, L2-normalized; unseen terms are ignored."""
    if isinstance(docs, (str, ReviewComment, CommentVariants)):
        docs = [docs]
    idf = vocab.idf() if idf is None else idf
    index = vocab.index
    indptr, indices, data = [0], [], []
    for d in docs:
        counts = Counter(t for t in analyze(d, vocab.config) if t in index)
        cols = sorted(index[t] for t in counts)
        by_col = {index[t]: c for t, c in counts.items()}
        vals = np.array([by_col[c] * idf[c] for c in cols], dtype=float)
        norm = math.sqrt(float(vals @ vals)) if len(vals) else 0.0
        if norm > 0:
            vals = vals / norm
        indices.extend(cols)
        data.extend(vals.tolist())
        indptr.append(len(indices))
    return sp.csr_matrix((data, indices, indptr), shape=(len(indptr) - 1, len(vocab)), dtype=float)


class BowTfidf(TransformerMixin, BaseEstimator):
    """sklearn-style wrapper around :func:`fit_tfidf` / :func:`transform_tfidf`.

    Accepts raw strings, :class:`ReviewComment` or :class:`CommentVariants`.
    """

    def __init__(self, variant="text_tokens", stopword_set="none", stem=False, lemmatize=False, lowercase=True):
        self.variant = variant
        self.stopword_set = stopword_set
        self.stem = stem
        self.lemmatize = lemmatize
        self.lowercase = lowercase

    @property
    def config(self) -> VectorizeConfig:
        return VectorizeConfig(self.variant, self.stopword_set, self.stem, self.lemmatize, self.lowercase)

    def fit(self, X, y=None):
        self.vocab_ = fit_tfidf(X, self.config)
        self.idf_ = self.vocab_.idf()
        return self

    def transform(self, X) -> sp.csr_matrix:
        check_is_fitted(self, "vocab_")
        return transform_tfidf(self.vocab_, list(X), self.idf_)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "vocab_")
        return np.array(self.vocab_.feature_names, dtype=object)

    def get_state(self) -> dict:
        return {"terms": {t: list(v) for t, v in self.vocab_.terms.items()}, "n_docs": self.vocab_.n_docs}

    def set_state(self, state: dict) -> "BowTfidf":
        terms = {t: (int(i), int(df)) for t, (i, df) in state["terms"].items()}
        self.vocab_ = TfidfVocab(terms, int(state["n_docs"]), self.config)
        self.idf_ = self.vocab_.idf()
        return self
