"""Per-comment feature computation and the feature matrix."""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ..corpus import Dataset, ReviewComment
from ..exceptions import FormatError
from ..preprocess import CommentVariants, cached_variants, split_sentences
from ..textmodels.normalize import programming_keywords, stopwords
from . import pos
from .catalog import (
    FEATURE_NAMES,
    INGESTED,
    INGESTED_PROV,
    MISSING_PROV,
    FeatureVector,
)
from .external import ExternalScores
from .lexicons import KeywordLexicon, default_lexicons, lexicon_density
from .readability import readability_fk
from .sentiment import polarity_subjectivity

TENTATIVE = frozenset({"probable", "probably", "possible", "possibly", "perhaps", "like"})
CONFIRMATORY = re.compile(r"\b(?:done|fixed|removed)\b", re.I)
GRATITUDE = re.compile(r"\bthank(?:s|\s+you)\b", re.I)

_IS_WORD = re.compile(r"[^\W_]")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

_POS_FEATURES = {
    "num-verb": pos.VERB,
    "num-determinants": pos.DET,
    "num-nouns": pos.NOUN,
    "num-adj": pos.ADJ,
    "num-adverb": pos.ADV,
    "num-interjections": pos.INTJ,
    "num-propernouns": pos.PROPN,
}


def _words(v: CommentVariants) -> list[str]:
    return [t for t in v.text_tokens if _IS_WORD.search(t)]


def _div(a: float, b: float) -> float:
    return a / b if b else 0.0


def syntactic_features(v: CommentVariants) -> dict[str, float]:
    """Counts and per-sentence averages over ``text_clean``; empty input gives zeros."""
    words = _words(v)
    sentences = split_sentences(v.text_clean)
    sw = stopwords("english-nltk")
    n_words, n_sent = len(words), len(sentences)
    n_chars = sum(len(_IS_WORD.findall(w)) for w in words)
    n_stop = sum(w.lower() in sw for w in words)
    n_punct = len(v.text_tokens) - n_words
    tags = pos.pos_tag(list(v.text_tokens))
    out = {
        "word-count": n_words,
        "num-chars": n_chars,
        "num-sent": n_sent,
        "avg-words": _div(n_words, n_sent),
        "avg-chars": _div(n_chars, n_words),
        "avg-stopwords": _div(n_stop, n_sent),
        "stop-word-ratio": _div(n_stop, n_words),
        "avg-punct": _div(n_punct, n_sent),
        "num-Qmark": v.text_clean.count("?"),
        "num-exclamation": v.text_clean.count("!"),
        "question-ratio": _div(sum(s.endswith("?") for s in sentences), n_sent),
        "rd-text": readability_fk(v.text_clean),
    }
    for name, tag in _POS_FEATURES.items():
        out[name] = sum(t == tag for t in tags)
    return out


def count_programming_words(comment: str) -> int:
    """Identifier-like keywords matched as whole tokens; symbolic ones (``#include``, ``->``) as substrings."""
    keywords = programming_keywords()
    low = comment.lower()
    n = sum(tok in keywords for tok in _IDENT.findall(low))
    n += sum(low.count(k) for k in _symbolic_keywords())
    return n


_SYMBOLIC: tuple[str, ...] | None = None


def _symbolic_keywords() -> tuple[str, ...]:
    global _SYMBOLIC
    if _SYMBOLIC is None:
        _SYMBOLIC = tuple(sorted(k for k in programming_keywords() if not _IDENT.fullmatch(k)))
    return _SYMBOLIC


def code_features(v: CommentVariants) -> dict[str, float]:
    n_code, n_text = len(v.code_tokens), len(v.text_tokens)
    return {
        "prog-words": count_programming_words(v.comment),
        "code-word-ratio": _div(n_code, n_code + n_text),
        "has-snippet": int(v.has_backtick),
        "has-out-snippet": int(v.has_bare_code),
    }


def voice_lexical_features(v: CommentVariants) -> dict[str, float]:
    words = [w.lower() for w in _words(v)]
    polarity, subjectivity = polarity_subjectivity(v.text_tokens)
    return {
        "num-tentative": sum(w in TENTATIVE for w in words),
        # the phrase flags look at the whole comment, not only its prose
        "is-confirmatory": int(bool(CONFIRMATORY.search(v.comment))),
        "gratitude": int(bool(GRATITUDE.search(v.comment))),
        "polarity": polarity,
        "subjectivity": subjectivity,
    }


def jargon_features(v: CommentVariants, lexicons: Mapping[str, KeywordLexicon]) -> dict[str, float]:
    words = [w.lower() for w in _words(v)]
    return {name: lexicon_density(words, lex) for name, lex in lexicons.items()}


def featurize(
    c: ReviewComment | str,
    lexicons: Mapping[str, KeywordLexicon] | None = None,
    ext: ExternalScores | None = None,
) -> FeatureVector:
    if isinstance(c, ReviewComment):
        raw, cid = c.raw, c.id
    else:
        raw, cid = str(c), None
    lexicons = default_lexicons() if lexicons is None else lexicons
    v = cached_variants(raw)
    fv = FeatureVector()
    fv.update(syntactic_features(v))
    fv.update(code_features(v))
    fv.update(voice_lexical_features(v))
    fv.update(jargon_features(v, lexicons))
    scores = ext.get(cid) if ext is not None else {}
    for name in INGESTED:
        if name in scores:
            fv.set(name, scores[name], INGESTED_PROV)
        else:
            fv.set(name, 0.0, MISSING_PROV)
    for name in FEATURE_NAMES:
        if name not in fv.values:  # a jargon lexicon left out of ``lexicons``
            fv.set(name, 0.0, MISSING_PROV)
    return fv


# ------------------------------------------------------------------- feature matrix


@dataclass
class FeatureMatrix:
    ids: list[str]
    labels: np.ndarray
    values: np.ndarray  # (n, 48), catalog order
    provenance: np.ndarray  # (n, 48) of provenance strings

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def feature_names(self) -> tuple[str, ...]:
        return FEATURE_NAMES

    def available_features(self) -> list[str]:
        """Features with at least one non-missing value."""
        keep = (self.provenance != MISSING_PROV).any(axis=0) if len(self) else np.zeros(len(FEATURE_NAMES), bool)
        return [f for f, k in zip(FEATURE_NAMES, keep) if k]

    def columns(self, names: Sequence[str]) -> np.ndarray:
        idx = [FEATURE_NAMES.index(n) for n in names]
        return self.values[:, idx]

    def subset(self, rows) -> "FeatureMatrix":
        rows = np.asarray(rows, dtype=int)
        return FeatureMatrix([self.ids[i] for i in rows], self.labels[rows], self.values[rows], self.provenance[rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "label", *FEATURE_NAMES, *(f"prov:{f}" for f in FEATURE_NAMES)])
        for i, cid in enumerate(self.ids):
            w.writerow([cid, int(self.labels[i]), *(repr(float(x)) for x in self.values[i]), *self.provenance[i]])
        return buf.getvalue()

    def write_csv(self, path, header: str | None = None) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            if header:
                fh.write(header.rstrip("\n") + "\n")
            fh.write(self.to_csv())

    @classmethod
    def read_csv(cls, path) -> "FeatureMatrix":
        lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if not ln.startswith("# ")]
        reader = csv.reader(lines)
        header = next(reader, None)
        expected = ["id", "label", *FEATURE_NAMES, *(f"prov:{f}" for f in FEATURE_NAMES)]
        if header != expected:
            raise FormatError(f"{path}: not a feature matrix (unexpected header)")
        ids, labels, values, prov = [], [], [], []
        k = len(FEATURE_NAMES)
        for row_no, row in enumerate(reader, start=1):
            if len(row) != 2 + 2 * k:
                raise FormatError(f"{path}: row {row_no} has {len(row)} fields")
            ids.append(row[0])
            labels.append(int(row[1]))
            values.append([float(x) for x in row[2:2 + k]])
            prov.append(row[2 + k:])
        return cls(
            ids,
            np.array(labels, dtype=int),
            np.array(values, dtype=float).reshape(-1, k),
            np.array(prov, dtype=object).reshape(-1, k),
        )


def build_feature_matrix(
    comments: Dataset | Iterable[ReviewComment],
    lexicons: Mapping[str, KeywordLexicon] | None = None,
    ext: ExternalScores | None = None,
) -> FeatureMatrix:
    lexicons = default_lexicons() if lexicons is None else lexicons
    comments = list(comments)
    vectors = [featurize(c, lexicons, ext) for c in comments]
    k = len(FEATURE_NAMES)
    return FeatureMatrix(
        [c.id for c in comments],
        np.array([c.label for c in comments], dtype=int),
        np.array([fv.as_array() for fv in vectors], dtype=float).reshape(-1, k),
        np.array([fv.provenance_list() for fv in vectors], dtype=object).reshape(-1, k),
    )


class FeatureExtractor(TransformerMixin, BaseEstimator):
    """Stateless transformer from comments (or raw strings) to catalog columns.

    ``features`` restricts the output columns, in the given order. Comments
    found in ``precomputed`` (one FeatureMatrix, or a mapping from dataset
    name to FeatureMatrix for mixed-dataset input) reuse that row instead of
    being featurized again.
    """

    def __init__(self, features: Sequence[str] | None = None, lexicons=None,
                 external: ExternalScores | None = None, precomputed: FeatureMatrix | Mapping[str, FeatureMatrix] | None = None):
        self.features = features
        self.lexicons = lexicons
        self.external = external
        self.precomputed = precomputed

    def fit(self, X=None, y=None):
        names = list(FEATURE_NAMES if self.features is None else self.features)
        unknown = [n for n in names if n not in FEATURE_NAMES]
        if unknown:
            raise ValueError(f"unknown features: {unknown}")
        self.feature_names_out_ = np.array(names, dtype=object)
        self.n_features_out_ = len(names)
        self._rows = {}
        if isinstance(self.precomputed, FeatureMatrix):
            self._rows = {(None, cid): (self.precomputed, i) for i, cid in enumerate(self.precomputed.ids)}
        elif self.precomputed is not None:  # dataset name -> FeatureMatrix
            for ds, fm in self.precomputed.items():
                self._rows.update({(ds, cid): (fm, i) for i, cid in enumerate(fm.ids)})
        return self

    def _lookup(self, c):
        cid = getattr(c, "id", None)
        if cid is None:
            return None
        hit = self._rows.get((None, cid)) or self._rows.get((getattr(c, "dataset", None), cid))
        return None if hit is None else hit[0].values[hit[1]]

    def transform(self, X) -> np.ndarray:
        lexicons = None
        idx = [FEATURE_NAMES.index(n) for n in self.feature_names_out_]
        rows = []
        for c in X:
            row = self._lookup(c)
            if row is not None:
                rows.append(row[idx])
                continue
            if lexicons is None:
                lexicons = default_lexicons() if self.lexicons is None else self.lexicons
            rows.append(featurize(c, lexicons, self.external).as_array()[idx])
        return np.array(rows, dtype=float).reshape(-1, len(idx))

    def get_feature_names_out(self, input_features=None):
        return self.feature_names_out_
