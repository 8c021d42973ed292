"""Linear SHAP attributions in log-odds space and top-token summaries."""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .exceptions import UnsupportedModelError
from .textmodels.classifiers import LogisticRegression

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Attribution:
    base: float
    contributions: np.ndarray

    @property
    def total(self) -> float:
        return float(self.base + self.contributions.sum())


def _require_linear(model) -> None:
    if not isinstance(model, LogisticRegression):
        raise UnsupportedModelError(f"linear SHAP needs a logistic-regression model, got {type(model).__name__}")


def _dense_row(x) -> np.ndarray:
    if sp.issparse(x):
        return np.asarray(x.todense()).ravel()
    return np.asarray(x, dtype=float).ravel()


def linear_shap(model, background_mean, x) -> Attribution:
    """phi_i = w_i (x_i - mu_i); base = w . mu + b.

    Exact for a linear log-odds model with independent features.
    """
    _require_linear(model)
    w = model.coef_
    mu = _dense_row(background_mean)
    x = _dense_row(x)
    if not (len(w) == len(mu) == len(x)):
        raise ValueError(f"dimension mismatch: weights {len(w)}, background {len(mu)}, instance {len(x)}")
    return Attribution(float(w @ mu + model.intercept_), w * (x - mu))


def background_mean(X) -> np.ndarray:
    if sp.issparse(X):
        return np.asarray(X.mean(axis=0)).ravel()
    return np.asarray(X, dtype=float).mean(axis=0)


@dataclass(frozen=True)
class TopTokens:
    positive: list[tuple[str, float]]
    negative: list[tuple[str, float]]


def mean_contributions(model, mu, X) -> np.ndarray:
    """Mean phi per feature over the rows of ``X``; linearity makes this w (mean(X) - mu)."""
    _require_linear(model)
    return model.coef_ * (background_mean(X) - _dense_row(mu))


def top_tokens(pipe, background_docs, docs, k: int = 10) -> TopTokens:
    """Tokens with the largest positive and negative mean contribution over ``docs``.

    ``pipe`` is a fitted BoW-TFIDF + logistic-regression pipeline; the
    background mean is taken over ``background_docs`` (usually its training set).
    """
    vectorizer, model = pipe.steps[0][1], pipe.steps[-1][1]
    _require_linear(model)
    if not hasattr(vectorizer, "vocab_"):
        raise UnsupportedModelError("top_tokens needs a bag-of-words representation")
    if k <= 0:
        return TopTokens([], [])
    X = vectorizer.transform(list(docs))
    if X.nnz == 0:
        log.warning("no document shares a term with the model vocabulary")
        return TopTokens([], [])
    mu = background_mean(vectorizer.transform(list(background_docs)))
    means = mean_contributions(model, mu, X)
    names = vectorizer.vocab_.feature_names
    order = sorted(range(len(names)), key=lambda j: (-means[j], names[j]))
    pos = [(names[j], float(means[j])) for j in order[:k] if means[j] > 0]
    neg_order = sorted(range(len(names)), key=lambda j: (means[j], names[j]))
    neg = [(names[j], float(means[j])) for j in neg_order[:k] if means[j] < 0]
    return TopTokens(pos, neg)


def top_tokens_csv(t: TopTokens) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["token", "mean_contribution", "direction"])
    for tok, v in t.positive:
        w.writerow([tok, f"{v:.6g}", "useful"])
    for tok, v in t.negative:
        w.writerow([tok, f"{v:.6g}", "not-useful"])
    return buf.getvalue()


def top_tokens_markdown(t: TopTokens, title: str = "Top tokens") -> str:
    lines = [f"## {title}", "", "| rank | toward useful | mean | toward not-useful | mean |", "|---|---|---|---|---|"]
    for i in range(max(len(t.positive), len(t.negative))):
        p = t.positive[i] if i < len(t.positive) else ("", None)
        n = t.negative[i] if i < len(t.negative) else ("", None)
        fmt = lambda v: "" if v is None else f"{v:+.4f}"  # noqa: E731
        lines.append(f"| {i + 1} | {p[0]} | {fmt(p[1])} | {n[0]} | {fmt(n[1])} |")
    return "\n".join(lines) + "\n"
