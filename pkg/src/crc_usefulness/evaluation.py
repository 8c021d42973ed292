"""Metrics, cross-validation, baselines and the cross-project matrix."""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .analysis import midranks
from .corpus import Dataset, FoldPlan
from .exceptions import FoldError
from .textmodels.pipeline import PipelineConfig, build_pipeline, predict_scores

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    @classmethod
    def from_labels(cls, y, yhat) -> "ConfusionMatrix":
        y = np.asarray(y, dtype=int)
        yhat = np.asarray(yhat, dtype=int)
        return cls(
            int(np.sum((y == 1) & (yhat == 1))),
            int(np.sum((y == 0) & (yhat == 1))),
            int(np.sum((y == 0) & (yhat == 0))),
            int(np.sum((y == 1) & (yhat == 0))),
        )

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(self.tp + other.tp, self.fp + other.fp, self.tn + other.tn, self.fn + other.fn)

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def mcc(self) -> float:
        tp, fp, tn, fn = self.tp, self.fp, self.tn, self.fn
        factors = (tp + fp, tp + fn, tn + fp, tn + fn)
        if 0 in factors:
            return 0.0
        return (tp * tn - fp * fn) / math.sqrt(math.prod(float(f) for f in factors))


def _ratio(a: float, b: float) -> float:
    return a / b if b else 0.0


@dataclass(frozen=True)
class EvalReport:
    precision_useful: float
    recall_useful: float
    precision_not_useful: float
    recall_not_useful: float
    auc: float
    ap: float
    acc: float
    f1: float
    mcc: float
    confusion: ConfusionMatrix | None = None
    degenerate: bool = False  # single-class truth: auc/ap fall back to 0.5/prevalence

    METRICS = ("precision_useful", "recall_useful", "precision_not_useful", "recall_not_useful",
               "auc", "ap", "acc", "f1", "mcc")

    def as_dict(self) -> dict[str, float]:
        return {m: getattr(self, m) for m in self.METRICS}


def threshold_metrics(cm: ConfusionMatrix) -> dict[str, float]:
    p_u = _ratio(cm.tp, cm.tp + cm.fp)
    r_u = _ratio(cm.tp, cm.tp + cm.fn)
    return {
        "precision_useful": p_u,
        "recall_useful": r_u,
        "precision_not_useful": _ratio(cm.tn, cm.tn + cm.fn),
        "recall_not_useful": _ratio(cm.tn, cm.tn + cm.fp),
        "acc": _ratio(cm.tp + cm.tn, cm.n),
        "f1": _ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn),
        "mcc": cm.mcc(),
    }


def roc_auc(y, scores) -> float:
    """P(score of a random positive > score of a random negative), ties count 1/2."""
    y = np.asarray(y, dtype=int)
    n_pos = int(y.sum())
    n_neg = len(y) - n_pos
    if n_pos == 0 or n_neg == 0:
        return 0.5
    ranks = midranks(scores)
    return float((ranks[y == 1].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def average_precision(y, scores) -> float:
    """Step sum of precision over recall increments at each distinct score threshold."""
    y = np.asarray(y, dtype=int)
    s = np.asarray(scores, dtype=float)
    n_pos = int(y.sum())
    if n_pos == 0:
        return 0.0
    order = np.argsort(-s, kind="mergesort")
    s, y = s[order], y[order]
    tp = np.cumsum(y)
    # last index of each run of equal scores
    ends = np.flatnonzero(np.r_[s[1:] != s[:-1], True])
    precision = tp[ends] / (ends + 1)
    recall = tp[ends] / n_pos
    prev = np.r_[0.0, recall[:-1]]
    return float(np.sum((recall - prev) * precision))


def metrics(y, yhat, scores) -> EvalReport:
    y = np.asarray(y, dtype=int).ravel()
    yhat = np.asarray(yhat, dtype=int).ravel()
    scores = np.asarray(scores, dtype=float).ravel()
    if not (len(y) == len(yhat) == len(scores)):
        raise ValueError(f"length mismatch: y={len(y)}, yhat={len(yhat)}, scores={len(scores)}")
    cm = ConfusionMatrix.from_labels(y, yhat)
    degenerate = len(y) == 0 or len(np.unique(y)) < 2
    prevalence = float(y.mean()) if len(y) else 0.0
    return EvalReport(
        **threshold_metrics(cm),
        auc=0.5 if degenerate else roc_auc(y, scores),
        ap=prevalence if degenerate else average_precision(y, scores),
        confusion=cm,
        degenerate=degenerate,
    )


def mean_report(reports: Sequence[EvalReport]) -> EvalReport:
    values = {m: float(np.mean([getattr(r, m) for r in reports])) for m in EvalReport.METRICS}
    return EvalReport(**values, confusion=None, degenerate=any(r.degenerate for r in reports))


# ------------------------------------------------------------------ cross-validation


@dataclass
class CVResult:
    report: EvalReport
    fold_reports: list[EvalReport]
    scores: np.ndarray  # held-out probability of useful, aligned with the dataset
    predictions: np.ndarray
    fold_vocab: list[frozenset[str]] = field(default_factory=list)


def cross_validate(
    cfg: PipelineConfig,
    ds: Dataset,
    plan: FoldPlan,
    *,
    aggregate: str = "pooled",
    **build_kwargs,
) -> CVResult:
    """Fit on k-1 folds, score the held-out fold, and report on the pooled predictions.

    ``aggregate="mean"`` averages the per-fold reports instead.
    """
    if tuple(plan.ids) != tuple(ds.ids):
        raise FoldError("fold plan was built for a different dataset")
    if aggregate not in ("pooled", "mean"):
        raise ValueError("aggregate must be 'pooled' or 'mean'")
    docs = list(ds.comments)
    y = ds.labels
    scores = np.zeros(len(ds))
    preds = np.zeros(len(ds), dtype=int)
    fold_reports, vocabs = [], []
    for fold, (train_idx, test_idx) in enumerate(plan.split()):
        if len(np.unique(y[train_idx])) < 2:
            raise FoldError(f"fold {fold}: training portion holds a single class")
        pipe = build_pipeline(cfg, **build_kwargs)
        pipe.fit([docs[i] for i in train_idx], y[train_idx])
        repr_step = pipe.steps[0][1]
        vocabs.append(frozenset(repr_step.vocab_.terms) if hasattr(repr_step, "vocab_") else frozenset())
        s = predict_scores(pipe, [docs[i] for i in test_idx])
        scores[test_idx] = s
        preds[test_idx] = (s > 0.5).astype(int)
        fold_reports.append(metrics(y[test_idx], preds[test_idx], s))
    pooled = metrics(y, preds, scores)
    report = pooled if aggregate == "pooled" else mean_report(fold_reports)
    return CVResult(report, fold_reports, scores, preds, vocabs)


def majority_baseline(ds: Dataset) -> EvalReport:
    y = ds.labels
    prior = float(y.mean()) if len(y) else 0.0
    yhat = np.full(len(y), int(prior > 0.5))
    return metrics(y, yhat, np.full(len(y), prior))


def cross_project_eval(train: Dataset, test: Dataset, cfg: PipelineConfig, **build_kwargs) -> float:
    """MCC of a pipeline fit on all of ``train`` and applied to all of ``test``."""
    pipe = build_pipeline(cfg, **build_kwargs)
    pipe.fit(list(train.comments), train.labels)
    repr_step = pipe.steps[0][1]
    Xt = list(test.comments)
    if hasattr(repr_step, "vocab_"):
        covered = repr_step.transform(Xt).getnnz(axis=1) > 0
        if not covered.any():
            log.warning("no %s comment shares a term with the %s vocabulary", test.name, train.name)
    s = predict_scores(pipe, Xt)
    return metrics(test.labels, (s > 0.5).astype(int), s).mcc


def cross_matrix(
    datasets: Mapping[str, Dataset],
    configs: Mapping[str, PipelineConfig],
    **build_kwargs,
) -> dict[tuple[str, str], float]:
    """MCC for every ordered (train, test) pair of distinct datasets."""
    out = {}
    for a in datasets:
        for b in datasets:
            if a != b:
                out[(a, b)] = cross_project_eval(datasets[a], datasets[b], configs[a], **build_kwargs)
    return out


@dataclass(frozen=True)
class DeltaRow:
    train: str
    within: float
    cross: dict[str, float]
    average: float
    delta: float


def delta_table(within: Mapping[str, float], cross: Mapping[tuple[str, str], float]) -> list[DeltaRow]:
    rows = []
    for a, w in within.items():
        cells = {b: v for (src, b), v in cross.items() if src == a}
        avg = float(np.mean(list(cells.values()))) if cells else 0.0
        rows.append(DeltaRow(a, w, cells, avg, avg - w))
    return rows


# ------------------------------------------------------------------------ rendering


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def _signed(x: float) -> str:
    return f"{x:+.3f}"


def score_table_csv(rows: Sequence[tuple[str, EvalReport]], baseline: EvalReport | None = None) -> str:
    """One row per configuration; ``delta:<metric>`` columns against ``baseline``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["config", *EvalReport.METRICS]
    if baseline is not None:
        header += [f"delta:{m}" for m in EvalReport.METRICS]
    w.writerow(header)
    for label, rep in rows:
        cells = [_fmt(getattr(rep, m)) for m in EvalReport.METRICS]
        if baseline is not None:
            cells += [_signed(getattr(rep, m) - getattr(baseline, m)) for m in EvalReport.METRICS]
        w.writerow([label, *cells])
    return buf.getvalue()


def score_table_markdown(rows: Sequence[tuple[str, EvalReport]], baseline: EvalReport | None = None) -> str:
    cols = ["P(u)", "R(u)", "P(nu)", "R(nu)", "AUC", "AP", "ACC", "F1", "MCC"]
    lines = ["| config | " + " | ".join(cols) + " |", "|---" * (len(cols) + 1) + "|"]
    if baseline is not None:
        lines.append("| baseline | " + " | ".join(_fmt(getattr(baseline, m)) for m in EvalReport.METRICS) + " |")
    for label, rep in rows:
        if baseline is None:
            cells = [_fmt(getattr(rep, m)) for m in EvalReport.METRICS]
        else:
            cells = [_signed(getattr(rep, m) - getattr(baseline, m)) for m in EvalReport.METRICS]
        lines.append(f"| {label} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def delta_table_csv(rows: Sequence[DeltaRow]) -> str:
    names = [r.train for r in rows]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["train", "within", *(f"test:{n}" for n in names), "average", "delta"])
    for r in rows:
        cells = [_fmt(r.cross[n]) if n in r.cross else "" for n in names]
        w.writerow([r.train, _fmt(r.within), *cells, _fmt(r.average), _signed(r.delta)])
    return buf.getvalue()


def delta_table_markdown(rows: Sequence[DeltaRow]) -> str:
    names = [r.train for r in rows]
    lines = ["| train \\ test | within | " + " | ".join(names) + " | average | delta |",
             "|---" * (len(names) + 4) + "|"]
    for r in rows:
        cells = [_fmt(r.cross[n]) if n in r.cross else "-" for n in names]
        lines.append(f"| {r.train} | {_fmt(r.within)} | " + " | ".join(cells) + f" | {_fmt(r.average)} | {_signed(r.delta)} |")
    return "\n".join(lines) + "\n"
