"""Significant / relevant / important feature sets and their cross-dataset composition."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .analysis import FeatureStat, pearson
from .corpus import stratified_folds
from .evaluation import ConfusionMatrix
from .exceptions import FormatError, SelectionError, SingleClassError, StratificationError
from .features.catalog import FEATURE_INDEX, FEATURE_NAMES
from .seeding import derive_seed
from .textmodels.classifiers import LogisticRegression, RandomForest

PROCEDURES = ("sig", "rel", "imp")


@dataclass(frozen=True)
class FeatureSet:
    name: str
    members: tuple[str, ...]
    origin: str = ""
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        unknown = [m for m in self.members if m not in FEATURE_INDEX]
        if unknown:
            raise ValueError(f"not catalog features: {unknown}")
        ordered = tuple(sorted(set(self.members), key=FEATURE_INDEX.__getitem__))
        object.__setattr__(self, "members", ordered)

    def __contains__(self, name: str) -> bool:
        return name in self.members

    def __len__(self) -> int:
        return len(self.members)


def _columns(matrix, names):
    X = np.asarray(matrix, dtype=float)
    if X.ndim != 2 or X.shape[1] != len(names):
        raise ValueError("matrix columns and feature names do not line up")
    return X


def significant_features(stats: Sequence[FeatureStat], alpha: float = 0.05, name: str = "sig",
                         origin: str = "") -> FeatureSet:
    return FeatureSet(name, tuple(s.feature for s in stats if s.p_mww < alpha), origin or "mann-whitney p<0.05")


def drop_collinear(matrix, labels, names: Sequence[str], threshold: float = 0.9) -> FeatureSet:
    """Greedy filter: visit features by decreasing |r to label| (catalog order on ties)
    and keep one only if its |r| with every kept feature is at most ``threshold``."""
    if not 0 < threshold < 1:
        raise ValueError("threshold must lie in (0, 1)")
    X = _columns(matrix, names)
    y = np.asarray(labels, dtype=float)
    strength = [abs(pearson(X[:, j], y)) for j in range(len(names))]
    order = sorted(range(len(names)), key=lambda j: (-strength[j], FEATURE_INDEX.get(names[j], j)))
    kept: list[int] = []
    for j in order:
        if all(abs(pearson(X[:, j], X[:, k])) <= threshold for k in kept):
            kept.append(j)
    return FeatureSet("collinear-filtered", tuple(names[j] for j in kept), f"|r|<={threshold}")


def _standardize(X_train, X_test=None):
    mu = X_train.mean(axis=0)
    sd = X_train.std(axis=0)
    sd = np.where(sd > 0, sd, 1.0)
    if X_test is None:
        return (X_train - mu) / sd
    return (X_train - mu) / sd, (X_test - mu) / sd


def _elimination_order(X, y, cols: list[int], rank_key) -> list[int]:
    """Columns in the order recursive elimination removes them (the survivor last)."""
    remaining = list(cols)
    removed = []
    while len(remaining) > 1:
        Xs = _standardize(X[:, remaining])
        coef = np.abs(LogisticRegression().fit(Xs, y).coef_)
        # smallest |coefficient| goes; on ties the feature later in catalog order goes
        worst = min(range(len(remaining)), key=lambda i: (coef[i], -rank_key(remaining[i])))
        removed.append(remaining.pop(worst))
    return removed + remaining


def _mcc(y, yhat) -> float:
    return ConfusionMatrix.from_labels(y, yhat).mcc()


@dataclass(frozen=True)
class RfecvResult:
    selected: FeatureSet
    scores: dict[int, float]  # subset size -> mean inner-fold MCC
    best_size: int


def rfecv(matrix, labels, names: Sequence[str], seed: int = 2023, folds: int = 5) -> RfecvResult:
    """Recursive feature elimination with the subset size chosen by inner-fold MCC.

    Each inner fold runs its own elimination on its training part and scores
    every subset size on its held-out part; the size with the best mean MCC
    (smallest on ties) is then applied to an elimination over all rows. When
    no size beats MCC 0 the single last survivor is kept and flagged.
    """
    X = _columns(matrix, names)
    y = np.asarray(labels, dtype=int)
    p = len(names)
    if p < 2:
        raise SelectionError("rfecv needs at least two features")
    rank_key = lambda j: FEATURE_INDEX.get(names[j], j)  # noqa: E731
    try:
        plan = stratified_folds(y, k=folds, seed=derive_seed(seed, "rfecv"))
    except StratificationError as exc:
        raise SelectionError(f"inner folds: {exc}") from exc
    per_size = np.zeros((folds, p))
    for f, (tr, te) in enumerate(plan.split()):
        try:
            order = _elimination_order(X[tr], y[tr], list(range(p)), rank_key)
            for size in range(1, p + 1):
                cols = order[p - size:]
                Xtr, Xte = _standardize(X[tr][:, cols], X[te][:, cols])
                model = LogisticRegression().fit(Xtr, y[tr])
                per_size[f, size - 1] = _mcc(y[te], model.predict(Xte))
        except SingleClassError as exc:
            raise SelectionError(f"inner fold {f}: {exc}") from exc
    mean = per_size.mean(axis=0)
    best = int(np.argmax(mean)) + 1  # argmax returns the first, i.e. smallest, maximizer
    flags: tuple[str, ...] = ()
    if mean[best - 1] <= 0:
        best, flags = 1, ("low-score",)
    order = _elimination_order(X, y, list(range(p)), rank_key)
    members = tuple(names[j] for j in order[p - best:])
    fs = FeatureSet("rel", members, "rfecv(logreg, mcc, 5 folds)", flags)
    return RfecvResult(fs, {s + 1: float(m) for s, m in enumerate(mean)}, best)


def relevant_features(matrix, labels, names: Sequence[str], seed: int = 2023, threshold: float = 0.9) -> FeatureSet:
    """Collinearity filter followed by RFECV."""
    X = _columns(matrix, names)
    kept = drop_collinear(X, labels, names, threshold).members
    idx = [list(names).index(n) for n in kept]
    if len(kept) < 2:
        return FeatureSet("rel", kept, "collinearity filter", ("too-few-for-rfecv",))
    return rfecv(X[:, idx], labels, list(kept), seed).selected


@dataclass(frozen=True)
class ImportanceResult:
    selected: FeatureSet
    importances: dict[str, float]
    threshold: float


def importance_features(matrix, labels, names: Sequence[str], seed: int = 2023,
                        importances: Mapping[str, float] | None = None, q: float = 75.0) -> ImportanceResult:
    """Features whose impurity importance reaches the ``q``-th percentile of all importances.

    The percentile interpolates linearly between order statistics. Precomputed
    ``importances`` skip the forest.
    """
    X = _columns(matrix, names)
    if importances is None:
        forest = RandomForest(n_trees=100, seed=derive_seed(seed, "importance")).fit(X, labels)
        imp = np.asarray(forest.feature_importances_, dtype=float)
    else:
        imp = np.array([float(importances[n]) for n in names])
    thr = float(np.percentile(imp, q))
    members = tuple(n for n, v in zip(names, imp) if v >= thr)
    flags = ("degenerate",) if np.all(imp == 0) else ()
    fs = FeatureSet("imp", members, f"forest importance >= p{q:g}", flags)
    return ImportanceResult(fs, dict(zip(names, imp.tolist())), thr)


def compose_feature_sets(per_dataset: Mapping[str, Mapping[str, FeatureSet]]) -> list[FeatureSet]:
    """``Pm`` = features in the P-sets of at least m datasets, plus the full catalog as ``all``."""
    datasets = list(per_dataset)
    out = []
    for proc in PROCEDURES:
        counts: dict[str, int] = {}
        for ds in datasets:
            for f in per_dataset[ds][proc].members:
                counts[f] = counts.get(f, 0) + 1
        for m in range(1, len(datasets) + 1):
            members = tuple(f for f, c in counts.items() if c >= m)
            out.append(FeatureSet(f"{proc}{m}", members, f"{proc} in >= {m} of {'/'.join(datasets)}"))
    out.append(FeatureSet("all", FEATURE_NAMES, "catalog"))
    return out


# --------------------------------------------------------------------------- files


def feature_set_text(fs: FeatureSet) -> str:
    lines = [f"# name: {fs.name}", f"# origin: {fs.origin}"]
    if fs.flags:
        lines.append(f"# flags: {','.join(fs.flags)}")
    return "\n".join([*lines, *fs.members]) + "\n"


def write_feature_set(fs: FeatureSet, path, header: str | None = None) -> None:
    text = feature_set_text(fs)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text((header.rstrip("\n") + "\n" if header else "") + text, encoding="utf-8")


def read_feature_set(path, name: str | None = None) -> FeatureSet:
    meta, members = {}, []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            key, _, value = s.lstrip("# ").partition(":")
            meta[key.strip()] = value.strip()
            continue
        if s not in FEATURE_INDEX:
            raise FormatError(f"{path}: {s!r} is not a catalog feature")
        members.append(s)
    flags = tuple(x for x in meta.get("flags", "").split(",") if x)
    return FeatureSet(name or meta.get("name") or Path(path).stem, tuple(members), meta.get("origin", ""), flags)


def selection_report_csv(per_dataset: Mapping[str, Mapping[str, FeatureSet]],
                         composed: Sequence[FeatureSet] = ()) -> str:
    """Membership table: one row per feature, an ``x`` per set that contains it."""
    columns = [(f"{ds}:{proc}", per_dataset[ds][proc]) for ds in per_dataset for proc in PROCEDURES]
    columns += [(fs.name, fs) for fs in composed if fs.name != "all"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["feature", *(c for c, _ in columns)])
    for f in FEATURE_NAMES:
        w.writerow([f, *("x" if f in fs else "" for _, fs in columns)])
    return buf.getvalue()
