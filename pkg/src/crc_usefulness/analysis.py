"""Rank tests, effect sizes and correlations of features against usefulness."""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .exceptions import DegenerateTestError, UndefinedEffectError

EXACT_MAX_N = 12


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def midranks(x) -> np.ndarray:
    """1-based ranks with ties replaced by their average rank."""
    x = np.asarray(x, dtype=float)
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(len(x), dtype=float)
    sx = x[order]
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and sx[j + 1] == sx[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def pearson(xs, ys) -> float:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"pearson needs two equal-length vectors, got {x.shape} and {y.shape}")
    if len(x) < 2:
        raise ValueError("pearson needs at least two points")
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        return 0.0
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def _u_distribution(n1: int, n2: int) -> np.ndarray:
    """Counts of each U value over all C(n1+n2, n1) orderings (no ties)."""
    # f[i][j][u]: number of arrangements of i a's and j b's with statistic u
    f = [[None] * (n2 + 1) for _ in range(n1 + 1)]
    for i in range(n1 + 1):
        for j in range(n2 + 1):
            if i == 0 or j == 0:
                d = np.zeros(i * j + 1)
                d[0] = 1
            else:
                d = np.zeros(i * j + 1)
                # largest element is an a (beats all j b's) or a b
                d[j:] += f[i - 1][j]
                d[: (i * (j - 1)) + 1] += f[i][j - 1]
            f[i][j] = d
    return f[n1][n2]


def mann_whitney_u(a, b) -> tuple[float, float]:
    """U statistic of ``a`` and its two-sided p-value."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n1, n2 = len(a), len(b)
    if n1 == 0 or n2 == 0:
        raise ValueError("mann_whitney_u needs two non-empty groups")
    pooled = np.concatenate([a, b])
    ranks = midranks(pooled)
    u = float(ranks[:n1].sum() - n1 * (n1 + 1) / 2.0)
    has_ties = len(np.unique(pooled)) < len(pooled)
    if n1 + n2 <= EXACT_MAX_N and not has_ties:
        dist = _u_distribution(n1, n2)
        total = dist.sum()
        k = int(round(u))
        lower = dist[: k + 1].sum() / total
        upper = dist[k:].sum() / total
        return u, float(min(1.0, 2.0 * min(lower, upper)))
    n = n1 + n2
    mu = n1 * n2 / 2.0
    _, counts = np.unique(pooled, return_counts=True)
    tie_term = float((counts**3 - counts).sum())
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var <= 0:
        return u, 1.0
    z = max(0.0, abs(u - mu) - 0.5) / math.sqrt(var)
    return u, float(min(1.0, 2.0 * _normal_sf(z)))


def cohens_d(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n1, n2 = len(a), len(b)
    if n1 < 2 or n2 < 2:
        raise ValueError("cohens_d needs at least two values per group")
    pooled = ((n1 - 1) * a.var(ddof=1) + (n2 - 1) * b.var(ddof=1)) / (n1 + n2 - 2)
    if pooled <= 0:
        raise UndefinedEffectError("pooled standard deviation is zero")
    return float((a.mean() - b.mean()) / math.sqrt(pooled))


def wilcoxon_signed_rank(pairs) -> tuple[float, float]:
    """W+ (sum of ranks of positive differences) and its two-sided p-value.

    Zero differences are dropped. With at most 12 remaining pairs the p-value
    comes from enumerating every sign pattern over the midranks; otherwise
    from the normal approximation with tie and continuity corrections.
    """
    d = np.array([float(x) - float(y) for x, y in pairs])
    d = d[d != 0]
    n = len(d)
    if n == 0:
        raise DegenerateTestError("all paired differences are zero")
    ranks = midranks(np.abs(d))
    w = float(ranks[d > 0].sum())
    center = n * (n + 1) / 4.0
    if n <= EXACT_MAX_N:
        # ranks are multiples of 0.5, so work with integer doubled ranks
        r2 = np.rint(ranks * 2).astype(int)
        top = int(r2.sum())
        dist = np.zeros(top + 1)
        dist[0] = 1
        for r in r2:
            shifted = np.zeros_like(dist)
            shifted[r:] = dist[: top + 1 - r]
            dist = dist + shifted
        dev = abs(2 * w - 2 * center)
        vals = np.arange(top + 1)
        extreme = np.abs(vals - 2 * center) >= dev - 1e-9
        return w, float(min(1.0, dist[extreme].sum() / dist.sum()))
    _, counts = np.unique(np.abs(d), return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24.0 - float((counts**3 - counts).sum()) / 48.0
    z = max(0.0, abs(w - center) - 0.5) / math.sqrt(var)
    return w, float(min(1.0, 2.0 * _normal_sf(z)))


# ------------------------------------------------------------------ table builders


@dataclass(frozen=True)
class FeatureStat:
    feature: str
    p_mww: float
    d: float
    r: float
    d_undefined: bool = False


@dataclass(frozen=True)
class CrossProjectStat:
    pair: tuple[str, str]
    p_wilcoxon: float
    d: float


def within_project_analysis(matrix, labels, feature_names: Sequence[str]) -> list[FeatureStat]:
    """One FeatureStat per column: MWW p (useful vs not), Cohen's D and r against the label."""
    X = np.asarray(matrix, dtype=float)
    y = np.asarray(labels, dtype=int)
    if X.ndim != 2 or X.shape[0] != len(y) or X.shape[1] != len(feature_names):
        raise ValueError("matrix, labels and feature names do not line up")
    if len(np.unique(y)) < 2:
        raise ValueError("within-project analysis needs both classes")
    useful, other = X[y == 1], X[y == 0]
    out = []
    for j, name in enumerate(feature_names):
        _, p = mann_whitney_u(useful[:, j], other[:, j])
        try:
            d, undefined = cohens_d(useful[:, j], other[:, j]), False
        except (UndefinedEffectError, ValueError):
            d, undefined = 0.0, True
        out.append(FeatureStat(name, p, d, pearson(X[:, j], y), undefined))
    return out


def cross_project_analysis(stats_by_dataset: Mapping[str, Sequence[FeatureStat]]) -> list[CrossProjectStat]:
    """Paired comparison of every two datasets' correlation vectors."""
    names = list(stats_by_dataset)
    ref = [s.feature for s in stats_by_dataset[names[0]]] if names else []
    for name in names:
        if [s.feature for s in stats_by_dataset[name]] != ref:
            raise ValueError(f"feature list of {name!r} differs from {names[0]!r}")
    out = []
    for a, b in itertools.combinations(sorted(names), 2):
        ra = np.array([s.r for s in stats_by_dataset[a]])
        rb = np.array([s.r for s in stats_by_dataset[b]])
        try:
            _, p = wilcoxon_signed_rank(zip(ra, rb))
        except DegenerateTestError:
            p = 1.0
        try:
            d = cohens_d(ra, rb)
        except UndefinedEffectError:
            d = 0.0
        out.append(CrossProjectStat((a, b), p, d))
    return out


def feature_stats_csv(stats_by_dataset: Mapping[str, Sequence[FeatureStat]]) -> str:
    """Wide table, one row per feature and (p, d, r) columns per dataset."""
    names = list(stats_by_dataset)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["feature", *(f"{n}:{col}" for n in names for col in ("p", "d", "r"))])
    if names:
        rows = zip(*(stats_by_dataset[n] for n in names))
        for group in rows:
            cells = []
            for s in group:
                cells += [f"{s.p_mww:.6g}", f"{s.d:.3f}", f"{s.r:.3f}"]
            w.writerow([group[0].feature, *cells])
    return buf.getvalue()


def cross_stats_csv(stats: Sequence[CrossProjectStat]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["dataset_a", "dataset_b", "p_wilcoxon", "cohens_d"])
    for s in stats:
        w.writerow([s.pair[0], s.pair[1], f"{s.p_wilcoxon:.6g}", f"{s.d:.3f}"])
    return buf.getvalue()
