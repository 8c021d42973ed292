"""Labeled review-comment datasets: loading, deduplication and fold plans."""

from __future__ import annotations

import csv
import io
import json
import re
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

import numpy as np

from .exceptions import DataError, EmptyDatasetError, SchemaError, StratificationError

USEFUL = 1
NOT_USEFUL = 0

# Accepted label spellings (lowercased) before any user-supplied mapping.
DEFAULT_LABEL_VALUES = {
    "useful": USEFUL,
    "not-useful": NOT_USEFUL,
    "not_useful": NOT_USEFUL,
    "notuseful": NOT_USEFUL,
    "1": USEFUL,
    "0": NOT_USEFUL,
    "1.0": USEFUL,
    "0.0": NOT_USEFUL,
    "true": USEFUL,
    "false": NOT_USEFUL,
}

_WS = re.compile(r"\s+")


@dataclass(frozen=True)
class ReviewComment:
    id: str
    raw: str
    label: int
    dataset: str = ""

    def __post_init__(self):
        if not self.raw.strip():
            raise DataError(f"comment {self.id!r} has empty text")
        if self.label not in (USEFUL, NOT_USEFUL):
            raise DataError(f"comment {self.id!r} has label {self.label!r}")


@dataclass(frozen=True)
class Dataset:
    name: str
    comments: tuple[ReviewComment, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "comments", tuple(self.comments))
        seen: set[str] = set()
        for c in self.comments:
            if c.id in seen:
                raise DataError(f"duplicate id {c.id!r} in dataset {self.name!r}")
            seen.add(c.id)

    def __len__(self) -> int:
        return len(self.comments)

    def __iter__(self) -> Iterator[ReviewComment]:
        return iter(self.comments)

    def __getitem__(self, i):
        return self.comments[i]

    @property
    def class_counts(self) -> tuple[int, int]:
        """``(n_useful, n_not_useful)``."""
        n_useful = sum(c.label == USEFUL for c in self.comments)
        return n_useful, len(self.comments) - n_useful

    @property
    def ids(self) -> list[str]:
        return [c.id for c in self.comments]

    @property
    def texts(self) -> list[str]:
        return [c.raw for c in self.comments]

    @property
    def labels(self) -> np.ndarray:
        return np.array([c.label for c in self.comments], dtype=int)

    def subset(self, indices: Iterable[int]) -> "Dataset":
        return Dataset(self.name, tuple(self.comments[i] for i in indices))


# --------------------------------------------------------------------------- loading


def _map_label(value, label_values: Mapping[str, int], row: int) -> int:
    key = str(value).strip().lower()
    if key in label_values:
        return label_values[key]
    raise DataError(f"row {row}: label {value!r} does not map onto useful/not-useful")


def _iter_rows(path: Path, fmt: str, delimiter: str) -> Iterator[dict]:
    text = path.read_text(encoding="utf-8")
    if fmt == "csv":
        reader = csv.DictReader(io.StringIO(text), delimiter=delimiter)
        if reader.fieldnames is None:
            return
        yield {"__fields__": reader.fieldnames}
        yield from reader
    elif fmt == "jsonl":
        first = True
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"row {lineno}: invalid JSON ({exc.msg})") from exc
            if first:
                yield {"__fields__": list(obj)}
                first = False
            yield obj
    else:
        raise ValueError(f"unsupported format {fmt!r}; expected 'csv' or 'jsonl'")


def load_dataset(
    path,
    format: str | None = None,
    schema_map: Mapping | None = None,
    *,
    name: str | None = None,
    delimiter: str = ",",
) -> Dataset:
    """Load a CSV or JSONL file of labeled comments.

    ``schema_map`` maps the logical fields ``text``, ``label`` and optionally
    ``id`` onto column names; ``label_values`` may add extra label spellings
    (e.g. ``{"yes": "useful"}``). Without an ``id`` column, ids are the 1-based
    row numbers. Input order is preserved.
    """
    path = Path(path)
    fmt = (format or path.suffix.lstrip(".")).lower()
    schema = {"text": "text", "label": "label", **dict(schema_map or {})}
    label_values = dict(DEFAULT_LABEL_VALUES)
    for k, v in dict(schema.pop("label_values", None) or {}).items():
        label_values[str(k).strip().lower()] = (
            v if v in (USEFUL, NOT_USEFUL) else DEFAULT_LABEL_VALUES[str(v).strip().lower()]
        )
    name = name or schema.get("dataset") or path.stem

    rows = _iter_rows(path, fmt, delimiter)
    header = next(rows, None)
    if header is None:
        raise EmptyDatasetError(f"{path} contains no rows")
    fields = header["__fields__"]
    for logical in ("id", "text", "label"):
        col = schema.get(logical)
        if col is not None and col not in fields:
            raise SchemaError(f"column {col!r} (for {logical}) not found in {path}")

    comments = []
    for row_no, row in enumerate(rows, start=1):
        raw = row.get(schema["text"])
        if raw is None or not str(raw).strip():
            raise DataError(f"row {row_no}: empty comment text")
        cid = str(row[schema["id"]]) if schema.get("id") else str(row_no)
        comments.append(
            ReviewComment(cid, str(raw), _map_label(row.get(schema["label"]), label_values, row_no), name)
        )
    if not comments:
        raise EmptyDatasetError(f"{path} contains no rows")
    return Dataset(name, tuple(comments))


def save_jsonl(ds: Dataset, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for c in ds:
            fh.write(json.dumps({"id": c.id, "text": c.raw, "label": c.label}, ensure_ascii=False) + "\n")


# ----------------------------------------------------------------------- deduplicate


def dedup_key(raw: str) -> str:
    """Trim and collapse internal whitespace."""
    return _WS.sub(" ", raw.strip())


@dataclass(frozen=True)
class DedupReport:
    removed: tuple[tuple[str, str], ...]  # (removed_id, kept_id)
    keys: tuple[str, ...]  # duplicate key of each removal, aligned with ``removed``
    exact_removed: int  # removals under byte-exact comparison

    @property
    def removed_ids(self) -> list[str]:
        return [r for r, _ in self.removed]

    def __len__(self) -> int:
        return len(self.removed)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["removed_id", "kept_id"])
        w.writerows(self.removed)
        return buf.getvalue()


def deduplicate(ds: Dataset) -> tuple[Dataset, DedupReport]:
    kept: dict[str, ReviewComment] = {}
    removed, keys = [], []
    exact: set[str] = set()
    exact_removed = 0
    for c in ds:
        if c.raw in exact:
            exact_removed += 1
        exact.add(c.raw)
        key = dedup_key(c.raw)
        if key in kept:
            removed.append((c.id, kept[key].id))
            keys.append(key)
        else:
            kept[key] = c
    out = Dataset(ds.name, tuple(kept.values()))
    return out, DedupReport(tuple(removed), tuple(keys), exact_removed)


# ------------------------------------------------------------------------ fold plans


@dataclass(frozen=True)
class FoldPlan:
    """Stratified fold assignment.

    Shuffling uses numpy's PCG64 generator (``np.random.default_rng(seed)``);
    each class is permuted independently and dealt round-robin into folds, the
    fold counter carrying over from one class to the next so fold sizes stay
    balanced overall.
    """

    k: int
    seed: int
    ids: tuple[str, ...]
    folds: tuple[int, ...]  # aligned with ``ids``
    assignment: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "assignment", MappingProxyType(dict(zip(self.ids, self.folds))))

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(np.asarray(self.folds) == fold)

    def split(self) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        folds = np.asarray(self.folds)
        for f in range(self.k):
            yield np.flatnonzero(folds != f), np.flatnonzero(folds == f)


def stratified_folds(ds: Dataset | np.ndarray, k: int = 10, seed: int = 2023) -> FoldPlan:
    """Build a deterministic stratified ``k``-fold plan over a dataset or label array."""
    if k < 2:
        raise StratificationError(f"k must be >= 2, got {k}")
    if isinstance(ds, Dataset):
        labels, ids = ds.labels, tuple(ds.ids)
    else:
        labels = np.asarray(ds, dtype=int)
        ids = tuple(str(i) for i in range(len(labels)))
    rng = np.random.default_rng(seed)
    folds = np.empty(len(labels), dtype=int)
    counter = 0
    for cls in (NOT_USEFUL, USEFUL):
        members = np.flatnonzero(labels == cls)
        if len(members) < k:
            raise StratificationError(f"class {cls} has {len(members)} members, fewer than k={k}")
        members = rng.permutation(members)
        folds[members] = (counter + np.arange(len(members))) % k
        counter = (counter + len(members)) % k
    return FoldPlan(k, seed, ids, tuple(int(f) for f in folds))


# ------------------------------------------------------------------------ statistics


@dataclass(frozen=True)
class DatasetStats:
    n: int
    n_useful: int
    n_not_useful: int
    useful_ratio: float
    median_words: float


def dataset_stats(ds: Dataset) -> DatasetStats:
    if len(ds) == 0:
        return DatasetStats(0, 0, 0, 0.0, 0.0)
    n_useful, n_not = ds.class_counts
    median = statistics.median(len(c.raw.split()) for c in ds)
    return DatasetStats(len(ds), n_useful, n_not, n_useful / len(ds), float(median))
