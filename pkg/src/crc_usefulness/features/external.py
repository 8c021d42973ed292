"""Ingestion of precomputed model-based feature scores."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

from ..exceptions import DataError, SchemaError
from .catalog import INGESTED, in_range


@dataclass(frozen=True)
class ExternalScores:
    scores: dict[str, dict[str, float]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.scores)

    def get(self, comment_id) -> dict[str, float]:
        return self.scores.get(str(comment_id), {}) if comment_id is not None else {}


def ingest_external_scores(path) -> ExternalScores:
    """Read a CSV keyed by ``comment_id`` with any subset of the ingestable columns.

    Blank cells mean "not available" for that comment.
    """
    text = Path(path).read_text(encoding="utf-8")
    if not text.strip():
        return ExternalScores()
    reader = csv.DictReader(io.StringIO(text))
    fields = reader.fieldnames or []
    if "comment_id" not in fields:
        raise SchemaError("external score file needs a 'comment_id' column")
    unknown = [f for f in fields if f != "comment_id" and f not in INGESTED]
    if unknown:
        raise SchemaError(f"unknown feature column(s): {', '.join(unknown)}")
    table: dict[str, dict[str, float]] = {}
    for row_no, row in enumerate(reader, start=1):
        cid = row["comment_id"]
        entry = {}
        for name in fields:
            if name == "comment_id" or row[name] is None or not row[name].strip():
                continue
            try:
                value = float(row[name])
            except ValueError:
                raise DataError(f"row {row_no}: {name}={row[name]!r} is not a number") from None
            if not in_range(name, value):
                raise DataError(f"row {row_no}: {name}={value} is out of range")
            entry[name] = value
        table[cid] = entry
    return ExternalScores(table)
