"""The 48-slot textual feature catalog and the FeatureVector container."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Catalog order (FID 1..48). Downstream tie-breaks use this order.
FEATURE_NAMES: tuple[str, ...] = (
    "avg-words", "num-verb", "avg-stopwords", "word-count", "num-chars",
    "num-determinants", "num-nouns", "num-adj", "num-adverb", "prog-words",
    "num-tentative", "stop-word-ratio", "num-sent", "avg-punct", "has-out-snippet",
    "subjectivity", "avg-chars", "rd-text", "num-Qmark", "code-word-ratio",
    "question-ratio", "is-confirmatory", "num-exclamation", "polarity", "num-interjections",
    "num-propernouns", "cr-senti", "is-toxic", "tone", "yngve",
    "cdensity", "pdensity", "frazier", "informativeness", "formality",
    "politeness", "implicature", "gratitude", "distress", "empathy",
    "density-refact-solution", "density-secdev", "density-refact-problem", "density-msoft-nu",
    "density-satd", "density-msoft-u", "density-refact-xerox", "has-snippet",
)
FEATURE_INDEX = {name: i for i, name in enumerate(FEATURE_NAMES)}

ASPECTS = {
    "text": (
        "avg-words", "num-verb", "avg-stopwords", "word-count", "num-chars", "num-determinants",
        "num-nouns", "num-adj", "num-adverb", "stop-word-ratio", "num-sent", "avg-punct",
        "avg-chars", "rd-text", "num-Qmark", "question-ratio", "num-exclamation",
        "num-interjections", "num-propernouns", "yngve", "cdensity", "pdensity", "frazier",
        "subjectivity", "polarity",
    ),
    "code": ("prog-words", "code-word-ratio", "has-snippet", "has-out-snippet"),
    "voice": (
        "num-tentative", "is-confirmatory", "cr-senti", "is-toxic", "tone", "informativeness",
        "formality", "politeness", "implicature", "gratitude", "distress", "empathy",
    ),
    "jargon": (
        "density-refact-solution", "density-secdev", "density-refact-problem", "density-msoft-nu",
        "density-satd", "density-msoft-u", "density-refact-xerox",
    ),
}

# Model- or parser-based scores: never computed here, only ingested.
INGESTED: tuple[str, ...] = (
    "cr-senti", "is-toxic", "tone", "yngve", "cdensity", "pdensity", "frazier",
    "informativeness", "formality", "politeness", "implicature", "distress", "empathy",
)
COMPUTED: tuple[str, ...] = tuple(f for f in FEATURE_NAMES if f not in INGESTED)

COUNTS = frozenset({
    "num-verb", "word-count", "num-chars", "num-determinants", "num-nouns", "num-adj",
    "num-adverb", "prog-words", "num-tentative", "num-sent", "num-Qmark", "num-exclamation",
    "num-interjections", "num-propernouns",
})
UNIT_INTERVAL = frozenset({
    "stop-word-ratio", "code-word-ratio", "question-ratio", "subjectivity",
    *ASPECTS["jargon"],
})
FLAGS = frozenset({"has-snippet", "has-out-snippet", "is-confirmatory", "gratitude"})

# Accepted ranges for ingested scores: (low, high) inclusive, or a finite set.
INGEST_RANGES: dict[str, tuple[float, float] | frozenset] = {
    "cr-senti": (-1.0, 1.0),
    "is-toxic": (0.0, 1.0),
    "tone": frozenset({0.0, 1.0, 2.0}),
    "yngve": (0.0, math.inf),
    "frazier": (0.0, math.inf),
    "cdensity": (0.0, math.inf),
    "pdensity": (0.0, 1.0),
    "informativeness": (-math.inf, math.inf),
    "formality": (-math.inf, math.inf),
    "politeness": (-math.inf, math.inf),
    "implicature": (-math.inf, math.inf),
    "distress": (-math.inf, math.inf),
    "empathy": (-math.inf, math.inf),
}

COMPUTED_PROV = "computed"
INGESTED_PROV = "ingested"
MISSING_PROV = "missing"


def in_range(name: str, value: float) -> bool:
    if not math.isfinite(value):
        return False
    bounds = INGEST_RANGES[name]
    if isinstance(bounds, frozenset):
        return value in bounds
    return bounds[0] <= value <= bounds[1]


@dataclass
class FeatureVector:
    values: dict[str, float] = field(default_factory=dict)
    provenance: dict[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, name: str) -> float:
        return self.values[name]

    def set(self, name: str, value: float, provenance: str = COMPUTED_PROV) -> None:
        if name not in FEATURE_INDEX:
            raise KeyError(name)
        self.values[name] = float(value)
        self.provenance[name] = provenance

    def update(self, values: dict[str, float], provenance: str = COMPUTED_PROV) -> None:
        for k, v in values.items():
            self.set(k, v, provenance)

    def as_array(self) -> np.ndarray:
        return np.array([self.values[n] for n in FEATURE_NAMES], dtype=float)

    def provenance_list(self) -> list[str]:
        return [self.provenance[n] for n in FEATURE_NAMES]
