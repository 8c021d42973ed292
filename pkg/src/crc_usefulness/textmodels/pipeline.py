"""Representation + classifier pipelines and their on-disk container."""

from __future__ import annotations

import base64
import json
import pickle
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.pipeline import Pipeline

from ..exceptions import ConfigError, FormatError
from ..features.extract import FeatureExtractor, FeatureMatrix
from ..seeding import derive_seed
from .classifiers import CLASSIFIERS, make_classifier
from .embeddings import EmbeddingVectorizer, load_embeddings
from .tfidf import BowTfidf, VectorizeConfig

REPRESENTATIONS = ("features", "bow", "embeddings")
FORMAT = "crc-usefulness-model"
FORMAT_VERSION = 1


class Standardizer(TransformerMixin, BaseEstimator):
    """Z-scores with train-fold statistics; constant columns get scale 1."""

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=float)
        self.mean_ = X.mean(axis=0)
        sd = X.std(axis=0)
        self.scale_ = np.where(sd > 0, sd, 1.0)
        return self

    def transform(self, X):
        return (np.asarray(X, dtype=float) - self.mean_) / self.scale_

    def get_state(self) -> dict:
        return {"mean": self.mean_.tolist(), "scale": self.scale_.tolist()}

    def set_state(self, state: dict) -> "Standardizer":
        self.mean_ = np.array(state["mean"], dtype=float)
        self.scale_ = np.array(state["scale"], dtype=float)
        return self


@dataclass(frozen=True)
class PipelineConfig:
    representation: str = "bow"
    classifier: str = "logreg"
    vectorize: VectorizeConfig = field(default_factory=VectorizeConfig)
    features: tuple[str, ...] | None = None  # feature-representation columns
    classifier_params: dict = field(default_factory=dict)
    text_embeddings: str | None = None
    code_embeddings: str | None = None
    seed: int = 2023

    def __post_init__(self):
        if self.representation not in REPRESENTATIONS:
            raise ConfigError(f"unknown representation {self.representation!r}; expected one of {REPRESENTATIONS}")
        if self.classifier not in CLASSIFIERS:
            raise ConfigError(f"unknown classifier {self.classifier!r}; expected one of {sorted(CLASSIFIERS)}")
        if self.representation == "embeddings" and not (self.text_embeddings and self.code_embeddings):
            raise ConfigError("the embeddings representation needs text_embeddings and code_embeddings paths")
        if self.features is not None:
            object.__setattr__(self, "features", tuple(self.features))

    @property
    def tag(self) -> str:
        if self.representation == "bow":
            return f"bow:{self.vectorize.tag}:{self.classifier}"
        if self.representation == "features":
            return f"fts:{len(self.features) if self.features else 48}:{self.classifier}"
        return f"emb:{Path(self.text_embeddings).stem}+{Path(self.code_embeddings).stem}:{self.classifier}"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["features"] = list(self.features) if self.features is not None else None
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        d = dict(d)
        d["vectorize"] = VectorizeConfig(**d.get("vectorize", {}))
        if d.get("features") is not None:
            d["features"] = tuple(d["features"])
        return cls(**d)


def _classifier_params(cfg: PipelineConfig) -> dict:
    params = dict(cfg.classifier_params)
    if cfg.classifier == "rf":
        params.setdefault("seed", derive_seed(cfg.seed, "rf"))
    return params


def build_pipeline(
    cfg: PipelineConfig,
    *,
    lexicons=None,
    external=None,
    precomputed: FeatureMatrix | Mapping[str, FeatureMatrix] | None = None,
    tables=None,
) -> Pipeline:
    """Unfitted sklearn Pipeline taking a sequence of ReviewComment."""
    clf = make_classifier(cfg.classifier, **_classifier_params(cfg))
    if cfg.representation == "bow":
        v = cfg.vectorize
        steps = [("repr", BowTfidf(v.variant, v.stopword_set, v.stem, v.lemmatize, v.lowercase))]
    elif cfg.representation == "features":
        steps = [
            ("repr", FeatureExtractor(cfg.features, lexicons, external, precomputed)),
            ("scale", Standardizer()),
        ]
    else:
        text_table, code_table = tables or (load_embeddings(cfg.text_embeddings), load_embeddings(cfg.code_embeddings))
        steps = [("repr", EmbeddingVectorizer(text_table, code_table))]
    return Pipeline([*steps, ("clf", clf)])


def predict_scores(pipe: Pipeline, docs: Sequence) -> np.ndarray:
    """Probability of useful for each document."""
    Xt = docs
    for _, step in pipe.steps[:-1]:
        Xt = step.transform(Xt)
    return pipe.steps[-1][1].predict_useful(Xt)


# ------------------------------------------------------------------ serialization


def _component_state(step) -> dict:
    if hasattr(step, "get_state"):
        return {"state": step.get_state()}
    if hasattr(step, "forest_"):
        blob = base64.b64encode(pickle.dumps(step.forest_, protocol=4)).decode("ascii")
        return {"pickle": blob}
    return {}


def pipeline_to_dict(pipe: Pipeline, cfg: PipelineConfig, meta: dict | None = None) -> dict:
    return {
        "format": FORMAT,
        "version": FORMAT_VERSION,
        "kind": cfg.classifier,
        "representation": cfg.representation,
        "config": cfg.to_dict(),
        "meta": meta or {},
        "parameters": {name: _component_state(step) for name, step in pipe.steps},
    }


def save_pipeline(pipe: Pipeline, cfg: PipelineConfig, path, meta: dict | None = None) -> None:
    Path(path).write_text(json.dumps(pipeline_to_dict(pipe, cfg, meta), sort_keys=True) + "\n", encoding="utf-8")


def load_pipeline(path, *, lexicons=None, external=None) -> tuple[Pipeline, PipelineConfig, dict]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: unreadable model file ({exc})") from exc
    if doc.get("format") != FORMAT:
        raise FormatError(f"{path}: not a {FORMAT} file")
    if doc.get("version") != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported model version {doc.get('version')}")
    cfg = PipelineConfig.from_dict(doc["config"])
    pipe = build_pipeline(cfg, lexicons=lexicons, external=external)
    for name, step in pipe.steps:
        params = doc["parameters"].get(name, {})
        if "state" in params:
            step.set_state(params["state"])
        elif "pickle" in params:
            step.forest_ = pickle.loads(base64.b64decode(params["pickle"]))
            step.classes_ = np.array([0, 1])
            step.n_features_in_ = step.forest_.n_features_in_
        else:
            step.fit()
    return pipe, cfg, doc.get("meta", {})
