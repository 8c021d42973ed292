"""Run configuration: INI file + command-line overrides.

Schema (every section and key is optional)::

    [run]
    seed = 2023
    folds = 10
    out = runs/default
    representation = bow          ; features | bow | embeddings
    classifier = logreg           ; logreg | gnb | rf | majority
    feature_set = all             ; all, a composed set name (sig1, rel2, imp3...) or a name-list file
    dedup = true

    [bow]
    variant = text_tokens         ; comment | code | text | text_clean | text_tokens | code_tokens
    stopword_set = none           ; none | english-nltk | english-scikit | programming-py | programming-nonpy
    stem = false
    lemmatize = false
    lowercase = true

    [embeddings]
    text = path/to/text-vectors.txt
    code = path/to/code-vectors.txt

    [classifier]                  ; passed to the classifier (l2, max_iter, tol, var_smoothing, n_trees)
    l2 = 1.0

    [lexicons]                    ; replace a bundled jargon lexicon
    density-satd = my_satd.txt

    [dataset:RH]                  ; one section per dataset
    path = data/rh.csv
    format = csv                  ; csv | jsonl (default: file suffix)
    text = text                   ; column holding the comment
    label = label                 ; column holding the label
    id = id                       ; optional id column
    label.yes = useful            ; extra label spellings
    external = rh_scores.csv      ; optional precomputed model-based scores

Relative paths resolve against the config file's directory. Precedence is
flags > file > defaults.
"""

from __future__ import annotations

import configparser
import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Mapping

from .exceptions import ConfigError
from .features.lexicons import JARGON_LEXICONS
from .textmodels.classifiers import CLASSIFIERS
from .textmodels.pipeline import REPRESENTATIONS, PipelineConfig
from .textmodels.tfidf import VectorizeConfig

_NUMERIC = {"l2": float, "tol": float, "var_smoothing": float, "max_iter": int, "n_trees": int}


@dataclass(frozen=True)
class DatasetSpec:
    name: str
    path: str
    format: str | None = None
    schema: Mapping[str, str] = field(default_factory=dict)
    label_values: Mapping[str, str] = field(default_factory=dict)
    external: str | None = None

    def schema_map(self) -> dict:
        return {**self.schema, "label_values": dict(self.label_values)}


@dataclass(frozen=True)
class RunConfig:
    datasets: tuple[DatasetSpec, ...] = ()
    seed: int = 2023
    folds: int = 10
    out: str = "runs/default"
    representation: str = "bow"
    classifier: str = "logreg"
    classifier_params: Mapping[str, float] = field(default_factory=dict)
    vectorize: VectorizeConfig = field(default_factory=VectorizeConfig)
    feature_set: str = "all"
    text_embeddings: str | None = None
    code_embeddings: str | None = None
    lexicons: Mapping[str, str] = field(default_factory=dict)
    dedup: bool = True

    def dataset(self, name: str) -> DatasetSpec:
        for d in self.datasets:
            if d.name == name:
                return d
        raise ConfigError(f"no dataset named {name!r} in the configuration")

    def pipeline(self, features: tuple[str, ...] | None = None) -> PipelineConfig:
        return PipelineConfig(
            representation=self.representation,
            classifier=self.classifier,
            vectorize=self.vectorize,
            features=features,
            classifier_params=dict(self.classifier_params),
            text_embeddings=self.text_embeddings,
            code_embeddings=self.code_embeddings,
            seed=self.seed,
        )

    def validate(self) -> "RunConfig":
        if self.folds < 2:
            raise ConfigError("folds must be at least 2")
        if self.representation not in REPRESENTATIONS:
            raise ConfigError(f"representation must be one of {REPRESENTATIONS}")
        if self.classifier not in CLASSIFIERS:
            raise ConfigError(f"classifier must be one of {sorted(CLASSIFIERS)}")
        if not self.datasets:
            raise ConfigError("no dataset configured (use a [dataset:NAME] section or --dataset NAME=PATH)")
        for d in self.datasets:
            for p in (d.path, d.external):
                if p is not None and not Path(p).is_file():
                    raise ConfigError(f"dataset {d.name!r}: file {p} does not exist")
        if self.representation == "embeddings":
            for p in (self.text_embeddings, self.code_embeddings):
                if not p or not Path(p).is_file():
                    raise ConfigError(f"embedding file {p!r} does not exist")
        for feat, p in self.lexicons.items():
            if feat not in JARGON_LEXICONS:
                raise ConfigError(f"[lexicons]: {feat!r} is not a jargon feature")
            if not Path(p).is_file():
                raise ConfigError(f"lexicon file {p} does not exist")
        return self


def _bool(value: str, key: str) -> bool:
    v = str(value).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {value!r}")


def _int(value, key: str) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected an integer, got {value!r}") from None


def _resolve(base: Path | None, p: str | None) -> str | None:
    if p is None or p == "":
        return None
    path = Path(p).expanduser()
    if base is not None and not path.is_absolute():
        path = base / path
    return str(path)


def parse_dataset_flag(value: str) -> tuple[str, str | None]:
    """``NAME=PATH`` defines a dataset; a bare value names one (or is a path)."""
    if "=" in value:
        name, path = value.split("=", 1)
        return name.strip(), path.strip()
    return value.strip(), None


def load_config(path=None, overrides: Mapping | None = None) -> RunConfig:
    overrides = {k: v for k, v in dict(overrides or {}).items() if v is not None}
    cp = configparser.ConfigParser(inline_comment_prefixes=(";",), interpolation=None)
    cp.optionxform = str  # keep key case (label.Yes, feature names)
    base = None
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file {path} does not exist")
        try:
            cp.read(path, encoding="utf-8")
        except configparser.Error as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        base = path.resolve().parent
    run = cp["run"] if cp.has_section("run") else {}
    known_sections = {"run", "bow", "embeddings", "classifier", "lexicons"}
    for s in cp.sections():
        if s not in known_sections and not s.startswith("dataset:"):
            raise ConfigError(f"unknown config section [{s}]")

    datasets: dict[str, DatasetSpec] = {}
    for s in cp.sections():
        if not s.startswith("dataset:"):
            continue
        name = s.split(":", 1)[1].strip()
        sec = cp[s]
        if "path" not in sec:
            raise ConfigError(f"[{s}] needs a path")
        schema = {k: sec[k] for k in ("text", "label", "id") if k in sec}
        label_values = {k.split(".", 1)[1]: v for k, v in sec.items() if k.startswith("label.")}
        datasets[name] = DatasetSpec(name, _resolve(base, sec["path"]), sec.get("format"), schema,
                                     label_values, _resolve(base, sec.get("external")))
    selected = []
    for flag in overrides.get("dataset", []) or []:
        name, p = parse_dataset_flag(flag)
        if p is not None:
            datasets[name] = DatasetSpec(name, str(Path(p).expanduser()))
        elif name not in datasets:
            if Path(name).is_file():
                datasets[Path(name).stem] = DatasetSpec(Path(name).stem, name)
                name = Path(name).stem
            else:
                raise ConfigError(f"--dataset {name!r} is neither a configured dataset nor a file")
        selected.append(name)
    chosen = [datasets[n] for n in dict.fromkeys(selected)] if selected else list(datasets.values())

    bow = cp["bow"] if cp.has_section("bow") else {}
    try:
        vectorize = VectorizeConfig(
            variant=bow.get("variant", "text_tokens"),
            stopword_set=bow.get("stopword_set", "none"),
            stem=_bool(bow.get("stem", "false"), "bow.stem"),
            lemmatize=_bool(bow.get("lemmatize", "false"), "bow.lemmatize"),
            lowercase=_bool(bow.get("lowercase", "true"), "bow.lowercase"),
        )
    except ValueError as exc:
        raise ConfigError(f"[bow]: {exc}") from exc

    params = {}
    if cp.has_section("classifier"):
        for k, v in cp["classifier"].items():
            conv = _NUMERIC.get(k)
            if conv is None:
                raise ConfigError(f"[classifier]: unknown parameter {k!r}")
            try:
                params[k] = conv(v)
            except ValueError:
                raise ConfigError(f"[classifier]: {k} = {v!r} is not a number") from None
    emb = cp["embeddings"] if cp.has_section("embeddings") else {}
    lexicons = {k: _resolve(base, v) for k, v in (cp["lexicons"].items() if cp.has_section("lexicons") else [])}

    def pick(key, default):
        return overrides.get(key, run.get(key, default))

    cfg = RunConfig(
        datasets=tuple(chosen),
        seed=_int(pick("seed", 2023), "seed"),
        folds=_int(pick("folds", 10), "folds"),
        out=str(overrides["out"]) if "out" in overrides else (_resolve(base, run.get("out")) or "runs/default"),
        representation=pick("representation", "bow"),
        classifier=pick("classifier", "logreg"),
        classifier_params=params,
        vectorize=vectorize,
        feature_set=pick("feature_set", "all"),
        text_embeddings=_resolve(base, emb.get("text")),
        code_embeddings=_resolve(base, emb.get("code")),
        lexicons=lexicons,
        dedup=_bool(run.get("dedup", "true"), "run.dedup"),
    )
    return cfg.validate()


# ----------------------------------------------------------------------- hashing


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def stable_hash(*parts) -> str:
    """Short digest of JSON-serializable parts (dataclasses are converted)."""
    def norm(x):
        if hasattr(x, "__dataclass_fields__"):
            return norm(asdict(x))
        if isinstance(x, Mapping):
            return {str(k): norm(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
        if isinstance(x, (list, tuple)):
            return [norm(v) for v in x]
        return x

    blob = json.dumps([norm(p) for p in parts], sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]

