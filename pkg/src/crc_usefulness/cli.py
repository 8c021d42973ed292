"""``crc-usefulness`` command-line front end.

Every artifact written under ``--out`` starts with a header recording the
artifact kind, a hash of the configuration that produced it, the seed and the
fold count. Downstream commands recompute the expected hash from the current
configuration and refuse to consume an artifact that does not match.

Layout::

    <out>/<dataset>/comments.jsonl   ingest: deduplicated comments
    <out>/<dataset>/variants.jsonl   ingest: the six comment variants
    <out>/<dataset>/dedup.csv        ingest: removed_id, kept_id
    <out>/<dataset>/stats.csv        ingest: class counts and duplicate counts
    <out>/<dataset>/features.csv     featurize: 48 features + provenance
    <out>/analysis/within.csv        analyze: p / d / r per feature and dataset
    <out>/analysis/cross.csv         analyze: pairwise Wilcoxon p and Cohen's D
    <out>/selection/*.txt            select: per-dataset and composed feature sets
    <out>/selection/report.csv       select: membership table
    <out>/selection/importances.csv  select: forest importances
    <out>/<dataset>/model.json       train: fitted pipeline
    <out>/<dataset>/folds.csv        eval: fold assignment
    <out>/<dataset>/eval.csv|.md     eval: baseline and cross-validated scores
    <out>/cross/matrix.csv|.md       cross: train-on-one, test-on-another MCC
    <out>/explain/*.csv, summary.md  explain: top tokens by mean SHAP value
    <out>/report/report.md           report: everything above in one document
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import re
import sys
from pathlib import Path
from typing import Callable, Sequence

from . import analysis, evaluation, explain, selection
from .config import RunConfig, file_digest, load_config, stable_hash
from .corpus import Dataset, ReviewComment, dataset_stats, deduplicate, load_dataset, stratified_folds
from .exceptions import (
    ConfigError,
    CRCError,
    DataError,
    PipelineError,
    StalenessError,
    UnsupportedModelError,
)
from .features.catalog import FEATURE_NAMES
from .features.external import ExternalScores, ingest_external_scores
from .features.extract import FeatureMatrix, build_feature_matrix
from .features.lexicons import default_lexicons, load_lexicon
from .preprocess import write_variants_jsonl
from .textmodels.pipeline import build_pipeline, load_pipeline, save_pipeline

log = logging.getLogger("crc_usefulness")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_PIPELINE = 0, 2, 3, 4
_HEADER = re.compile(r"^# artifact=(\S+) config_hash=(\S+) seed=(\S+) folds=(\S+)")


# ------------------------------------------------------------------ artifact headers


def header_line(kind: str, config_hash: str, cfg: RunConfig) -> str:
    return f"# artifact={kind} config_hash={config_hash} seed={cfg.seed} folds={cfg.folds}"


def read_header(path: Path) -> dict | None:
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
    m = _HEADER.match(first)
    if m:
        return {"artifact": m[1], "config_hash": m[2], "seed": m[3], "folds": m[4]}
    if first.startswith('{"_meta"'):
        return json.loads(first)["_meta"]
    if path.suffix == ".json":
        try:
            return json.loads(path.read_text(encoding="utf-8")).get("meta")
        except json.JSONDecodeError:
            return None
    return None


def require(path: Path, expected_hash: str, producer: str) -> Path:
    if not path.is_file():
        raise StalenessError(f"missing {path}; run `crc-usefulness {producer}` first")
    meta = read_header(path)
    if meta is None or meta.get("config_hash") != expected_hash:
        raise StalenessError(
            f"{path} was produced under a different configuration; rerun `crc-usefulness {producer}`"
        )
    return path


def write_text(path: Path, header: str, body: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(header + "\n" + body, encoding="utf-8")


def strip_header(text: str) -> str:
    return "\n".join(ln for ln in text.splitlines() if not ln.startswith("# ")) + "\n"


# ---------------------------------------------------------------------- stage hashes


class Stages:
    """Configuration hashes for every stage, chained through their inputs."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg

    def ingest(self, name: str) -> str:
        d = self.cfg.dataset(name)
        return stable_hash("ingest", file_digest(d.path), d.format, d.schema_map(), self.cfg.dedup)

    def featurize(self, name: str) -> str:
        d = self.cfg.dataset(name)
        lex = {k: file_digest(p) for k, p in sorted(self.cfg.lexicons.items())}
        ext = file_digest(d.external) if d.external else None
        return stable_hash("featurize", self.ingest(name), lex, ext)

    def analyze(self) -> str:
        return stable_hash("analyze", [(d.name, self.featurize(d.name)) for d in self.cfg.datasets])

    def select(self) -> str:
        return stable_hash("select", self.analyze(), self.cfg.seed)

    def model(self, name: str) -> str:
        parts = ["model", self.ingest(name), self.cfg.pipeline().to_dict(), self.cfg.seed]
        if self.cfg.representation == "features":
            parts += [self.featurize(name), self._feature_set_key()]
        if self.cfg.representation == "embeddings":
            parts += [file_digest(self.cfg.text_embeddings), file_digest(self.cfg.code_embeddings)]
        return stable_hash(*parts)

    def evaluate(self, name: str) -> str:
        return stable_hash("eval", self.model(name), self.cfg.folds)

    def cross(self) -> str:
        return stable_hash("cross", [(d.name, self.evaluate(d.name)) for d in self.cfg.datasets])

    def explain(self) -> str:
        return stable_hash("explain", [(d.name, self.model(d.name)) for d in self.cfg.datasets])

    def report(self) -> str:
        return stable_hash("report", self.cross(), self.explain())

    def _feature_set_key(self):
        fs = self.cfg.feature_set
        if fs == "all":
            return "all"
        if Path(fs).is_file():
            return ("file", file_digest(fs))
        return ("selection", fs, self.select())


# --------------------------------------------------------------------------- context


class Context:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.out = Path(cfg.out)
        self.h = Stages(cfg)
        self._lexicons = None

    def ds_dir(self, name: str) -> Path:
        return self.out / name

    def header(self, kind: str, h: str) -> str:
        return header_line(kind, h, self.cfg)

    @property
    def lexicons(self):
        if self._lexicons is None:
            lex = default_lexicons()
            for feat, p in self.cfg.lexicons.items():
                lex[feat] = load_lexicon(p, name=feat)
            self._lexicons = lex
        return self._lexicons

    def external(self, name: str) -> ExternalScores | None:
        d = self.cfg.dataset(name)
        return ingest_external_scores(d.external) if d.external else None

    def comments(self, name: str) -> Dataset:
        path = require(self.ds_dir(name) / "comments.jsonl", self.h.ingest(name), "ingest")
        rows = []
        for line in path.read_text(encoding="utf-8").splitlines()[1:]:
            obj = json.loads(line)
            rows.append(ReviewComment(obj["id"], obj["text"], int(obj["label"]), name))
        return Dataset(name, tuple(rows))

    def features(self, name: str) -> FeatureMatrix:
        path = require(self.ds_dir(name) / "features.csv", self.h.featurize(name), "featurize")
        return FeatureMatrix.read_csv(path)

    def feature_set(self) -> tuple[str, ...] | None:
        fs = self.cfg.feature_set
        if fs == "all":
            return None
        if Path(fs).is_file():
            return selection.read_feature_set(fs).members
        path = require(self.out / "selection" / f"{fs}.txt", self.h.select(), "select")
        members = selection.read_feature_set(path).members
        if not members:
            raise PipelineError(f"feature set {fs!r} is empty")
        return members

    def build_kwargs(self, names: Sequence[str]) -> dict:
        kw: dict = {"lexicons": self.lexicons}
        if self.cfg.representation == "features":
            kw["precomputed"] = {n: self.features(n) for n in names}
        if self.cfg.representation == "embeddings":
            from .textmodels.embeddings import load_embeddings

            kw["tables"] = (load_embeddings(self.cfg.text_embeddings), load_embeddings(self.cfg.code_embeddings))
        return kw


def _csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


# -------------------------------------------------------------------------- commands


def cmd_ingest(ctx: Context) -> None:
    for d in ctx.cfg.datasets:
        ds = load_dataset(d.path, d.format, d.schema_map(), name=d.name)
        kept, report = deduplicate(ds) if ctx.cfg.dedup else (ds, None)
        h = ctx.h.ingest(d.name)
        out = ctx.ds_dir(d.name)
        out.mkdir(parents=True, exist_ok=True)
        meta = {"artifact": "comments", "config_hash": h, "seed": str(ctx.cfg.seed), "folds": str(ctx.cfg.folds)}
        with open(out / "comments.jsonl", "w", encoding="utf-8") as fh:
            fh.write(json.dumps({"_meta": meta}, sort_keys=True) + "\n")
            for c in kept:
                fh.write(json.dumps({"id": c.id, "text": c.raw, "label": c.label}, ensure_ascii=False) + "\n")
        write_variants_jsonl(kept.ids, kept.texts, out / "variants.jsonl", dict(meta, artifact="variants"))
        dedup_csv = report.to_csv() if report is not None else "removed_id,kept_id\n"
        write_text(out / "dedup.csv", ctx.header("dedup", h), dedup_csv)
        st = dataset_stats(kept)
        raw_stats = dataset_stats(ds)
        rows = [
            ["n_loaded", "n", "n_useful", "n_not_useful", "useful_ratio", "median_words",
             "exact_duplicates", "normalized_duplicates"],
            [raw_stats.n, st.n, st.n_useful, st.n_not_useful, f"{st.useful_ratio:.4f}", st.median_words,
             report.exact_removed if report else 0, len(report) if report else 0],
        ]
        write_text(out / "stats.csv", ctx.header("stats", h), _csv(rows))
        log.info("%s: %d comments (%d useful), %d duplicates removed", d.name, st.n, st.n_useful,
                 len(report) if report else 0)


def cmd_featurize(ctx: Context) -> None:
    for d in ctx.cfg.datasets:
        ds = ctx.comments(d.name)
        fm = build_feature_matrix(ds, ctx.lexicons, ctx.external(d.name))
        fm.write_csv(ctx.ds_dir(d.name) / "features.csv", ctx.header("features", ctx.h.featurize(d.name)))
        log.info("%s: featurized %d comments", d.name, len(fm))


def _within_stats(ctx: Context) -> dict[str, list[analysis.FeatureStat]]:
    stats = {}
    for d in ctx.cfg.datasets:
        fm = ctx.features(d.name)
        names = fm.available_features()
        stats[d.name] = analysis.within_project_analysis(fm.columns(names), fm.labels, names)
    return stats


def cmd_analyze(ctx: Context) -> None:
    stats = _within_stats(ctx)
    h = ctx.h.analyze()
    # cross-project comparison needs one common feature list
    common = [f for f in FEATURE_NAMES if all(any(s.feature == f for s in v) for v in stats.values())]
    aligned = {n: [s for s in v if s.feature in common] for n, v in stats.items()}
    out = ctx.out / "analysis"
    write_text(out / "within.csv", ctx.header("within-analysis", h), analysis.feature_stats_csv(aligned))
    cross = analysis.cross_project_analysis(aligned) if len(aligned) > 1 else []
    write_text(out / "cross.csv", ctx.header("cross-analysis", h), analysis.cross_stats_csv(cross))


def cmd_select(ctx: Context) -> None:
    h = ctx.h.select()
    require(ctx.out / "analysis" / "within.csv", ctx.h.analyze(), "analyze")
    stats = _within_stats(ctx)
    out = ctx.out / "selection"
    per_dataset, imp_rows = {}, [["dataset", "feature", "importance"]]
    for d in ctx.cfg.datasets:
        fm = ctx.features(d.name)
        names = fm.available_features()
        X = fm.columns(names)
        sig = selection.significant_features(stats[d.name], name=f"sig-{d.name}", origin=f"mann-whitney on {d.name}")
        rel = selection.relevant_features(X, fm.labels, names, seed=ctx.cfg.seed)
        imp = selection.importance_features(X, fm.labels, names, seed=ctx.cfg.seed)
        sets = {
            "sig": sig,
            "rel": selection.FeatureSet(f"rel-{d.name}", rel.members, f"{rel.origin} on {d.name}", rel.flags),
            "imp": selection.FeatureSet(f"imp-{d.name}", imp.selected.members,
                                        f"{imp.selected.origin} on {d.name}", imp.selected.flags),
        }
        per_dataset[d.name] = sets
        for proc, fs in sets.items():
            selection.write_feature_set(fs, out / f"{d.name}-{proc}.txt", ctx.header("feature-set", h))
        imp_rows += [[d.name, f, f"{v:.6g}"] for f, v in imp.importances.items()]
    composed = selection.compose_feature_sets(per_dataset)
    for fs in composed:
        selection.write_feature_set(fs, out / f"{fs.name}.txt", ctx.header("feature-set", h))
    write_text(out / "report.csv", ctx.header("selection-report", h),
               selection.selection_report_csv(per_dataset, composed))
    write_text(out / "importances.csv", ctx.header("importances", h), _csv(imp_rows))


def _check_features_ready(ctx: Context, names: Sequence[str]) -> None:
    if ctx.cfg.representation == "features":
        for n in names:
            ctx.features(n)


def cmd_train(ctx: Context) -> None:
    names = [d.name for d in ctx.cfg.datasets]
    _check_features_ready(ctx, names)
    pcfg = ctx.cfg.pipeline(ctx.feature_set())
    for n in names:
        ds = ctx.comments(n)
        pipe = build_pipeline(pcfg, **ctx.build_kwargs([n])).fit(list(ds.comments), ds.labels)
        meta = {"artifact": "model", "config_hash": ctx.h.model(n), "seed": str(ctx.cfg.seed),
                "folds": str(ctx.cfg.folds)}
        save_pipeline(pipe, pcfg, ctx.ds_dir(n) / "model.json", meta)


def cmd_eval(ctx: Context) -> None:
    names = [d.name for d in ctx.cfg.datasets]
    _check_features_ready(ctx, names)
    pcfg = ctx.cfg.pipeline(ctx.feature_set())
    for n in names:
        ds = ctx.comments(n)
        plan = stratified_folds(ds, k=ctx.cfg.folds, seed=ctx.cfg.seed)
        res = evaluation.cross_validate(pcfg, ds, plan, **ctx.build_kwargs([n]))
        base = evaluation.majority_baseline(ds)
        rows = [("majority", base), (pcfg.tag, res.report)]
        h = ctx.h.evaluate(n)
        d = ctx.ds_dir(n)
        write_text(d / "folds.csv", ctx.header("folds", h), _csv([["id", "fold"], *zip(plan.ids, plan.folds)]))
        write_text(d / "eval.csv", ctx.header("eval", h), evaluation.score_table_csv(rows, base))
        write_text(d / "eval.md", ctx.header("eval", h),
                   f"## {n}\n\n" + evaluation.score_table_markdown(rows[1:], base))
        log.info("%s: %s mcc=%.3f (baseline %.3f)", n, pcfg.tag, res.report.mcc, base.mcc)


def _within_mcc(ctx: Context, name: str) -> float:
    path = require(ctx.ds_dir(name) / "eval.csv", ctx.h.evaluate(name), "eval")
    rows = list(csv.DictReader(io.StringIO(strip_header(path.read_text(encoding="utf-8")))))
    return float(rows[-1]["mcc"])


def cmd_cross(ctx: Context) -> None:
    names = [d.name for d in ctx.cfg.datasets]
    if len(names) < 2:
        raise ConfigError("cross needs at least two datasets")
    within = {n: _within_mcc(ctx, n) for n in names}
    pcfg = ctx.cfg.pipeline(ctx.feature_set())
    datasets = {n: ctx.comments(n) for n in names}
    matrix = evaluation.cross_matrix(datasets, {n: pcfg for n in names}, **ctx.build_kwargs(names))
    rows = evaluation.delta_table(within, matrix)
    h = ctx.h.cross()
    write_text(ctx.out / "cross" / "matrix.csv", ctx.header("cross-matrix", h), evaluation.delta_table_csv(rows))
    write_text(ctx.out / "cross" / "matrix.md", ctx.header("cross-matrix", h), evaluation.delta_table_markdown(rows))


def cmd_explain(ctx: Context, k: int = 15) -> None:
    names = [d.name for d in ctx.cfg.datasets]
    h = ctx.h.explain()
    datasets = {n: ctx.comments(n) for n in names}
    parts = []
    for n in names:
        path = require(ctx.ds_dir(n) / "model.json", ctx.h.model(n), "train")
        pipe, pcfg, _ = load_pipeline(path, lexicons=ctx.lexicons)
        if pcfg.representation != "bow" or pcfg.classifier != "logreg":
            raise UnsupportedModelError("explain supports bag-of-words + logistic-regression models only")
        for target in names:
            t = explain.top_tokens(pipe, datasets[n].comments, datasets[target].comments, k)
            write_text(ctx.out / "explain" / f"{n}-on-{target}.csv", ctx.header("explain", h),
                       explain.top_tokens_csv(t))
            parts.append(explain.top_tokens_markdown(t, f"{n} model on {target}"))
    write_text(ctx.out / "explain" / "summary.md", ctx.header("explain", h), "\n".join(parts))


def cmd_report(ctx: Context) -> None:
    names = [d.name for d in ctx.cfg.datasets]
    sections = ["# Usefulness report", ""]
    for n in names:
        path = require(ctx.ds_dir(n) / "eval.md", ctx.h.evaluate(n), "eval")
        sections.append(strip_header(path.read_text(encoding="utf-8")))
    optional = [
        ("Feature analysis (within project)", ctx.out / "analysis" / "within.csv", ctx.h.analyze()),
        ("Feature analysis (across projects)", ctx.out / "analysis" / "cross.csv", ctx.h.analyze()),
        ("Cross-project matrix", ctx.out / "cross" / "matrix.md", ctx.h.cross() if len(names) > 1 else None),
        ("Explanations", ctx.out / "explain" / "summary.md", ctx.h.explain()),
    ]
    for title, path, h in optional:
        meta = read_header(path) if path.is_file() else None
        if h is None or meta is None or meta.get("config_hash") != h:
            sections += [f"## {title}", "", "_not produced for this configuration_", ""]
            continue
        body = strip_header(path.read_text(encoding="utf-8"))
        if path.suffix == ".csv":
            body = _csv_to_markdown(body)
        sections += [f"## {title}", "", body]
    write_text(ctx.out / "report" / "report.md", ctx.header("report", ctx.h.report()), "\n".join(sections))


def _csv_to_markdown(text: str) -> str:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        return ""
    lines = ["| " + " | ".join(rows[0]) + " |", "|---" * len(rows[0]) + "|"]
    lines += ["| " + " | ".join(r) + " |" for r in rows[1:]]
    return "\n".join(lines) + "\n"


COMMANDS: dict[str, Callable[[Context], None]] = {
    "ingest": cmd_ingest,
    "featurize": cmd_featurize,
    "analyze": cmd_analyze,
    "select": cmd_select,
    "train": cmd_train,
    "eval": cmd_eval,
    "cross": cmd_cross,
    "explain": cmd_explain,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI run configuration")
    common.add_argument("--dataset", action="append",
                        help="NAME=PATH to define a dataset, or NAME to restrict to a configured one (repeatable)")
    common.add_argument("--seed", type=int)
    common.add_argument("--folds", type=int)
    common.add_argument("--representation", choices=("features", "bow", "embeddings"))
    common.add_argument("--classifier", choices=("logreg", "gnb", "rf", "majority"))
    common.add_argument("--feature-set", dest="feature_set")
    common.add_argument("--out")
    common.add_argument("-v", "--verbose", action="store_true")
    p = argparse.ArgumentParser(prog="crc-usefulness", description="Code review comment usefulness pipeline")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config, {
            "dataset": args.dataset, "seed": args.seed, "folds": args.folds,
            "representation": args.representation, "classifier": args.classifier,
            "feature_set": args.feature_set, "out": args.out,
        })
        COMMANDS[args.command](Context(cfg))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except PipelineError as exc:
        print(f"pipeline error: {exc}", file=sys.stderr)
        return EXIT_PIPELINE
    except CRCError as exc:  # pragma: no cover - every subclass is mapped above
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PIPELINE
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
