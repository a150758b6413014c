"""File-driven pipeline: simulate -> substitutes -> features -> boost -> train -> report.

Each stage reads its inputs from the run directory and writes its outputs
there, so any stage can be rerun in isolation from cached upstream artifacts.
`run_pipeline` chains all stages and records a manifest with the resolved
config hash, stage timings, and a content digest for every written file.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import io
from .boosting import AggregationStrategy, boost_all
from .features import DecayConfig, FeatureSnapshot, build_snapshot
from .ranking import (
    RankerModel,
    TrainConfig,
    partial_dependence,
    rank_judgment,
    train,
)
from .simulate import (
    GroundTruth,
    SimConfig,
    discoverability_report,
    evaluate_substitutes,
    generate,
)
from .substitutes import (
    CandidatePair,
    all_knn_candidates,
    build_lookup_table,
    embed_catalog,
    raw_knn_table,
    table_from_records,
    table_to_records,
    train_pair_classifier,
)
from .types import (
    ConfigError,
    DataError,
    FeatureVector,
    Product,
    ProductId,
    QueryJudgment,
)

BASE_SCHEMA = ("text_match", "category_match", "price_score", "rating", "sv")
BOOSTED_FEATURE = "sv_subs"

HISTOGRAM_BINS = 20
PD_GRID_POINTS = 21
PD_BACKGROUND_LIMIT = 400


@dataclass(frozen=True)
class PipelineConfig:
    out_dir: str = "runs/default"
    sim: SimConfig = SimConfig()
    decay: DecayConfig = DecayConfig()
    embedding_dim: int = 256
    knn_k: int = 25
    max_substitutes: int = 10
    target_precision: float = 0.8
    required_attrs: tuple[str, ...] = ()
    classifier_epochs: int = 200
    classifier_learning_rate: float = 2.0
    strategies: tuple[str, ...] = ("mean", "max", "attention")
    train: TrainConfig = TrainConfig()

    def __post_init__(self) -> None:
        for name in self.strategies:
            AggregationStrategy.parse(name)  # fail fast on unknown names

    def to_record(self) -> dict:
        return {
            "out_dir": self.out_dir,
            "sim": self.sim.to_record(),
            "decay": self.decay.to_record(),
            "substitutes": {
                "embedding_dim": self.embedding_dim,
                "k": self.knn_k,
                "max_substitutes": self.max_substitutes,
                "target_precision": self.target_precision,
                "required_attrs": list(self.required_attrs),
                "classifier_epochs": self.classifier_epochs,
                "classifier_learning_rate": self.classifier_learning_rate,
            },
            "strategies": list(self.strategies),
            "train": self.train.to_record(),
        }

    @classmethod
    def from_record(cls, rec: Mapping) -> "PipelineConfig":
        subs = rec.get("substitutes", {})
        return cls(
            out_dir=rec.get("out_dir", "runs/default"),
            sim=SimConfig.from_record(rec.get("sim", {})),
            decay=DecayConfig.from_record(rec["decay"]) if "decay" in rec else DecayConfig(),
            embedding_dim=int(subs.get("embedding_dim", 256)),
            knn_k=int(subs.get("k", 25)),
            max_substitutes=int(subs.get("max_substitutes", 10)),
            target_precision=float(subs.get("target_precision", 0.8)),
            required_attrs=tuple(subs.get("required_attrs", ())),
            classifier_epochs=int(subs.get("classifier_epochs", 200)),
            classifier_learning_rate=float(subs.get("classifier_learning_rate", 2.0)),
            strategies=tuple(rec.get("strategies", ("mean", "max", "attention"))),
            train=(TrainConfig.from_record(rec["train"])
                   if "train" in rec else TrainConfig()),
        )

    @classmethod
    def from_file(cls, path: str | Path, seed: int | None = None,
                  out_dir: str | None = None) -> "PipelineConfig":
        try:
            rec = io.read_json(path)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except ValueError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
        cfg = cls.from_record(rec)
        return cfg.with_overrides(seed=seed, out_dir=out_dir)

    def with_overrides(self, seed: int | None = None,
                       out_dir: str | None = None) -> "PipelineConfig":
        cfg = self
        if seed is not None:
            cfg = replace(cfg, sim=replace(cfg.sim, seed=seed),
                          train=replace(cfg.train, seed=seed))
        if out_dir is not None:
            cfg = replace(cfg, out_dir=out_dir)
        return cfg

    @property
    def config_hash(self) -> str:
        record = self.to_record()
        record.pop("out_dir")  # location is not part of the experiment identity
        return io.sha256_of_text(io.canonical_json(record))


# -- artifact paths -------------------------------------------------------

def _paths(out_dir: str | Path) -> dict[str, Path]:
    out = Path(out_dir)
    return {
        "catalog": out / "catalog.jsonl",
        "events": out / "events.jsonl",
        "judgments": out / "judgments.jsonl",
        "truth": out / "truth.json",
        "table": out / "substitute_table.jsonl",
        "substitute_report": out / "substitute_report.json",
        "snapshot": out / "snapshot.json",
        "manifest": out / "run_manifest.json",
        "digests": out / "outputs.sha256",
        "evaluation": out / "evaluation.json",
        "evaluation_csv": out / "evaluation.csv",
    }


def boosted_path(out_dir: str | Path, strategy: str) -> Path:
    return Path(out_dir) / f"boosted_{strategy}.json"


def model_path(out_dir: str | Path, name: str) -> Path:
    return Path(out_dir) / f"model_{name}.json"


def features_path(out_dir: str | Path, name: str) -> Path:
    return Path(out_dir) / f"features_{name}.jsonl"


def _require(path: Path, produced_by: str) -> Path:
    if not path.exists():
        raise DataError(f"missing artifact {path.name}; rerun the "
                        f"{produced_by!r} stage first")
    return path


# -- feature assembly -----------------------------------------------------

def _modal_category(catalog: Mapping[ProductId, Product],
                    candidates: Sequence[ProductId]) -> str:
    counts = Counter(catalog[pid].category for pid in candidates)
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0][0]


def assemble_features(
    catalog: Sequence[Product],
    judgments: Sequence[QueryJudgment],
    snapshot: FeatureSnapshot,
    boosted: FeatureSnapshot | None = None,
) -> dict[tuple[str, ProductId], FeatureVector]:
    """Static query-product features plus the behavioral column.

    Baseline vectors carry raw sv; boosted vectors carry sv_subs in its place
    (sv_subs is the adjusted behavioral feature, max(aggregate, own), so it
    already dominates raw sv pointwise).
    """
    by_id = {p.id: p for p in catalog}
    if boosted is not None:
        schema = BASE_SCHEMA[:-1] + (BOOSTED_FEATURE,)
        behavioral = boosted.sv_subs or {}
    else:
        schema = BASE_SCHEMA
        behavioral = snapshot.sv
    features: dict[tuple[str, ProductId], FeatureVector] = {}
    for j in judgments:
        query_tokens = set(j.query.split())
        modal = _modal_category(by_id, j.candidates)
        for pid in j.candidates:
            p = by_id[pid]
            title_tokens = set(p.title.split())
            text_match = (len(query_tokens & title_tokens) / len(query_tokens)
                          if query_tokens else 0.0)
            price = p.attributes.get("price")
            if price is None:
                price_score = 0.0  # missing raw data encodes as zero
            else:
                # Coarse buckets keep a noise feature from identifying products.
                price_score = max(0.0, 1.0 - round(float(price) / 5.0) * 5.0 / 100.0)
            values = (
                text_match,
                1.0 if p.category == modal else 0.0,
                price_score,
                float(p.attributes.get("rating", 0.0)),
                behavioral.get(pid, 0.0),
            )
            features[(j.query, pid)] = FeatureVector(values=values, schema=schema)
    return features


def split_judgments(
    judgments: Sequence[QueryJudgment],
) -> tuple[list[QueryJudgment], list[QueryJudgment]]:
    """Deterministic 80/20 train/eval query split (every 5th query held out)."""
    train_set = [j for i, j in enumerate(judgments) if i % 5 != 4]
    eval_set = [j for i, j in enumerate(judgments) if i % 5 == 4]
    return train_set, eval_set


def write_features(path: Path,
                   features: Mapping[tuple[str, ProductId], FeatureVector],
                   judgments: Sequence[QueryJudgment]) -> None:
    records = []
    for j in judgments:
        for pid in j.candidates:
            fv = features[(j.query, pid)]
            records.append({"query": j.query, "product": pid,
                            "schema": list(fv.schema),
                            "values": list(fv.values)})
    io.write_jsonl(path, records)


def read_features(path: Path) -> dict[tuple[str, ProductId], FeatureVector]:
    out: dict[tuple[str, ProductId], FeatureVector] = {}
    for rec in io.read_jsonl(path):
        out[(rec["query"], rec["product"])] = FeatureVector(
            values=tuple(float(v) for v in rec["values"]),
            schema=tuple(rec["schema"]))
    return out


# -- stages ---------------------------------------------------------------

def stage_simulate(cfg: PipelineConfig) -> list[Path]:
    paths = _paths(cfg.out_dir)
    catalog, events, judgments, truth = generate(cfg.sim)
    io.write_catalog(paths["catalog"], catalog)
    io.write_events(paths["events"], events)
    io.write_judgments(paths["judgments"], judgments)
    io.write_json(paths["truth"], truth.to_record())
    return [paths["catalog"], paths["events"], paths["judgments"], paths["truth"]]


def _classifier_training_pairs(
    catalog: Sequence[Product],
    pools: Mapping[ProductId, list[CandidatePair]],
    truth: GroundTruth,
) -> list[tuple[CandidatePair, int]]:
    """Same-category kNN pairs labeled by ground-truth cluster co-membership.

    Category equality is a hard precondition of substitutability, so the
    classifier is trained and calibrated on the distribution it will actually
    adjudicate after the always-on category filter.
    """
    category_of = {p.id: p.category for p in catalog}
    cluster_of = truth.cluster_of()
    pairs: list[tuple[CandidatePair, int]] = []
    for seed in sorted(pools):
        for pair in pools[seed]:
            if category_of[pair.seed] != category_of[pair.candidate]:
                continue
            label = int(cluster_of.get(pair.seed) == cluster_of.get(pair.candidate))
            pairs.append((pair, label))
    return pairs


def stage_build_substitutes(cfg: PipelineConfig) -> list[Path]:
    paths = _paths(cfg.out_dir)
    catalog = io.read_catalog(_require(paths["catalog"], "simulate"))
    truth = GroundTruth.from_record(io.read_json(_require(paths["truth"], "simulate")))

    embeddings = embed_catalog(catalog, cfg.embedding_dim)
    pools = all_knn_candidates(embeddings, cfg.knn_k)
    pairs = _classifier_training_pairs(catalog, pools, truth)
    classifier = train_pair_classifier(
        pairs, embeddings, epochs=cfg.classifier_epochs,
        learning_rate=cfg.classifier_learning_rate,
        target_precision=cfg.target_precision)
    table = build_lookup_table(catalog, embeddings, classifier, k=cfg.knn_k,
                               max_substitutes=cfg.max_substitutes,
                               required_attrs=cfg.required_attrs)
    raw = raw_knn_table(embeddings, cfg.max_substitutes)

    precision, recall = evaluate_substitutes(table, truth, cfg.max_substitutes)
    raw_precision, raw_recall = evaluate_substitutes(raw, truth, cfg.max_substitutes)
    cold_sizes = [len(table[pid].substitutes) for pid in sorted(truth.cold_start_set)
                  if pid in table]
    report = {
        "threshold": classifier.threshold,
        "threshold_fallback": classifier.threshold_fallback,
        "final_loss": classifier.loss_history[-1],
        "training_pairs": len(pairs),
        "positive_rate": (sum(lab for _, lab in pairs) / len(pairs)) if pairs else 0.0,
        "precision": precision,
        "recall": recall,
        "raw_knn_precision": raw_precision,
        "raw_knn_recall": raw_recall,
        "mean_substitutes_cold_start": (float(np.mean(cold_sizes))
                                        if cold_sizes else 0.0),
    }
    io.write_jsonl(paths["table"], table_to_records(table))
    io.write_json(paths["substitute_report"], report)
    return [paths["table"], paths["substitute_report"]]


def stage_compute_features(cfg: PipelineConfig) -> list[Path]:
    paths = _paths(cfg.out_dir)
    catalog = io.read_catalog(_require(paths["catalog"], "simulate"))
    events = io.read_events(_require(paths["events"], "simulate"))
    snapshot = build_snapshot(events, catalog, cfg.sim.horizon_end, cfg.decay)
    io.write_json(paths["snapshot"], snapshot.to_record())
    return [paths["snapshot"]]


def stage_boost(cfg: PipelineConfig, strategy_name: str) -> list[Path]:
    paths = _paths(cfg.out_dir)
    strategy = AggregationStrategy.parse(strategy_name)
    snapshot = FeatureSnapshot.from_record(
        io.read_json(_require(paths["snapshot"], "compute-features")))
    table = table_from_records(io.read_jsonl(_require(paths["table"],
                                                      "build-substitutes")))
    embeddings = None
    if strategy.kind == "attention":
        catalog = io.read_catalog(_require(paths["catalog"], "simulate"))
        embeddings = embed_catalog(catalog, cfg.embedding_dim)
    boosted, report = boost_all(snapshot, table, strategy, embeddings)
    out = boosted_path(cfg.out_dir, strategy_name)
    io.write_json(out, boosted.to_record())
    report_path = Path(cfg.out_dir) / f"boost_report_{strategy_name}.json"
    io.write_json(report_path, {
        "strategy": strategy.name,
        "boosted_count": report.boosted_count,
        "unchanged_count": report.unchanged_count,
    })
    return [out, report_path]


def stage_train(cfg: PipelineConfig) -> list[Path]:
    paths = _paths(cfg.out_dir)
    catalog = io.read_catalog(_require(paths["catalog"], "simulate"))
    judgments = io.read_judgments(_require(paths["judgments"], "simulate"))
    snapshot = FeatureSnapshot.from_record(
        io.read_json(_require(paths["snapshot"], "compute-features")))

    train_judgments, _ = split_judgments(judgments)
    written: list[Path] = []
    feats = assemble_features(catalog, judgments, snapshot)
    fpath = features_path(cfg.out_dir, "baseline")
    write_features(fpath, feats, judgments)
    model = train(train_judgments, feats, cfg.train)
    mpath = model_path(cfg.out_dir, "baseline")
    io.write_json(mpath, model_record(model, cfg.train))
    written += [fpath, mpath]

    for name in cfg.strategies:
        boosted = FeatureSnapshot.from_record(
            io.read_json(_require(boosted_path(cfg.out_dir, name), "boost")))
        feats = assemble_features(catalog, judgments, snapshot, boosted)
        fpath = features_path(cfg.out_dir, name)
        write_features(fpath, feats, judgments)
        model = train(train_judgments, feats, cfg.train)
        mpath = model_path(cfg.out_dir, name)
        io.write_json(mpath, model_record(model, cfg.train))
        written += [fpath, mpath]
    return written


def model_record(model: RankerModel, train_cfg: TrainConfig) -> dict:
    """Self-describing model file body: schema, training config, flat trees."""
    record = model.to_record()
    record["train_config"] = train_cfg.to_record()
    return record


def _model_rankings(out_dir: str | Path, name: str,
                    judgments: Sequence[QueryJudgment]) -> dict[str, list[ProductId]]:
    model = RankerModel.from_record(
        io.read_json(_require(model_path(out_dir, name), "train")))
    features = read_features(_require(features_path(out_dir, name), "train"))
    return {j.query: rank_judgment(model, j, features) for j in judgments}


def stage_evaluate(cfg: PipelineConfig) -> list[Path]:
    paths = _paths(cfg.out_dir)
    judgments = io.read_judgments(_require(paths["judgments"], "simulate"))
    truth = GroundTruth.from_record(io.read_json(_require(paths["truth"], "simulate")))
    _, eval_judgments = split_judgments(judgments)

    base_rankings = _model_rankings(cfg.out_dir, "baseline", eval_judgments)
    base_report = discoverability_report(base_rankings, base_rankings, truth)
    results = {
        "baseline": {
            "overall_ndcg": base_report.overall_ndcg_before,
            "cold_ndcg": base_report.cold_ndcg_before,
            "cold_share": base_report.cold_share_before,
            "overall_delta_rel": 0.0,
            "cold_delta_rel": 0.0,
            "eval_queries": len(eval_judgments),
        }
    }
    for name in cfg.strategies:
        rankings = _model_rankings(cfg.out_dir, name, eval_judgments)
        report = discoverability_report(base_rankings, rankings, truth)
        results[name] = {
            "overall_ndcg": report.overall_ndcg_after,
            "cold_ndcg": report.cold_ndcg_after,
            "cold_share": report.cold_share_after,
            "overall_delta_rel": report.overall_delta_rel,
            "cold_delta_rel": report.cold_delta_rel,
            "eval_queries": len(eval_judgments),
        }
    io.write_json(paths["evaluation"], results)
    header = ["model", "overall_ndcg", "overall_delta_rel",
              "cold_ndcg", "cold_delta_rel", "cold_share"]
    rows = [[name,
             f"{res['overall_ndcg']:.6f}", f"{res['overall_delta_rel']:.6f}",
             f"{res['cold_ndcg']:.6f}", f"{res['cold_delta_rel']:.6f}",
             f"{res['cold_share']:.6f}"]
            for name, res in sorted(results.items(),
                                    key=lambda kv: (kv[0] != "baseline", kv[0]))]
    io.write_csv(paths["evaluation_csv"], header, rows)
    return [paths["evaluation"], paths["evaluation_csv"]]


def histogram_table(values_before: Sequence[float], values_after: Sequence[float],
                    bins: int = HISTOGRAM_BINS) -> list[tuple[float, float, int, int]]:
    """Fixed shared bins; returns (lo, hi, count_before, count_after) rows."""
    top = max(max(values_before, default=0.0), max(values_after, default=0.0))
    if top <= 0.0:
        top = 1.0
    edges = np.linspace(0.0, top, bins + 1)
    before, _ = np.histogram(np.asarray(values_before), bins=edges)
    after, _ = np.histogram(np.asarray(values_after), bins=edges)
    return [(float(edges[i]), float(edges[i + 1]), int(before[i]), int(after[i]))
            for i in range(bins)]


def stage_report(cfg: PipelineConfig) -> list[Path]:
    from scipy.stats import spearmanr

    paths = _paths(cfg.out_dir)
    report_dir = Path(cfg.out_dir) / "report"
    snapshot = FeatureSnapshot.from_record(
        io.read_json(_require(paths["snapshot"], "compute-features")))
    evaluation = io.read_json(_require(paths["evaluation"], "evaluate"))
    written: list[Path] = []
    summary: dict[str, dict] = {}

    for name in cfg.strategies:
        boosted = FeatureSnapshot.from_record(
            io.read_json(_require(boosted_path(cfg.out_dir, name), "boost")))
        sv = [snapshot.sv[pid] for pid in sorted(snapshot.sv)]
        sv_subs = [boosted.sv_subs[pid] for pid in sorted(boosted.sv_subs)]
        hist = histogram_table(sv, sv_subs)
        hpath = report_dir / f"histogram_{name}.csv"
        io.write_csv(hpath, ["bin_lo", "bin_hi", "sv_count", "sv_subs_count"],
                     [(f"{lo:.4f}", f"{hi:.4f}", b, a) for lo, hi, b, a in hist])
        written.append(hpath)

        model = RankerModel.from_record(
            io.read_json(_require(model_path(cfg.out_dir, name), "train")))
        features = read_features(_require(features_path(cfg.out_dir, name), "train"))
        background = [fv for _, fv in sorted(features.items())][:PD_BACKGROUND_LIMIT]
        top = max((fv.get(BOOSTED_FEATURE) for fv in background), default=1.0)
        grid = np.linspace(0.0, max(top, 1.0), PD_GRID_POINTS)
        curve = partial_dependence(model, BOOSTED_FEATURE, [float(g) for g in grid],
                                   background)
        ppath = report_dir / f"partial_dependence_{name}.csv"
        io.write_csv(ppath, ["sv_subs", "mean_score"],
                     [(f"{v:.6f}", f"{s:.6f}") for v, s in curve])
        written.append(ppath)
        rho = float(spearmanr([v for v, _ in curve], [s for _, s in curve]).statistic)
        summary[name] = {"pd_spearman": rho}

    cpath = report_dir / "comparison.csv"
    header = ["model", "overall_ndcg", "overall_delta_rel",
              "cold_ndcg", "cold_delta_rel", "cold_share"]
    rows = [[name,
             f"{res['overall_ndcg']:.6f}", f"{res['overall_delta_rel']:.6f}",
             f"{res['cold_ndcg']:.6f}", f"{res['cold_delta_rel']:.6f}",
             f"{res['cold_share']:.6f}"]
            for name, res in sorted(evaluation.items(),
                                    key=lambda kv: (kv[0] != "baseline", kv[0]))]
    io.write_csv(cpath, header, rows)
    written.append(cpath)

    spath = report_dir / "report.json"
    io.write_json(spath, summary)
    written.append(spath)
    return written


STAGE_ORDER = ("simulate", "build-substitutes", "compute-features", "boost",
               "train", "evaluate", "report")


@dataclass(frozen=True)
class RunManifest:
    config_hash: str
    seed: int
    stages: tuple[tuple[str, float], ...]
    outputs: Mapping[str, str]
    models: tuple[str, ...]

    def to_record(self) -> dict:
        return {
            "config_hash": self.config_hash,
            "seed": self.seed,
            "stages": [{"name": n, "seconds": s} for n, s in self.stages],
            "outputs": dict(sorted(self.outputs.items())),
            "models": list(self.models),
        }


def run_pipeline(cfg: PipelineConfig) -> RunManifest:
    """Execute every stage in order and write the run manifest."""
    paths = _paths(cfg.out_dir)
    written: list[Path] = []
    timings: list[tuple[str, float]] = []

    def run(name: str, fn, *args) -> None:
        t0 = time.perf_counter()
        written.extend(fn(*args))
        timings.append((name, time.perf_counter() - t0))

    run("simulate", stage_simulate, cfg)
    run("build-substitutes", stage_build_substitutes, cfg)
    run("compute-features", stage_compute_features, cfg)
    for name in cfg.strategies:
        run(f"boost[{name}]", stage_boost, cfg, name)
    run("train", stage_train, cfg)
    run("evaluate", stage_evaluate, cfg)
    run("report", stage_report, cfg)

    out = Path(cfg.out_dir)
    outputs = {str(p.relative_to(out)): io.sha256_of_file(p) for p in written}
    manifest = RunManifest(
        config_hash=cfg.config_hash,
        seed=cfg.sim.seed,
        stages=tuple(timings),
        outputs=outputs,
        models=("baseline",) + tuple(cfg.strategies),
    )
    io.write_json(paths["manifest"], manifest.to_record())
    digest_lines = [f"{digest}  {rel}" for rel, digest in sorted(outputs.items())]
    paths["digests"].write_text("\n".join(digest_lines) + "\n", encoding="utf-8")
    return manifest
