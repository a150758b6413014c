"""Command-line entry point.

Subcommands mirror the pipeline stages (simulate, build-substitutes,
compute-features, boost, train, evaluate, report) plus `run-all`. Exit codes:
0 success, 1 configuration error, 2 stage failure (stage named on stderr).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io, pipeline
from .features import DecayConfig, FeatureSnapshot
from .ranking import RankerModel, TrainConfig, mean_ndcg, rank_judgment
from .simulate import GroundTruth, top_k_share
from .types import ConfigError, DataError


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="pipeline config file (JSON)")
    parser.add_argument("--seed", type=int, help="override simulator/training seed")
    parser.add_argument("--out-dir", help="run directory for artifacts")


def _load_config(args: argparse.Namespace) -> pipeline.PipelineConfig:
    if args.config:
        return pipeline.PipelineConfig.from_file(args.config, seed=args.seed,
                                                 out_dir=args.out_dir)
    return pipeline.PipelineConfig().with_overrides(seed=args.seed,
                                                    out_dir=args.out_dir)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subboost",
        description="Substitute-boosted behavioral features for cold-start ranking")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate the synthetic marketplace")
    _common_flags(p)

    p = sub.add_parser("build-substitutes", help="embed, retrieve, classify, filter")
    _common_flags(p)
    p.add_argument("--k", type=int, help="candidate pool size")
    p.add_argument("--max-substitutes", type=int)
    p.add_argument("--target-precision", type=float)
    p.add_argument("--required-attrs",
                   help="comma-separated attribute names, e.g. color,size")

    p = sub.add_parser("compute-features", help="decayed sales velocity snapshot")
    _common_flags(p)
    p.add_argument("--decay-config", help="JSON file overriding decay defaults")

    p = sub.add_parser("boost", help="fill sv_subs from the substitute table")
    _common_flags(p)
    p.add_argument("--strategy", default="mean",
                   help="mean | max | pNN (e.g. p75) | attention")
    p.add_argument("--snapshot", help="input snapshot path")
    p.add_argument("--table", help="substitute table path")
    p.add_argument("--out", help="output snapshot path")

    p = sub.add_parser("train", help="train ranking models")
    _common_flags(p)
    p.add_argument("--judgments", help="judgments file (standalone mode)")
    p.add_argument("--features", help="features file (standalone mode)")
    p.add_argument("--train-config", help="JSON file with training parameters")
    p.add_argument("--out", help="model output path (standalone mode)")

    p = sub.add_parser("evaluate", help="rank quality per segment")
    _common_flags(p)
    p.add_argument("--model", help="model file (single-model mode)")
    p.add_argument("--judgments", help="judgments file")
    p.add_argument("--features", help="features file")
    p.add_argument("--truth", help="ground-truth file (for cold-start segment)")
    p.add_argument("--segment", choices=["all", "cold-start"], default="all")

    p = sub.add_parser("report", help="histograms, partial dependence, comparison")
    _common_flags(p)

    p = sub.add_parser("run-all", help="execute every stage and write the manifest")
    _common_flags(p)
    return parser


def _cmd_build_substitutes(cfg: pipeline.PipelineConfig,
                           args: argparse.Namespace) -> None:
    from dataclasses import replace

    if args.k is not None:
        cfg = replace(cfg, knn_k=args.k)
    if args.max_substitutes is not None:
        cfg = replace(cfg, max_substitutes=args.max_substitutes)
    if args.target_precision is not None:
        cfg = replace(cfg, target_precision=args.target_precision)
    if args.required_attrs is not None:
        attrs = tuple(a for a in args.required_attrs.split(",") if a)
        cfg = replace(cfg, required_attrs=attrs)
    pipeline.stage_build_substitutes(cfg)


def _cmd_compute_features(cfg: pipeline.PipelineConfig,
                          args: argparse.Namespace) -> None:
    from dataclasses import replace

    if args.decay_config:
        try:
            decay = DecayConfig.from_record(io.read_json(args.decay_config))
        except FileNotFoundError:
            raise ConfigError(f"decay config not found: {args.decay_config}") from None
        cfg = replace(cfg, decay=decay)
    pipeline.stage_compute_features(cfg)


def _cmd_boost(cfg: pipeline.PipelineConfig, args: argparse.Namespace) -> None:
    if args.snapshot or args.table or args.out:
        # Explicit-path mode bypasses the run directory layout.
        from .boosting import AggregationStrategy, boost_all
        from .substitutes import embed_catalog, table_from_records

        strategy = AggregationStrategy.parse(args.strategy)
        if not (args.snapshot and args.table and args.out):
            raise ConfigError("boost with explicit paths needs --snapshot, "
                              "--table, and --out together")
        snapshot = FeatureSnapshot.from_record(io.read_json(args.snapshot))
        table = table_from_records(io.read_jsonl(args.table))
        embeddings = None
        if strategy.kind == "attention":
            catalog = io.read_catalog(Path(cfg.out_dir) / "catalog.jsonl")
            embeddings = embed_catalog(catalog, cfg.embedding_dim)
        boosted, _ = boost_all(snapshot, table, strategy, embeddings)
        io.write_json(args.out, boosted.to_record())
        return
    pipeline.stage_boost(cfg, args.strategy)


def _cmd_train(cfg: pipeline.PipelineConfig, args: argparse.Namespace) -> None:
    from .ranking import train

    train_cfg = cfg.train
    if args.train_config:
        train_cfg = TrainConfig.from_record(io.read_json(args.train_config))
    if args.features or args.judgments or args.out:
        if not (args.features and args.judgments and args.out):
            raise ConfigError("standalone train needs --judgments, --features, "
                              "and --out together")
        judgments = io.read_judgments(args.judgments)
        features = pipeline.read_features(Path(args.features))
        model = train(judgments, features, train_cfg)
        io.write_json(args.out, pipeline.model_record(model, train_cfg))
        return
    pipeline.stage_train(cfg)


def _cmd_evaluate(cfg: pipeline.PipelineConfig, args: argparse.Namespace) -> None:
    if not args.model:
        pipeline.stage_evaluate(cfg)
        return
    model_file = Path(args.model)
    run_dir = model_file.parent
    judgments = io.read_judgments(args.judgments or run_dir / "judgments.jsonl")
    features_file = args.features
    if features_file is None:
        # model_<name>.json sits next to features_<name>.jsonl after a run
        name = model_file.stem.removeprefix("model_")
        features_file = run_dir / f"features_{name}.jsonl"
    features = pipeline.read_features(Path(features_file))
    model = RankerModel.from_record(io.read_json(model_file))

    if args.segment == "all":
        value = mean_ndcg(model, judgments, features, k=model.k_for_ndcg)
        print(f"segment=all ndcg@{model.k_for_ndcg}={value:.6f} "
              f"queries={len(judgments)}")
        return
    truth_file = args.truth or run_dir / "truth.json"
    truth = GroundTruth.from_record(io.read_json(truth_file))
    rankings = {j.query: rank_judgment(model, j, features) for j in judgments}
    from .simulate import discoverability_report

    report = discoverability_report(rankings, rankings, truth, k=model.k_for_ndcg)
    share = sum(top_k_share(r, truth.cold_start_set, model.k_for_ndcg)
                for r in rankings.values()) / len(rankings)
    print(f"segment=cold-start ndcg@{model.k_for_ndcg}={report.cold_ndcg_before:.6f} "
          f"top{model.k_for_ndcg}_share={share:.6f} "
          f"cold_queries={report.cold_query_count}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    stage = args.command
    try:
        cfg = _load_config(args)
        if stage == "simulate":
            pipeline.stage_simulate(cfg)
        elif stage == "build-substitutes":
            _cmd_build_substitutes(cfg, args)
        elif stage == "compute-features":
            _cmd_compute_features(cfg, args)
        elif stage == "boost":
            _cmd_boost(cfg, args)
        elif stage == "train":
            _cmd_train(cfg, args)
        elif stage == "evaluate":
            _cmd_evaluate(cfg, args)
        elif stage == "report":
            pipeline.stage_report(cfg)
        elif stage == "run-all":
            manifest = pipeline.run_pipeline(cfg)
            for name, seconds in manifest.stages:
                print(f"{name}: {seconds:.2f}s")
            print(f"manifest: {Path(cfg.out_dir) / 'run_manifest.json'}")
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (DataError, OSError, ValueError) as exc:
        print(f"stage {stage!r} failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
