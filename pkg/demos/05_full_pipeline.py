"""End-to-end run: simulate, discover substitutes, boost, train, evaluate.

Drives the file-based pipeline exactly like `subboost run-all`, then reads
the artifacts back to show the comparison table and the run manifest.
Everything lands under demos/output/ and reruns reproduce identical digests.
"""

from pathlib import Path

from subboost import io
from subboost.pipeline import PipelineConfig, run_pipeline
from subboost.ranking import TrainConfig
from subboost.simulate import SimConfig

out_dir = Path(__file__).parent / "output" / "full-pipeline"
cfg = PipelineConfig(
    out_dir=str(out_dir),
    sim=SimConfig(seed=11, num_products=600, num_categories=12,
                  num_queries=150, events_per_day=2400, horizon_days=20.0),
    strategies=("mean", "max", "attention"),
    train=TrainConfig(num_trees=80, seed=11),
)

print(f"running the full pipeline into {out_dir} ...")
manifest = run_pipeline(cfg)
for name, seconds in manifest.stages:
    print(f"  {name:22s} {seconds:6.2f}s")
print(f"config hash: {manifest.config_hash[:16]}...  "
      f"({len(manifest.outputs)} artifacts digested)")

substitutes = io.read_json(out_dir / "substitute_report.json")
print(f"\nsubstitute table: precision {substitutes['precision']:.3f} "
      f"recall {substitutes['recall']:.3f} "
      f"(raw kNN precision {substitutes['raw_knn_precision']:.3f})")

print("\nheld-out ranking quality vs the baseline model:")
evaluation = io.read_json(out_dir / "evaluation.json")
header = f"{'model':10s} {'overall':>8s} {'delta':>8s} {'cold':>8s} {'delta':>8s} {'share':>7s}"
print(header)
order = ["baseline"] + [n for n in evaluation if n != "baseline"]
for name in order:
    row = evaluation[name]
    print(f"{name:10s} {row['overall_ndcg']:8.4f} {row['overall_delta_rel']:+8.2%} "
          f"{row['cold_ndcg']:8.4f} {row['cold_delta_rel']:+8.2%} "
          f"{row['cold_share']:7.4f}")

print("\nreport artifacts:")
for path in sorted((out_dir / "report").iterdir()):
    print(f"  {path.relative_to(out_dir.parent)}")
print("\nrerun this script: the digests in outputs.sha256 will not change.")
