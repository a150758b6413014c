"""Two-stage substitute discovery on a simulated catalog.

Generates a small marketplace with ground-truth clusters, embeds titles into
hashed-trigram vectors, retrieves cosine neighbors, trains the pair
classifier, applies the filters, and scores the final lookup table against
the ground truth.
"""

import numpy as np

from subboost import SimConfig, evaluate_substitutes, generate
from subboost.pipeline import _classifier_training_pairs
from subboost.substitutes import (
    all_knn_candidates,
    build_lookup_table,
    embed_catalog,
    raw_knn_table,
    train_pair_classifier,
)

cfg = SimConfig(seed=3, num_products=400, num_categories=10, num_queries=50,
                events_per_day=600)
catalog, events, judgments, truth = generate(cfg)
by_id = {p.id: p for p in catalog}
print(f"catalog: {len(catalog)} products, {len(truth.clusters)} true clusters")

embeddings = embed_catalog(catalog, dim=256)
seed = truth.clusters[0][0]
print(f"\nseed product: {by_id[seed].title!r} [{by_id[seed].category}]")
pools = all_knn_candidates(embeddings, k=25)
print("top-5 cosine neighbors:")
cluster_of = truth.cluster_of()
for pair in pools[seed][:5]:
    marker = "same cluster" if cluster_of[pair.candidate] == cluster_of[seed] else "-"
    print(f"  cos {pair.cosine:.3f}  {by_id[pair.candidate].title!r:46s} {marker}")

pairs = _classifier_training_pairs(catalog, pools, truth)
positives = sum(lab for _, lab in pairs)
print(f"\nclassifier training pairs: {len(pairs)} ({positives} positive)")
classifier = train_pair_classifier(pairs, embeddings, epochs=150,
                                   learning_rate=2.0, target_precision=0.8)
print(f"calibrated threshold {classifier.threshold:.3f} "
      f"(fallback={classifier.threshold_fallback}); "
      f"final log-loss {classifier.loss_history[-1]:.4f}")

table = build_lookup_table(catalog, embeddings, classifier, k=25,
                           max_substitutes=10)
raw = raw_knn_table(embeddings, max_substitutes=10)
precision, recall = evaluate_substitutes(table, truth, 10)
raw_precision, raw_recall = evaluate_substitutes(raw, truth, 10)
print(f"\nraw kNN table:   precision {raw_precision:.3f}  recall {raw_recall:.3f}")
print(f"filtered table:  precision {precision:.3f}  recall {recall:.3f}")

sizes = [len(table[pid].substitutes) for pid in sorted(truth.cold_start_set)]
print(f"mean substitutes per cold-start product: {np.mean(sizes):.2f}")
print("\nsubstitutes kept for the seed product:")
for sub, score in table[seed].substitutes:
    print(f"  score {score:.3f}  {by_id[sub].title!r}")
