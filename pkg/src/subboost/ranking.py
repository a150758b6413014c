"""Gradient-boosted tree ranker trained with listwise pairwise gradients.

Each boosting round computes per-query pairwise gradients weighted by the
NDCG@k swap delta, fits an exact greedy regression tree to them, and adds the
tree with shrinkage. Everything is deterministic: split ties break by lowest
feature index then lowest threshold, and ranking ties break by product id.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .types import ConfigError, DataError, FeatureVector, ProductId, QueryJudgment

logger = logging.getLogger(__name__)

SIGMA = 1.0  # pairwise logistic steepness


@dataclass(frozen=True)
class TrainConfig:
    num_trees: int = 200
    max_depth: int = 4
    learning_rate: float = 0.1
    min_leaf_samples: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        if self.num_trees < 0:
            raise ConfigError("num_trees must be >= 0")
        if self.max_depth < 1 or self.min_leaf_samples < 1:
            raise ConfigError("max_depth and min_leaf_samples must be >= 1")
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be positive")

    def to_record(self) -> dict:
        return {"num_trees": self.num_trees, "max_depth": self.max_depth,
                "learning_rate": self.learning_rate,
                "min_leaf_samples": self.min_leaf_samples, "seed": self.seed}

    @classmethod
    def from_record(cls, rec: Mapping) -> "TrainConfig":
        return cls(num_trees=int(rec["num_trees"]), max_depth=int(rec["max_depth"]),
                   learning_rate=float(rec["learning_rate"]),
                   min_leaf_samples=int(rec["min_leaf_samples"]),
                   seed=int(rec["seed"]))


@dataclass(frozen=True)
class RegressionTree:
    """Flat node arrays; `feature` < 0 marks a leaf whose prediction is `value`."""

    feature: tuple[int, ...]
    threshold: tuple[float, ...]
    left: tuple[int, ...]
    right: tuple[int, ...]
    value: tuple[float, ...]
    max_depth: int

    def predict(self, X: np.ndarray) -> np.ndarray:
        feature = np.asarray(self.feature)
        threshold = np.asarray(self.threshold)
        left = np.asarray(self.left)
        right = np.asarray(self.right)
        value = np.asarray(self.value)
        idx = np.zeros(len(X), dtype=np.intp)
        for _ in range(self.max_depth + 1):
            feat = feature[idx]
            internal = feat >= 0
            if not internal.any():
                break
            col = np.where(internal, feat, 0)
            go_left = X[np.arange(len(X)), col] <= threshold[idx]
            idx = np.where(internal, np.where(go_left, left[idx], right[idx]), idx)
        return value[idx]

    def to_record(self) -> dict:
        return {"feature": list(self.feature), "threshold": list(self.threshold),
                "left": list(self.left), "right": list(self.right),
                "value": list(self.value), "max_depth": self.max_depth}

    @classmethod
    def from_record(cls, rec: Mapping) -> "RegressionTree":
        return cls(feature=tuple(int(f) for f in rec["feature"]),
                   threshold=tuple(float(t) for t in rec["threshold"]),
                   left=tuple(int(i) for i in rec["left"]),
                   right=tuple(int(i) for i in rec["right"]),
                   value=tuple(float(v) for v in rec["value"]),
                   max_depth=int(rec["max_depth"]))


def _best_split(X: np.ndarray, g: np.ndarray, rows: np.ndarray, min_leaf: int):
    """Exact greedy variance-reduction split over all features and thresholds.

    Returns (feature, threshold) or None. Ties keep the lowest feature index,
    then the lowest threshold (features and thresholds scanned ascending with
    strict improvement).
    """
    n = len(rows)
    targets = g[rows]
    total_all = float(targets.sum())
    best_gain = total_all**2 / n  # no-split baseline; a split must beat it
    best: tuple[int, float] | None = None
    for f in range(X.shape[1]):
        v = X[rows, f]
        order = np.argsort(v, kind="stable")
        sv = v[order]
        sg = targets[order]
        prefix = np.cumsum(sg)
        total = prefix[-1]
        i = np.arange(n - 1)
        valid = (sv[:-1] < sv[1:]) & (i + 1 >= min_leaf) & (n - i - 1 >= min_leaf)
        if not valid.any():
            continue
        left_n = (i + 1)[valid]
        left_sum = prefix[:-1][valid]
        gain = left_sum**2 / left_n + (total - left_sum) ** 2 / (n - left_n)
        k = int(np.argmax(gain))  # first max: lowest threshold within the feature
        if gain[k] > best_gain:
            best_gain = float(gain[k])
            pos = i[valid][k]
            best = (f, float((sv[pos] + sv[pos + 1]) / 2.0))
    return best


def fit_regression_tree(
    X: np.ndarray, g: np.ndarray, max_depth: int, min_leaf_samples: int
) -> RegressionTree:
    """Depth-limited least-squares tree on gradient targets; leaf = mean target."""
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    value: list[float] = []

    def new_node() -> int:
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(0.0)
        return len(feature) - 1

    def build(rows: np.ndarray, depth: int) -> int:
        node = new_node()
        targets = g[rows]
        value[node] = float(targets.mean())
        if depth >= max_depth or len(rows) < 2 * min_leaf_samples:
            return node
        split = _best_split(X, g, rows, min_leaf_samples)
        if split is None:
            return node
        f, t = split
        mask = X[rows, f] <= t
        feature[node] = f
        threshold[node] = t
        left[node] = build(rows[mask], depth + 1)
        right[node] = build(rows[~mask], depth + 1)
        return node

    build(np.arange(len(g), dtype=np.intp), 0)
    return RegressionTree(feature=tuple(feature), threshold=tuple(threshold),
                          left=tuple(left), right=tuple(right),
                          value=tuple(value), max_depth=max_depth)


# -- metrics ------------------------------------------------------------

def dcg_at_k(labels_ranked: Sequence[int], k: int) -> float:
    """Gain 2**label - 1, discount 1/log2(position + 1), positions 1-based."""
    return sum((2.0**lab - 1.0) / math.log2(i + 2.0)
               for i, lab in enumerate(labels_ranked[:k]))


def ndcg_at_k(labels_ranked: Sequence[int], k: int) -> float:
    """NDCG@k of labels in ranked order; 1.0 when the ideal DCG is zero."""
    if k < 1:
        raise ConfigError("k must be >= 1")
    ideal = dcg_at_k(sorted(labels_ranked, reverse=True), k)
    if ideal == 0.0:
        return 1.0
    return dcg_at_k(labels_ranked, k) / ideal


def lambda_gradients(scores: Sequence[float], labels: Sequence[int], k: int) -> np.ndarray:
    """Pairwise gradients weighted by |NDCG@k swap delta|.

    Positive gradient means the candidate should move up. A query with fewer
    than two candidates or an all-zero label set yields zero gradients
    (callers skip it).
    """
    s = np.asarray(scores, dtype=np.float64)
    labs = np.asarray(labels, dtype=np.float64)
    n = len(s)
    grad = np.zeros(n)
    if n < 2:
        return grad
    ideal = dcg_at_k(sorted(labels, reverse=True), k)
    if ideal == 0.0:
        return grad

    # Current 1-based positions: descending score, stable in input order.
    order = np.argsort(-s, kind="stable")
    pos = np.empty(n, dtype=np.intp)
    pos[order] = np.arange(1, n + 1)
    discount = np.where(pos <= k, 1.0 / np.log2(pos + 1.0), 0.0)
    gain = 2.0**labs - 1.0

    label_diff = labs[:, None] - labs[None, :]
    more_relevant = label_diff > 0
    if not more_relevant.any():
        return grad
    delta = (np.abs(gain[:, None] - gain[None, :])
             * np.abs(discount[:, None] - discount[None, :]) / ideal)
    score_diff = s[:, None] - s[None, :]
    rho = SIGMA / (1.0 + np.exp(SIGMA * score_diff)) * delta
    contrib = np.where(more_relevant, rho, 0.0)
    grad = contrib.sum(axis=1) - contrib.sum(axis=0)
    return grad


# -- model --------------------------------------------------------------

@dataclass(frozen=True)
class RankerModel:
    trees: tuple[RegressionTree, ...]
    learning_rate: float
    feature_schema: tuple[str, ...]
    k_for_ndcg: int = 10

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        out = np.zeros(len(X))
        for tree in self.trees:
            out += self.learning_rate * tree.predict(X)
        return out

    def to_record(self) -> dict:
        return {
            "learning_rate": self.learning_rate,
            "feature_schema": list(self.feature_schema),
            "k_for_ndcg": self.k_for_ndcg,
            "trees": [t.to_record() for t in self.trees],
        }

    @classmethod
    def from_record(cls, rec: Mapping) -> "RankerModel":
        return cls(trees=tuple(RegressionTree.from_record(t) for t in rec["trees"]),
                   learning_rate=float(rec["learning_rate"]),
                   feature_schema=tuple(rec["feature_schema"]),
                   k_for_ndcg=int(rec["k_for_ndcg"]))


def _feature_matrix(
    schema: tuple[str, ...],
    candidates: Sequence[tuple[ProductId, FeatureVector]],
) -> np.ndarray:
    rows = []
    for pid, fv in candidates:
        if fv.schema != schema:
            raise DataError(f"feature schema mismatch for {pid}: "
                            f"{fv.schema} != {schema}")
        rows.append(fv.values)
    return np.asarray(rows, dtype=np.float64)


def train(
    judgments: Sequence[QueryJudgment],
    features: Mapping[tuple[str, ProductId], FeatureVector],
    cfg: TrainConfig,
) -> RankerModel:
    """Boosting loop over pairwise gradients; deterministic given the config."""
    missing = [(j.query, pid) for j in judgments for pid in j.candidates
               if (j.query, pid) not in features]
    if missing:
        raise DataError(f"missing feature vectors for {len(missing)} "
                        f"judged candidates, first: {missing[:3]}")
    if not judgments:
        raise DataError("no training queries")

    schema = features[(judgments[0].query, judgments[0].candidates[0])].schema
    slices: list[tuple[int, int]] = []
    blocks: list[np.ndarray] = []
    labels: list[np.ndarray] = []
    start = 0
    skipped = 0
    for j in judgments:
        X_q = _feature_matrix(schema, [(pid, features[(j.query, pid)])
                                       for pid in j.candidates])
        if len(j.candidates) < 2 or not any(j.labels):
            skipped += 1  # contributes no gradients but still gets scored
        blocks.append(X_q)
        labels.append(np.asarray(j.labels, dtype=np.intp))
        slices.append((start, start + len(j.candidates)))
        start += len(j.candidates)
    if skipped:
        logger.info("train: %d queries contribute no gradients", skipped)
    if skipped == len(judgments):
        raise DataError("no trainable queries (every query has all-zero labels)")

    X = np.vstack(blocks)
    k = 10
    scores = np.zeros(len(X))
    trees: list[RegressionTree] = []
    for _ in range(cfg.num_trees):
        grad = np.zeros(len(X))
        for (lo, hi), labs in zip(slices, labels):
            grad[lo:hi] = lambda_gradients(scores[lo:hi], labs, k)
        tree = fit_regression_tree(X, grad, cfg.max_depth, cfg.min_leaf_samples)
        scores += cfg.learning_rate * tree.predict(X)
        trees.append(tree)
    return RankerModel(trees=tuple(trees), learning_rate=cfg.learning_rate,
                       feature_schema=schema, k_for_ndcg=k)


def score(
    model: RankerModel,
    candidates: Sequence[tuple[ProductId, FeatureVector]],
) -> tuple[list[float], list[ProductId]]:
    """Per-candidate scores plus the ranked id list (descending, ties by id)."""
    X = _feature_matrix(model.feature_schema, candidates)
    raw = model.score_matrix(X)
    ranked = [pid for _, pid in
              sorted(((float(s), pid) for s, (pid, _) in zip(raw, candidates)),
                     key=lambda t: (-t[0], t[1]))]
    return [float(s) for s in raw], ranked


def rank_judgment(
    model: RankerModel,
    judgment: QueryJudgment,
    features: Mapping[tuple[str, ProductId], FeatureVector],
) -> list[ProductId]:
    _, ranked = score(model, [(pid, features[(judgment.query, pid)])
                              for pid in judgment.candidates])
    return ranked


def mean_ndcg(
    model: RankerModel,
    judgments: Sequence[QueryJudgment],
    features: Mapping[tuple[str, ProductId], FeatureVector],
    k: int = 10,
) -> float:
    """Mean NDCG@k of the model's rankings across queries."""
    total = 0.0
    for j in judgments:
        ranked = rank_judgment(model, j, features)
        label_of = dict(zip(j.candidates, j.labels))
        total += ndcg_at_k([label_of[pid] for pid in ranked], k)
    return total / len(judgments)


def partial_dependence(
    model: RankerModel,
    feature_name: str,
    grid: Sequence[float],
    background: Sequence[FeatureVector],
) -> list[tuple[float, float]]:
    """Mean model score over background vectors as one feature sweeps the grid."""
    if feature_name not in model.feature_schema:
        raise ConfigError(f"feature {feature_name!r} not in model schema")
    if not background:
        raise DataError("background must be nonempty")
    col = model.feature_schema.index(feature_name)
    X = np.asarray([fv.values for fv in background], dtype=np.float64)
    if X.shape[1] != len(model.feature_schema):
        raise DataError("background vectors do not match model schema")
    out = []
    for v in grid:
        X_mod = X.copy()
        X_mod[:, col] = v
        out.append((float(v), float(model.score_matrix(X_mod).mean())))
    return out
