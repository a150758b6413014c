"""Substitute discovery: embeddings, exhaustive kNN, pair classifier, filters.

The two-stage flow is candidate generation (cosine kNN over deterministic
hashed-trigram embeddings) followed by classification-based filtering with a
calibrated probability threshold and attribute post-filters. Category
equality is always enforced on the final table. Everything here is
deterministic: two runs over identical inputs produce identical tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from hashlib import blake2b
from typing import Iterable, Mapping, Sequence

import numpy as np

from .types import ConfigError, DataError, Product, ProductId

DEFAULT_EMBEDDING_DIM = 256
DEFAULT_K = 25
DEFAULT_MAX_SUBSTITUTES = 10
DEFAULT_TARGET_PRECISION = 0.8

_CATEGORY_WEIGHT = 2.0


@dataclass(frozen=True)
class ProductEmbedding:
    product: ProductId
    vector: np.ndarray  # unit L2 norm, fixed dimension across a catalog


@dataclass(frozen=True)
class CandidatePair:
    seed: ProductId
    candidate: ProductId
    cosine: float
    classifier_score: float | None = None

    def __post_init__(self) -> None:
        if self.seed == self.candidate:
            raise DataError(f"pair with identical seed and candidate {self.seed}")
        if not -1.0 - 1e-9 <= self.cosine <= 1.0 + 1e-9:
            raise DataError(f"cosine {self.cosine} out of [-1, 1]")


@dataclass(frozen=True)
class SubstituteSet:
    """Ordered (product, score) substitutes for a seed, best first."""

    seed: ProductId
    substitutes: tuple[tuple[ProductId, float], ...]

    def __post_init__(self) -> None:
        ids = [pid for pid, _ in self.substitutes]
        if self.seed in ids:
            raise DataError(f"substitute set for {self.seed} contains the seed")
        if len(set(ids)) != len(ids):
            raise DataError(f"substitute set for {self.seed} has duplicates")

    @property
    def ids(self) -> tuple[ProductId, ...]:
        return tuple(pid for pid, _ in self.substitutes)


@dataclass(frozen=True)
class PairClassifier:
    """Linear logistic scorer over [e_seed || e_cand || e_seed - e_cand].

    ``threshold_fallback`` is True when the held-out calibration could not
    reach the target precision and the threshold defaulted to 0.5.
    """

    weights: np.ndarray
    bias: float
    threshold: float
    threshold_fallback: bool = False
    loss_history: tuple[float, ...] = field(default=())

    def score_matrix(self, features: np.ndarray) -> np.ndarray:
        return _sigmoid(features @ self.weights + self.bias)


def _hash_bucket(token: str, dim: int) -> int:
    digest = blake2b(token.encode("utf-8"), digest_size=8, person=b"bucket").digest()
    return int.from_bytes(digest, "big") % dim

def _hash_sign(token: str) -> float:
    digest = blake2b(token.encode("utf-8"), digest_size=1, person=b"sign").digest()
    return 1.0 if digest[0] & 1 else -1.0


def _title_trigrams(title: str) -> list[str]:
    text = title.lower()
    if len(text) < 3:
        return [text] if text else []
    return [text[i:i + 3] for i in range(len(text) - 2)]


def embed_product(product: Product, dim: int = DEFAULT_EMBEDDING_DIM) -> ProductEmbedding:
    """Deterministic unit vector from hashed title trigrams plus a category block."""
    if dim < 8:
        raise ConfigError(f"embedding dim {dim} below minimum 8")
    grams = _title_trigrams(product.title)
    if not grams and not product.category:
        raise DataError(f"product {product.id} has empty title and empty category")
    vec = np.zeros(dim)
    for g in grams:
        vec[_hash_bucket(g, dim)] += _hash_sign(g)
    if product.category:
        token = "category:" + product.category
        vec[_hash_bucket(token, dim)] += _CATEGORY_WEIGHT * _hash_sign(token)
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise DataError(f"product {product.id} hashed to a zero vector")
    return ProductEmbedding(product=product.id, vector=vec / norm)


def embed_catalog(
    catalog: Sequence[Product], dim: int = DEFAULT_EMBEDDING_DIM
) -> dict[ProductId, ProductEmbedding]:
    return {p.id: embed_product(p, dim) for p in catalog}


class _EmbeddingMatrix:
    """Id-sorted dense view of a set of embeddings for batched cosine search."""

    def __init__(self, embeddings: Mapping[ProductId, ProductEmbedding]):
        self.ids = sorted(embeddings)
        self.index = {pid: i for i, pid in enumerate(self.ids)}
        self.matrix = np.stack([embeddings[pid].vector for pid in self.ids])

    def _scores(self, seed_row: int) -> np.ndarray:
        # Elementwise product + per-row reduction: identical vectors get
        # bit-identical scores regardless of row position, which BLAS gemv
        # does not guarantee. Exact ties then break by product id.
        return np.add.reduce(self.matrix * self.matrix[seed_row], axis=1)

    def _rank_row(self, seed_row: int, scores: np.ndarray, k: int) -> list[CandidatePair]:
        # Rows are id-sorted, so a stable argsort on -scores breaks cosine
        # ties by ascending product id exactly.
        order = np.argsort(-scores, kind="stable")
        out: list[CandidatePair] = []
        for i in order:
            if i == seed_row:
                continue
            out.append(CandidatePair(seed=self.ids[seed_row],
                                     candidate=self.ids[i],
                                     cosine=float(scores[i])))
            if len(out) == k:
                break
        return out

    def knn(self, seed: ProductId, k: int) -> list[CandidatePair]:
        row = self.index[seed]
        return self._rank_row(row, self._scores(row), k)

    def knn_all(self, k: int) -> dict[ProductId, list[CandidatePair]]:
        return {pid: self._rank_row(row, self._scores(row), k)
                for row, pid in enumerate(self.ids)}


def knn_candidates(
    seed: ProductId,
    embeddings: Mapping[ProductId, ProductEmbedding],
    k: int,
) -> list[CandidatePair]:
    """Exhaustive top-k cosine neighbors of `seed`, descending, ties by id."""
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    if seed not in embeddings:
        raise DataError(f"seed {seed} has no embedding")
    return _EmbeddingMatrix(embeddings).knn(seed, k)


def all_knn_candidates(
    embeddings: Mapping[ProductId, ProductEmbedding],
    k: int,
) -> dict[ProductId, list[CandidatePair]]:
    """Top-k candidate pools for every product, sharing one embedding matrix."""
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    return _EmbeddingMatrix(embeddings).knn_all(k)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def pair_features(
    pairs: Sequence[CandidatePair],
    embeddings: Mapping[ProductId, ProductEmbedding],
) -> np.ndarray:
    """Stack [e_seed || e_cand || e_seed - e_cand] rows for a pair list."""
    rows = []
    for pair in pairs:
        try:
            es = embeddings[pair.seed].vector
            ec = embeddings[pair.candidate].vector
        except KeyError as exc:
            raise DataError(f"pair references unembedded product {exc}") from None
        rows.append(np.concatenate([es, ec, es - ec]))
    return np.stack(rows)


def _log_loss(probs: np.ndarray, y: np.ndarray) -> float:
    eps = 1e-12
    p = np.clip(probs, eps, 1.0 - eps)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def train_pair_classifier(
    pairs: Sequence[tuple[CandidatePair, int]],
    embeddings: Mapping[ProductId, ProductEmbedding],
    epochs: int = 300,
    learning_rate: float = 2.0,
    target_precision: float = DEFAULT_TARGET_PRECISION,
) -> PairClassifier:
    """Full-batch gradient descent on log-loss, then held-out threshold calibration.

    The held-out split is every 5th pair (deterministic 20%). The threshold is
    the smallest held-out score achieving precision >= target_precision; if no
    threshold qualifies it falls back to 0.5 with `threshold_fallback` set.
    """
    if not 0.0 < target_precision < 1.0:
        raise ConfigError(f"target_precision {target_precision} outside (0, 1)")
    labels = np.asarray([lab for _, lab in pairs], dtype=np.float64)
    if len(set(labels.tolist())) < 2:
        raise DataError("training data must contain both labels")
    X = pair_features([p for p, _ in pairs], embeddings)

    held = np.zeros(len(pairs), dtype=bool)
    held[4::5] = True
    X_train, y_train = X[~held], labels[~held]
    X_held, y_held = X[held], labels[held]
    if len(set(y_train.tolist())) < 2:
        raise DataError("training split must contain both labels")

    w = np.zeros(X.shape[1])
    b = 0.0
    losses: list[float] = []
    n = len(y_train)
    for _ in range(epochs):
        probs = _sigmoid(X_train @ w + b)
        losses.append(_log_loss(probs, y_train))
        grad = probs - y_train
        w -= learning_rate * (X_train.T @ grad) / n
        b -= learning_rate * float(np.sum(grad)) / n
    losses.append(_log_loss(_sigmoid(X_train @ w + b), y_train))

    threshold, fallback = _calibrate_threshold(
        _sigmoid(X_held @ w + b), y_held, target_precision)
    return PairClassifier(weights=w, bias=b, threshold=threshold,
                          threshold_fallback=fallback,
                          loss_history=tuple(losses))


def _calibrate_threshold(
    scores: np.ndarray, labels: np.ndarray, target_precision: float
) -> tuple[float, bool]:
    best: float | None = None
    for t in sorted(set(scores.tolist())):
        kept = scores >= t
        n_kept = int(kept.sum())
        if n_kept == 0:
            continue
        precision = float(labels[kept].sum()) / n_kept
        if precision >= target_precision:
            best = t
            break
    if best is None or not 0.0 < best < 1.0:
        return 0.5, best is None
    return best, False


def score_pairs(
    classifier: PairClassifier,
    pairs: Sequence[CandidatePair],
    embeddings: Mapping[ProductId, ProductEmbedding],
) -> list[CandidatePair]:
    """Attach classifier probabilities to candidate pairs."""
    if not pairs:
        return []
    probs = classifier.score_matrix(pair_features(pairs, embeddings))
    return [CandidatePair(seed=p.seed, candidate=p.candidate, cosine=p.cosine,
                          classifier_score=float(s))
            for p, s in zip(pairs, probs)]


def attribute_post_filter(
    pairs: Sequence[CandidatePair],
    catalog: Mapping[ProductId, Product],
    required_attrs: Sequence[str] = (),
) -> list[CandidatePair]:
    """Keep pairs agreeing on category and on every required attribute.

    A missing required attribute on either side drops the pair. Category
    equality is enforced even with no required attributes.
    """
    known_attrs: set[str] = set()
    for p in catalog.values():
        known_attrs.update(p.attributes)
    for attr in required_attrs:
        if attr not in known_attrs:
            raise ConfigError(f"attribute {attr!r} not present in catalog schema")

    kept: list[CandidatePair] = []
    for pair in pairs:
        seed = catalog[pair.seed]
        cand = catalog[pair.candidate]
        if seed.category != cand.category:
            continue
        agree = True
        for attr in required_attrs:
            sv = seed.attributes.get(attr)
            cv = cand.attributes.get(attr)
            if sv is None or cv is None or sv != cv:
                agree = False
                break
        if agree:
            kept.append(pair)
    return kept


def build_lookup_table(
    catalog: Sequence[Product],
    embeddings: Mapping[ProductId, ProductEmbedding],
    classifier: PairClassifier,
    k: int = DEFAULT_K,
    max_substitutes: int = DEFAULT_MAX_SUBSTITUTES,
    required_attrs: Sequence[str] = (),
) -> dict[ProductId, SubstituteSet]:
    """Full per-seed pipeline: kNN -> classifier threshold -> post-filter -> cap."""
    by_id = {p.id: p for p in catalog}
    missing = sorted(set(by_id) - set(embeddings))
    if missing:
        raise DataError(f"embeddings missing for {missing[:3]}...")
    pools = _EmbeddingMatrix(embeddings).knn_all(k)
    table: dict[ProductId, SubstituteSet] = {}
    for pid in sorted(by_id):
        scored = score_pairs(classifier, pools[pid], embeddings)
        passed = [p for p in scored if p.classifier_score >= classifier.threshold]
        filtered = attribute_post_filter(passed, by_id, required_attrs)
        filtered.sort(key=lambda p: (-p.classifier_score, p.candidate))
        top = filtered[:max_substitutes]
        table[pid] = SubstituteSet(
            seed=pid,
            substitutes=tuple((p.candidate, p.classifier_score) for p in top),
        )
    return table


def raw_knn_table(
    embeddings: Mapping[ProductId, ProductEmbedding],
    max_substitutes: int = DEFAULT_MAX_SUBSTITUTES,
) -> dict[ProductId, SubstituteSet]:
    """Unfiltered baseline table: top cosine neighbors only (no classifier, no filters)."""
    pools = _EmbeddingMatrix(embeddings).knn_all(max_substitutes)
    return {
        pid: SubstituteSet(
            seed=pid,
            substitutes=tuple((p.candidate, p.cosine) for p in pairs),
        )
        for pid, pairs in pools.items()
    }


# -- table file format --------------------------------------------------

def table_to_records(table: Mapping[ProductId, SubstituteSet]) -> list[dict]:
    return [
        {"seed": pid,
         "substitutes": [[sub, score] for sub, score in table[pid].substitutes]}
        for pid in sorted(table)
    ]


def table_from_records(records: Iterable[Mapping]) -> dict[ProductId, SubstituteSet]:
    table: dict[ProductId, SubstituteSet] = {}
    for rec in records:
        table[rec["seed"]] = SubstituteSet(
            seed=rec["seed"],
            substitutes=tuple((str(sub), float(score))
                              for sub, score in rec["substitutes"]),
        )
    return table
