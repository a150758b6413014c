"""Aggregating substitute signal into a boosted per-product feature.

Aggregation over the substitutes' values (mean / max / interpolated
percentile / embedding-attention) is followed by the max adjustment
``max(aggregate, own value)`` so strong performers are never penalized. A
product with no substitutes keeps its own value unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .features import FeatureSnapshot
from .substitutes import ProductEmbedding, SubstituteSet
from .types import ConfigError, ConsistencyError, DataError, ProductId

STRATEGY_KINDS = ("mean", "max", "percentile", "attention")


@dataclass(frozen=True)
class AggregationStrategy:
    """One of mean | max | percentile(q) | attention; q only applies to percentile."""

    kind: str
    q: float = 0.75

    def __post_init__(self) -> None:
        if self.kind not in STRATEGY_KINDS:
            raise ConfigError(f"unknown aggregation kind {self.kind!r}")
        if self.kind == "percentile" and not 0.0 < self.q <= 1.0:
            raise ConfigError(f"percentile q {self.q} outside (0, 1]")

    @property
    def name(self) -> str:
        if self.kind == "percentile":
            return f"p{int(round(self.q * 100))}"
        return self.kind

    @classmethod
    def parse(cls, name: str) -> "AggregationStrategy":
        """Parse CLI names: mean | max | attention | pNN (e.g. p75)."""
        if name in ("mean", "max", "attention"):
            return cls(kind=name)
        if name.startswith("p") and name[1:].isdigit():
            return cls(kind="percentile", q=int(name[1:]) / 100.0)
        raise ConfigError(f"unknown strategy name {name!r}")


MEAN = AggregationStrategy("mean")
MAX = AggregationStrategy("max")
P75 = AggregationStrategy("percentile", 0.75)
ATTENTION = AggregationStrategy("attention")


def _interpolated_percentile(values: Sequence[float], q: float) -> float:
    ordered = sorted(values)
    pos = q * (len(ordered) - 1)
    lo = int(pos)
    frac = pos - lo
    if lo + 1 >= len(ordered):
        return ordered[-1]
    return ordered[lo] + frac * (ordered[lo + 1] - ordered[lo])


def aggregate(
    values: Sequence[float],
    strategy: AggregationStrategy,
    seed_emb: ProductEmbedding | None = None,
    sub_embs: Sequence[ProductEmbedding] | None = None,
) -> float:
    """Combine substitute values into one number.

    Attention weights are clamped inner products of the seed embedding with
    each substitute embedding, normalized into a convex combination; when all
    clamped products vanish it falls back to the mean.
    """
    if not values:
        raise DataError("aggregate over empty values; handle empty substitute sets upstream")
    if strategy.kind == "mean":
        return sum(values) / len(values)
    if strategy.kind == "max":
        return max(values)
    if strategy.kind == "percentile":
        return _interpolated_percentile(values, strategy.q)
    # attention
    if seed_emb is None or sub_embs is None:
        raise DataError("attention aggregation requires seed and substitute embeddings")
    if len(sub_embs) != len(values):
        raise DataError("substitute embeddings misaligned with values")
    weights = np.maximum(
        0.0, np.asarray([float(seed_emb.vector @ e.vector) for e in sub_embs]))
    total = float(weights.sum())
    if total == 0.0:
        return sum(values) / len(values)
    return float((weights / total) @ np.asarray(values, dtype=np.float64))


@dataclass(frozen=True)
class BoostReport:
    """Per-product (sv, aggregate, sv_subs) rows plus boosted/unchanged counts."""

    strategy: AggregationStrategy
    boosted_count: int
    unchanged_count: int
    rows: tuple[tuple[ProductId, float, float | None, float], ...]


def boost_product(
    product: ProductId,
    snapshot: FeatureSnapshot,
    subs: SubstituteSet,
    strategy: AggregationStrategy,
    embeddings: Mapping[ProductId, ProductEmbedding] | None = None,
) -> float:
    """max(aggregated substitute value, own value); passthrough on empty subs."""
    if product not in snapshot.sv:
        raise ConsistencyError(f"snapshot missing product {product}")
    own = snapshot.sv[product]
    if not subs.substitutes:
        return own
    values = []
    for sub_id, _ in subs.substitutes:
        if sub_id not in snapshot.sv:
            raise ConsistencyError(f"substitute {sub_id} of {product} missing from snapshot")
        values.append(snapshot.sv[sub_id])
    if strategy.kind == "attention":
        if embeddings is None:
            raise DataError("attention strategy requires embeddings")
        agg = aggregate(values, strategy, embeddings[product],
                        [embeddings[sub_id] for sub_id, _ in subs.substitutes])
    else:
        agg = aggregate(values, strategy)
    return max(agg, own)


def boost_all(
    snapshot: FeatureSnapshot,
    lookup_table: Mapping[ProductId, SubstituteSet],
    strategy: AggregationStrategy,
    embeddings: Mapping[ProductId, ProductEmbedding] | None = None,
) -> tuple[FeatureSnapshot, BoostReport]:
    """Fill sv_subs for every product; count how many strictly increased."""
    snapshot_ids = set(snapshot.sv)
    table_ids = set(lookup_table)
    if snapshot_ids != table_ids:
        diff = sorted(snapshot_ids.symmetric_difference(table_ids))
        raise ConsistencyError(
            f"snapshot and lookup table cover different catalogs ({diff[:3]}...)")

    sv_subs: dict[ProductId, float] = {}
    rows: list[tuple[ProductId, float, float | None, float]] = []
    boosted = 0
    for pid in sorted(snapshot_ids):
        own = snapshot.sv[pid]
        subs = lookup_table[pid]
        value = boost_product(pid, snapshot, subs, strategy, embeddings)
        agg: float | None = None
        if subs.substitutes:
            vals = [snapshot.sv[s] for s, _ in subs.substitutes]
            if strategy.kind == "attention":
                agg = aggregate(vals, strategy, embeddings[pid],
                                [embeddings[s] for s, _ in subs.substitutes])
            else:
                agg = aggregate(vals, strategy)
        sv_subs[pid] = value
        rows.append((pid, own, agg, value))
        if value > own:
            boosted += 1

    boosted_snapshot = FeatureSnapshot(as_of=snapshot.as_of, sv=dict(snapshot.sv),
                                       sv_subs=sv_subs)
    report = BoostReport(strategy=strategy, boosted_count=boosted,
                         unchanged_count=len(snapshot_ids) - boosted,
                         rows=tuple(rows))
    return boosted_snapshot, report
