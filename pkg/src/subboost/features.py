"""Time-decayed sales velocity: per-product purchase signal over a recent window.

A purchase of quantity q at age d days contributes
``q * sum_j w_j * 2**(-d / h_j)`` where the half-lives ``h_j`` and blend
weights ``w_j`` come from :class:`DecayConfig`. The window is closed on both
ends and only purchase events contribute. Decay is evaluated lazily from raw
events at snapshot time, which keeps the computation exact and testable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .types import (
    Action,
    ConfigError,
    DataError,
    InteractionEvent,
    Product,
    ProductId,
    validate_catalog,
)

SECONDS_PER_DAY = 86400.0


@dataclass(frozen=True)
class DecayConfig:
    """Half-life blend for sales velocity.

    ``sum_quantities`` selects whether a purchase contributes its unit count
    (True) or counts once per order (False).
    """

    half_lives_days: tuple[float, ...] = (7.0, 30.0)
    blend_weights: tuple[float, ...] = (0.5, 0.5)
    window_days: float = 30.0
    sum_quantities: bool = True

    def __post_init__(self) -> None:
        if not self.half_lives_days or not self.blend_weights:
            raise ConfigError("half_lives_days and blend_weights must be nonempty")
        if len(self.half_lives_days) != len(self.blend_weights):
            raise ConfigError("half_lives_days and blend_weights lengths differ")
        if any(h <= 0 for h in self.half_lives_days):
            raise ConfigError("every half-life must be positive")
        if any(w <= 0 for w in self.blend_weights):
            raise ConfigError("every blend weight must be positive")
        if abs(sum(self.blend_weights) - 1.0) > 1e-12:
            raise ConfigError("blend weights must sum to 1")
        if self.window_days <= 0:
            raise ConfigError("window_days must be positive")

    def to_record(self) -> dict:
        return {
            "half_lives_days": list(self.half_lives_days),
            "blend_weights": list(self.blend_weights),
            "window_days": self.window_days,
            "sum_quantities": self.sum_quantities,
        }

    @classmethod
    def from_record(cls, rec: Mapping) -> "DecayConfig":
        return cls(
            half_lives_days=tuple(float(h) for h in rec["half_lives_days"]),
            blend_weights=tuple(float(w) for w in rec["blend_weights"]),
            window_days=float(rec["window_days"]),
            sum_quantities=bool(rec.get("sum_quantities", True)),
        )


@dataclass(frozen=True)
class FeatureSnapshot:
    """Per-product feature values as of a point in time.

    ``sv_subs`` stays None until the boost stage fills it; once present it
    dominates ``sv`` pointwise (max adjustment).
    """

    as_of: int
    sv: Mapping[ProductId, float]
    sv_subs: Mapping[ProductId, float] | None = field(default=None)

    def to_record(self) -> dict:
        rec: dict = {
            "as_of": self.as_of,
            "sv": {pid: self.sv[pid] for pid in sorted(self.sv)},
        }
        if self.sv_subs is not None:
            rec["sv_subs"] = {pid: self.sv_subs[pid] for pid in sorted(self.sv_subs)}
        return rec

    @classmethod
    def from_record(cls, rec: Mapping) -> "FeatureSnapshot":
        sv_subs = rec.get("sv_subs")
        return cls(
            as_of=int(rec["as_of"]),
            sv={k: float(v) for k, v in rec["sv"].items()},
            sv_subs=None if sv_subs is None else {k: float(v) for k, v in sv_subs.items()},
        )


def decay_weight(age_days: float, cfg: DecayConfig) -> float:
    """Blended half-life decay factor for a purchase `age_days` old."""
    return sum(w * 2.0 ** (-age_days / h)
               for w, h in zip(cfg.blend_weights, cfg.half_lives_days))


def compute_sv(
    events: Iterable[InteractionEvent],
    product: ProductId,
    as_of: int,
    cfg: DecayConfig,
) -> float:
    """Decayed purchase sum for one product at `as_of`.

    Raises DataError if any event of the product is stamped after `as_of`;
    callers computing mid-horizon snapshots must pre-filter the log.
    """
    total = 0.0
    window_start = as_of - cfg.window_days * SECONDS_PER_DAY
    for e in events:
        if e.product != product:
            continue
        if e.timestamp > as_of:
            raise DataError(
                f"event for {product} at {e.timestamp} is after as_of={as_of}")
        if e.action is not Action.PURCHASE or e.timestamp < window_start:
            continue
        age_days = (as_of - e.timestamp) / SECONDS_PER_DAY
        count = e.quantity if cfg.sum_quantities else 1
        total += count * decay_weight(age_days, cfg)
    return total


def build_snapshot(
    events: Sequence[InteractionEvent],
    catalog: Sequence[Product],
    as_of: int,
    cfg: DecayConfig,
) -> FeatureSnapshot:
    """Snapshot sv for every catalog product (0.0 where no purchases).

    Events after `as_of` are outside the snapshot and ignored; events for
    products not in the catalog are ignored.
    """
    report = validate_catalog(catalog)
    if not report.ok:
        raise DataError(f"catalog has {report.error_count} validation errors: "
                        f"{report.errors[0][1]}")
    ids = {p.id for p in catalog}
    window_start = as_of - cfg.window_days * SECONDS_PER_DAY

    # Group purchase timestamps/quantities per product, then vectorize decay.
    ts_by_pid: dict[ProductId, list[int]] = {}
    qty_by_pid: dict[ProductId, list[int]] = {}
    for e in events:
        if (e.action is Action.PURCHASE and e.product in ids
                and window_start <= e.timestamp <= as_of):
            ts_by_pid.setdefault(e.product, []).append(e.timestamp)
            qty_by_pid.setdefault(e.product, []).append(e.quantity)

    weights = np.asarray(cfg.blend_weights)
    half_lives = np.asarray(cfg.half_lives_days)
    sv: dict[ProductId, float] = {}
    for p in catalog:
        ts = ts_by_pid.get(p.id)
        if not ts:
            sv[p.id] = 0.0
            continue
        age_days = (as_of - np.asarray(ts, dtype=np.float64)) / SECONDS_PER_DAY
        counts = (np.asarray(qty_by_pid[p.id], dtype=np.float64)
                  if cfg.sum_quantities else np.ones(len(ts)))
        decay = (weights[None, :] * 2.0 ** (-age_days[:, None] / half_lives[None, :])).sum(axis=1)
        sv[p.id] = float(counts @ decay)
    return FeatureSnapshot(as_of=as_of, sv=sv)


def refresh_schedule(start: int, end: int, period_hours: float) -> list[int]:
    """Snapshot timestamps [start, start+period, ...] up to and including end."""
    if period_hours <= 0:
        raise ConfigError("period_hours must be positive")
    if end < start:
        raise ConfigError("end must be >= start")
    step = period_hours * 3600.0
    count = int(math.floor((end - start) / step + 1e-9)) + 1
    return [int(round(start + i * step)) for i in range(count)]
