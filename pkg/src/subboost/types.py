"""Shared vocabulary types: products, interaction events, query judgments, features.

All types are immutable value objects; they are safe to share freely.
Product ids are opaque strings and plain string ordering is the global
tie-break used everywhere in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

ProductId = str


class ConfigError(ValueError):
    """A configuration value is out of contract."""


class DataError(ValueError):
    """Input data is malformed or violates a precondition."""


class ConsistencyError(ValueError):
    """Two artifacts that must cover the same catalog do not."""


class Action(str, Enum):
    VIEW = "view"
    CLICK = "click"
    ADD_TO_CART = "add_to_cart"
    PURCHASE = "purchase"


@dataclass(frozen=True)
class Product:
    """One catalog entry. `attributes` holds tokens such as color/size/price/rating."""

    id: ProductId
    title: str
    category: str
    brand: str
    attributes: Mapping[str, str]
    launch_time: int
    is_cold_start: bool

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "category": self.category,
            "brand": self.brand,
            "attributes": dict(sorted(self.attributes.items())),
            "launch_time": self.launch_time,
            "is_cold_start": self.is_cold_start,
        }

    @classmethod
    def from_record(cls, rec: Mapping) -> "Product":
        return cls(
            id=rec["id"],
            title=rec["title"],
            category=rec["category"],
            brand=rec["brand"],
            attributes=dict(rec["attributes"]),
            launch_time=int(rec["launch_time"]),
            is_cold_start=bool(rec["is_cold_start"]),
        )


@dataclass(frozen=True)
class InteractionEvent:
    """A single user action on a product. `quantity` is units, purchases only."""

    user: str
    product: ProductId
    action: Action
    timestamp: int
    quantity: int = 0

    def __post_init__(self) -> None:
        if self.quantity < 0:
            raise DataError(f"negative quantity on event for {self.product}")
        if self.action is not Action.PURCHASE and self.quantity != 0:
            raise DataError(f"quantity set on non-purchase event for {self.product}")

    def to_record(self) -> dict:
        return {
            "user": self.user,
            "product": self.product,
            "action": self.action.value,
            "timestamp": self.timestamp,
            "quantity": self.quantity,
        }

    @classmethod
    def from_record(cls, rec: Mapping) -> "InteractionEvent":
        return cls(
            user=rec["user"],
            product=rec["product"],
            action=Action(rec["action"]),
            timestamp=int(rec["timestamp"]),
            quantity=int(rec.get("quantity", 0)),
        )


MAX_GRADE = 4


@dataclass(frozen=True)
class QueryJudgment:
    """A query with its candidate products, graded labels, and logged positions."""

    query: str
    candidates: tuple[ProductId, ...]
    labels: tuple[int, ...]
    logged_rank: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.candidates)
        if n < 2:
            raise DataError(f"query {self.query!r} needs >= 2 candidates, got {n}")
        if len(self.labels) != n or len(self.logged_rank) != n:
            raise DataError(f"query {self.query!r}: labels/logged_rank misaligned")
        for lab in self.labels:
            if not (0 <= lab <= MAX_GRADE):
                raise DataError(f"query {self.query!r}: label {lab} outside 0..{MAX_GRADE}")
        if len(set(self.candidates)) != n:
            raise DataError(f"query {self.query!r}: duplicate candidates")

    def to_record(self) -> dict:
        return {
            "query": self.query,
            "candidates": list(self.candidates),
            "labels": list(self.labels),
            "logged_rank": list(self.logged_rank),
        }

    @classmethod
    def from_record(cls, rec: Mapping) -> "QueryJudgment":
        return cls(
            query=rec["query"],
            candidates=tuple(rec["candidates"]),
            labels=tuple(int(x) for x in rec["labels"]),
            logged_rank=tuple(int(x) for x in rec["logged_rank"]),
        )


@dataclass(frozen=True)
class FeatureVector:
    """Fixed-order real-valued features; missing raw data encodes as 0.0."""

    values: tuple[float, ...]
    schema: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.values) != len(self.schema):
            raise DataError("feature values and schema lengths differ")
        for name, v in zip(self.schema, self.values):
            if not math.isfinite(v):
                raise DataError(f"non-finite feature value for {name!r}")

    def get(self, name: str) -> float:
        try:
            return self.values[self.schema.index(name)]
        except ValueError:
            raise KeyError(name) from None

    def to_record(self) -> dict:
        return {"schema": list(self.schema), "values": list(self.values)}

    @classmethod
    def from_record(cls, rec: Mapping) -> "FeatureVector":
        return cls(values=tuple(float(v) for v in rec["values"]),
                   schema=tuple(rec["schema"]))


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a catalog validation pass: one (location, message) per violation."""

    errors: tuple[tuple[str, str], ...] = field(default=())

    @property
    def error_count(self) -> int:
        return len(self.errors)

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_catalog(products: Iterable[Product]) -> ValidationReport:
    """Check catalog invariants: unique nonempty ids, nonempty categories, sane launch times."""
    errors: list[tuple[str, str]] = []
    seen: set[ProductId] = set()
    for i, p in enumerate(products):
        loc = f"product[{i}]:{p.id or '<empty>'}"
        if not p.id:
            errors.append((loc, "empty product id"))
        elif p.id in seen:
            errors.append((loc, f"duplicate product id {p.id!r}"))
        else:
            seen.add(p.id)
        if not p.category:
            errors.append((loc, "empty category"))
        if p.launch_time < 0:
            errors.append((loc, f"negative launch_time {p.launch_time}"))
    return ValidationReport(errors=tuple(errors))
