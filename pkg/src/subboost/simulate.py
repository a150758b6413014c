"""Synthetic marketplace with ground-truth substitute clusters and relevance.

The generator builds category-pure substitute clusters whose members share a
title core, established products that accumulate engagement through a
position-biased session model, and cold-start products that launch near the
end of the horizon with almost no events. Relevance labels derive from latent
query-cluster affinity plus noise, so substitutes genuinely share relevance.
Everything is driven by one seeded generator: identical seeds give
byte-identical corpora.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .ranking import ndcg_at_k
from .substitutes import SubstituteSet
from .types import (
    Action,
    ConfigError,
    ConsistencyError,
    InteractionEvent,
    Product,
    ProductId,
    QueryJudgment,
)

ADJECTIVES = (
    "crimson", "verdant", "obsidian", "amberlit", "frosted", "burnished",
    "gilded", "marbled", "speckled", "lunar", "solar", "ashen", "cobalt",
    "scarlet", "ivory", "umber", "sable", "russet", "cerulean", "magenta",
    "viridian", "saffron", "indigo", "hazel", "onyx", "pearl", "ochre", "slate",
)
MATERIALS = (
    "steel", "walnut", "ceramic", "canvas", "bamboo", "leather", "granite",
    "copper", "titanium", "linen", "acrylic", "maple", "rubber", "felt",
    "glass", "brass", "nylon", "cedar", "cork", "pewter",
)
NOUNS = (
    "ledger", "beacon", "vessel", "satchel", "arbor", "crest", "hollow",
    "quill", "meridian", "harbor", "summit", "prism", "anchor", "galley",
    "lantern", "mosaic", "orchard", "plume", "ridge", "spindle", "terrace",
    "vault", "willow", "zephyr", "bastion", "cinder", "drift", "ember",
    "fathom", "grove",
)
BRANDS = (
    "zenbright", "nordvale", "astrelle", "quillmark", "fernwood", "baltique",
    "corventa", "duskmoor", "elmhurst", "fablerun", "gildcrest", "hartwell",
    "ironleaf", "juniperco", "kestrelix", "larkspur", "mistralon",
    "nightbloom", "oakenshaw", "pinnaclio", "quartzen", "rivermoss",
    "stellaris", "thornbury",
)
TYPE_WORDS = (
    "pen", "mug", "lamp", "tent", "rug", "fan", "desk", "chair", "kettle",
    "torch", "easel", "stool", "clock", "vase", "mat", "rack", "bin", "tray",
    "hook", "shelf", "pot", "pan", "whisk", "ladle", "grill", "cooler",
    "flask", "thermos", "journal", "notebook", "marker", "crayon", "scissors",
    "stapler", "tape", "glue", "clip", "folder", "binder", "pencil",
)
COLORS = ("black", "white", "pink", "blue", "green", "red", "silver", "teal")
SIZES = ("small", "medium", "large", "xl")

SECONDS_PER_DAY = 86400

# Session model constants (see generate()).
CLICK_BASE, CLICK_PER_GRADE = 0.10, 0.12
CART_AFTER_CLICK = 0.35
BUY_AFTER_CART = 0.55
QUANTITY_POISSON = 0.4
COLD_POPULARITY_FACTOR = 0.02
EVENTS_PER_SESSION_ESTIMATE = 12

TARGET_AFFINITY = 3.2
SAME_CATEGORY_AFFINITY = 1.0
QUALITY_SPREAD = 1.0  # latent per-product quality; drives labels, ratings, engagement
MIXED_QUERY_FRACTION = 0.45  # queries that also partially match a second cluster


@dataclass(frozen=True)
class SimConfig:
    seed: int = 0
    num_products: int = 2000
    num_categories: int = 40
    num_queries: int = 500
    cluster_size_mean: float = 6.0
    cold_start_fraction: float = 0.1
    horizon_days: float = 30.0
    events_per_day: int = 6000
    zipf_exponent: float = 1.1
    position_bias_exponent: float = 1.0
    relevance_noise: float = 0.5
    candidates_per_query: int = 16
    display_depth: int = 10
    cold_window_days: float = 3.0

    def __post_init__(self) -> None:
        if min(self.num_products, self.num_categories, self.num_queries,
               self.events_per_day, self.candidates_per_query,
               self.display_depth) < 1:
            raise ConfigError("all counts must be positive")
        if not 0.0 <= self.cold_start_fraction <= 1.0:
            raise ConfigError("cold_start_fraction must lie in [0, 1]")
        if self.cluster_size_mean < 2:
            raise ConfigError("cluster_size_mean must be >= 2")
        if self.horizon_days <= self.cold_window_days:
            raise ConfigError("horizon must be longer than the cold-start window")
        if self.zipf_exponent < 0 or self.position_bias_exponent < 0:
            raise ConfigError("exponents must be nonnegative")
        if self.relevance_noise < 0:
            raise ConfigError("relevance_noise must be nonnegative")

    @property
    def horizon_end(self) -> int:
        return int(self.horizon_days * SECONDS_PER_DAY)

    def to_record(self) -> dict:
        return {
            "seed": self.seed, "num_products": self.num_products,
            "num_categories": self.num_categories, "num_queries": self.num_queries,
            "cluster_size_mean": self.cluster_size_mean,
            "cold_start_fraction": self.cold_start_fraction,
            "horizon_days": self.horizon_days, "events_per_day": self.events_per_day,
            "zipf_exponent": self.zipf_exponent,
            "position_bias_exponent": self.position_bias_exponent,
            "relevance_noise": self.relevance_noise,
            "candidates_per_query": self.candidates_per_query,
            "display_depth": self.display_depth,
            "cold_window_days": self.cold_window_days,
        }

    @classmethod
    def from_record(cls, rec: Mapping) -> "SimConfig":
        defaults = cls()
        kwargs = {}
        for name in defaults.to_record():
            if name in rec:
                kwargs[name] = rec[name]
        return cls(**kwargs)


@dataclass(frozen=True)
class GroundTruth:
    clusters: tuple[tuple[ProductId, ...], ...]
    true_relevance: Mapping[str, Mapping[ProductId, int]]
    cold_start_set: frozenset[ProductId]

    def cluster_of(self) -> dict[ProductId, int]:
        out: dict[ProductId, int] = {}
        for ci, members in enumerate(self.clusters):
            for pid in members:
                out[pid] = ci
        return out

    def to_record(self) -> dict:
        return {
            "clusters": [list(c) for c in self.clusters],
            "cold_start": sorted(self.cold_start_set),
            "relevance": {q: {pid: int(g) for pid, g in sorted(grades.items())}
                          for q, grades in sorted(self.true_relevance.items())},
        }

    @classmethod
    def from_record(cls, rec: Mapping) -> "GroundTruth":
        return cls(
            clusters=tuple(tuple(c) for c in rec["clusters"]),
            true_relevance={q: {pid: int(g) for pid, g in grades.items()}
                            for q, grades in rec["relevance"].items()},
            cold_start_set=frozenset(rec["cold_start"]),
        )


@dataclass
class _Cluster:
    index: int
    category: str
    core: tuple[str, str, str]  # adjective, material, noun
    members: list[ProductId] = field(default_factory=list)
    weight: float = 0.0


def _category_token(index: int) -> str:
    if index < len(TYPE_WORDS):
        return TYPE_WORDS[index]
    return f"ware{index:02d}"


def generate(
    cfg: SimConfig,
) -> tuple[list[Product], list[InteractionEvent], list[QueryJudgment], GroundTruth]:
    """Build (catalog, events, judgments, truth) from one seeded generator."""
    per_category = cfg.num_products // cfg.num_categories
    if per_category < 2 or cfg.cluster_size_mean > per_category:
        raise ConfigError(
            f"cluster_size_mean {cfg.cluster_size_mean} infeasible for "
            f"{per_category} products per category")
    rng = np.random.default_rng(cfg.seed)

    clusters, products, quality = _build_catalog(cfg, rng, per_category)
    cold_set = _assign_cold_start(cfg, rng, products)
    popularity = _assign_popularity(cfg, rng, clusters, cold_set)
    queries, judgments, relevance = _build_queries(cfg, rng, clusters, products,
                                                   popularity, quality)
    events = _run_sessions(cfg, rng, products, judgments, relevance, popularity)

    truth = GroundTruth(
        clusters=tuple(tuple(c.members) for c in clusters),
        true_relevance=relevance,
        cold_start_set=frozenset(cold_set),
    )
    catalog = [products[pid] for pid in sorted(products)]
    return catalog, events, judgments, truth


def _build_catalog(
    cfg: SimConfig, rng: np.random.Generator, per_category: int
) -> tuple[list[_Cluster], dict[ProductId, Product], dict[ProductId, float]]:
    remainder = cfg.num_products - per_category * cfg.num_categories
    clusters: list[_Cluster] = []
    products: dict[ProductId, Product] = {}
    quality: dict[ProductId, float] = {}
    next_id = 0
    # Codes are unique but order-decorrelated: consecutive ids share a category,
    # and sequential codes would leak category through shared digit trigrams.
    code_perm = rng.permutation(cfg.num_products)
    for ci in range(cfg.num_categories):
        category = _category_token(ci)
        count = per_category + (1 if ci < remainder else 0)
        # Unique core words per category so non-siblings share no title token.
        max_clusters = count // 2 + 1
        adjs = rng.choice(len(ADJECTIVES), size=min(max_clusters, len(ADJECTIVES)),
                          replace=False)
        mats = rng.choice(len(MATERIALS), size=min(max_clusters, len(MATERIALS)),
                          replace=False)
        nouns = rng.choice(len(NOUNS), size=min(max_clusters, len(NOUNS)),
                           replace=False)
        # One brand per cluster, never reused inside a category: within-category
        # non-siblings then share no title token, so their cosine stays below
        # the cross-category brand-mate waterline and kNN junk gets filtered.
        brand_perm = rng.permutation(len(BRANDS))
        slot = 0
        remaining = count
        mid = int(round(cfg.cluster_size_mean))
        lo, hi = max(2, mid - 2), mid + 2
        while remaining > 0:
            size = int(min(remaining, rng.integers(lo, hi + 1)))
            core = (ADJECTIVES[adjs[slot % len(adjs)]],
                    MATERIALS[mats[slot % len(mats)]],
                    NOUNS[nouns[slot % len(nouns)]])
            brand = BRANDS[brand_perm[slot % len(BRANDS)]]
            cluster = _Cluster(index=len(clusters), category=category, core=core)
            for _ in range(size):
                pid = f"P{next_id:05d}"
                # Unique code token per product perturbs the shared template.
                title = (f"{brand} {core[0]} {core[1]} {core[2]} "
                         f"x{code_perm[next_id]:04d}")
                next_id += 1
                q = float(QUALITY_SPREAD * rng.normal())
                # Review ratings track latent quality: the one behavioral
                # signal cold products launch with.
                rating = float(np.clip(3.0 + 0.6 * q + 0.4 * rng.normal(),
                                       1.0, 5.0))
                attributes = {
                    "color": COLORS[rng.integers(len(COLORS))],
                    "size": SIZES[rng.integers(len(SIZES))],
                    "price": f"{rng.uniform(5.0, 100.0):.2f}",
                    "rating": f"{rating:.1f}",
                }
                products[pid] = Product(
                    id=pid, title=title, category=category, brand=brand,
                    attributes=attributes, launch_time=0, is_cold_start=False)
                quality[pid] = q
                cluster.members.append(pid)
            clusters.append(cluster)
            slot += 1
            remaining -= size
    return clusters, products, quality


def _assign_cold_start(cfg: SimConfig, rng: np.random.Generator,
                       products: dict[ProductId, Product]) -> set[ProductId]:
    ids = sorted(products)
    n_cold = int(round(cfg.cold_start_fraction * len(ids)))
    cold_ids = set(str(pid) for pid in rng.choice(ids, size=n_cold, replace=False))
    cold_window_start = cfg.horizon_end - int(cfg.cold_window_days * SECONDS_PER_DAY)
    for pid in ids:
        if pid in cold_ids:
            launch = int(rng.integers(cold_window_start, cfg.horizon_end))
            products[pid] = Product(
                id=pid, title=products[pid].title, category=products[pid].category,
                brand=products[pid].brand, attributes=products[pid].attributes,
                launch_time=launch, is_cold_start=True)
        else:
            launch = int(rng.integers(0, max(1, cold_window_start - SECONDS_PER_DAY)))
            products[pid] = Product(
                id=pid, title=products[pid].title, category=products[pid].category,
                brand=products[pid].brand, attributes=products[pid].attributes,
                launch_time=launch, is_cold_start=False)
    return cold_ids


def _assign_popularity(cfg: SimConfig, rng: np.random.Generator,
                       clusters: Sequence[_Cluster],
                       cold_set: set[ProductId]) -> dict[ProductId, float]:
    order = rng.permutation(len(clusters))
    for rank, ci in enumerate(order):
        clusters[ci].weight = 1.0 / (rank + 1.0) ** cfg.zipf_exponent
    total = sum(c.weight for c in clusters)
    popularity: dict[ProductId, float] = {}
    for cluster in clusters:
        cluster.weight /= total
        for pid in cluster.members:
            multiplier = float(rng.lognormal(0.0, 0.25))
            pop = cluster.weight * multiplier
            if pid in cold_set:
                pop *= COLD_POPULARITY_FACTOR
            popularity[pid] = pop
    return popularity


def _grade(affinity: float, noise: float, rng: np.random.Generator) -> int:
    raw = affinity + noise * rng.normal()
    return int(np.clip(round(raw), 0, 4))


def _build_queries(cfg: SimConfig, rng: np.random.Generator,
                   clusters: Sequence[_Cluster],
                   products: dict[ProductId, Product],
                   popularity: dict[ProductId, float],
                   quality: dict[ProductId, float]):
    by_category: dict[str, list[ProductId]] = {}
    for pid in sorted(products):
        by_category.setdefault(products[pid].category, []).append(pid)
    category_clusters: dict[str, list[_Cluster]] = {}
    for c in clusters:
        category_clusters.setdefault(c.category, []).append(c)
    all_ids = sorted(products)
    weights = np.asarray([c.weight for c in clusters])
    weights = weights / weights.sum()

    queries: list[str] = []
    judgments: list[QueryJudgment] = []
    relevance: dict[str, dict[ProductId, int]] = {}
    seen_text: set[str] = set()
    for _ in range(cfg.num_queries):
        target = None
        second = None
        text = ""
        for _attempt in range(100):
            target = clusters[int(rng.choice(len(clusters), p=weights))]
            adj, mat, noun = target.core
            siblings = [c for c in category_clusters[target.category]
                        if c.index != target.index]
            second = None
            # Mixed-intent queries partially match a second cluster, so the
            # ranker must trade text relevance against behavioral evidence.
            if siblings and rng.random() < MIXED_QUERY_FRACTION:
                second = siblings[int(rng.integers(len(siblings)))]
                text = f"{adj} {noun} {second.core[1]}"
            else:
                pattern = int(rng.integers(3))
                text = (f"{adj} {mat} {noun}", f"{adj} {noun}",
                        f"{mat} {noun}")[pattern]
            if text not in seen_text:
                break
        if text in seen_text:
            continue
        seen_text.add(text)

        n_cross = 2
        taken: set[ProductId] = set()
        members = list(target.members)
        member_cap = (cfg.candidates_per_query - 4 if second is None
                      else max(2, (cfg.candidates_per_query - n_cross) // 2))
        if len(members) > member_cap:
            members = [str(p) for p in rng.choice(members, size=member_cap,
                                                  replace=False)]
        taken.update(members)
        second_members: list[ProductId] = []
        if second is not None:
            second_members = list(second.members)
            cap = max(2, cfg.candidates_per_query - n_cross - len(members) - 2)
            if len(second_members) > cap:
                second_members = [str(p) for p in
                                  rng.choice(second_members, size=cap,
                                             replace=False)]
            taken.update(second_members)
        same_cat_pool = [p for p in by_category[target.category] if p not in taken]
        n_same = max(0, cfg.candidates_per_query - len(taken) - n_cross)
        same_cat = ([str(p) for p in rng.choice(same_cat_pool,
                                                size=min(n_same, len(same_cat_pool)),
                                                replace=False)]
                    if same_cat_pool and n_same else [])
        cross_pool = [p for p in all_ids
                      if products[p].category != target.category]
        cross = [str(p) for p in rng.choice(cross_pool, size=n_cross, replace=False)]
        candidates = members + second_members + same_cat + cross

        member_set = set(target.members)
        grades: dict[ProductId, int] = {}
        for pid in candidates:
            if pid in member_set:
                affinity = TARGET_AFFINITY
            elif products[pid].category == target.category:
                affinity = SAME_CATEGORY_AFFINITY
            else:
                affinity = 0.0
            grades[pid] = _grade(affinity + quality[pid], cfg.relevance_noise, rng)
        if not any(grades.values()):
            grades[candidates[0]] = 1  # keep the query trainable

        # Logging policy: popularity times a relevance tilt. The tilt keeps
        # aggregate click-through declining with rank; the popularity factor
        # still buries cold products regardless of their grades.
        logscore = {pid: popularity[pid] * (1.0 + grades[pid]) ** 2
                    for pid in candidates}
        ordered = sorted(candidates, key=lambda p: (-logscore[p], p))
        judgments.append(QueryJudgment(
            query=text,
            candidates=tuple(ordered),
            labels=tuple(grades[p] for p in ordered),
            logged_rank=tuple(range(1, len(ordered) + 1)),
        ))
        queries.append(text)
        relevance[text] = grades
    return queries, judgments, relevance


def _run_sessions(cfg: SimConfig, rng: np.random.Generator,
                  products: dict[ProductId, Product],
                  judgments: Sequence[QueryJudgment],
                  relevance: Mapping[str, Mapping[ProductId, int]],
                  popularity: dict[ProductId, float]) -> list[InteractionEvent]:
    """Position-biased browse sessions emitting view/click/cart/purchase events."""
    events: list[InteractionEvent] = []
    sessions_per_day = max(1, cfg.events_per_day // EVENTS_PER_SESSION_ESTIMATE)
    n_days = int(cfg.horizon_days)
    for day in range(n_days):
        day_start = day * SECONDS_PER_DAY
        for _ in range(sessions_per_day):
            judgment = judgments[int(rng.integers(len(judgments)))]
            ts = day_start + int(rng.integers(SECONDS_PER_DAY - 8))
            user = f"u{rng.integers(2000):04d}"
            visible = [pid for pid in judgment.candidates
                       if products[pid].launch_time <= ts][:cfg.display_depth]
            for rank, pid in enumerate(visible, start=1):
                events.append(InteractionEvent(
                    user=user, product=pid, action=Action.VIEW, timestamp=ts))
                examine = (1.0 / math.log2(rank + 1.0)) ** cfg.position_bias_exponent
                if rng.random() >= examine:
                    continue
                grade = relevance[judgment.query][pid]
                if rng.random() >= CLICK_BASE + CLICK_PER_GRADE * grade:
                    continue
                events.append(InteractionEvent(
                    user=user, product=pid, action=Action.CLICK, timestamp=ts + 1))
                if rng.random() >= CART_AFTER_CLICK:
                    continue
                events.append(InteractionEvent(
                    user=user, product=pid, action=Action.ADD_TO_CART,
                    timestamp=ts + 2))
                if rng.random() >= BUY_AFTER_CART:
                    continue
                quantity = 1 + int(rng.poisson(QUANTITY_POISSON))
                events.append(InteractionEvent(
                    user=user, product=pid, action=Action.PURCHASE,
                    timestamp=ts + 3, quantity=quantity))
    return events


# -- evaluation against ground truth -------------------------------------

def ctr_by_rank(
    events: Sequence[InteractionEvent],
) -> tuple[dict[int, int], dict[int, int]]:
    """Reconstruct per-display-rank view and click counts from the event log.

    Sessions are contiguous in the log: views of one session share a user and
    timestamp, and follow-up actions sit within three seconds of it.
    """
    views: dict[int, int] = {}
    clicks: dict[int, int] = {}
    i, n = 0, len(events)
    while i < n:
        e = events[i]
        if e.action is not Action.VIEW:
            i += 1
            continue
        user, ts = e.user, e.timestamp
        rank = 0
        current = 0
        while i < n and events[i].user == user and 0 <= events[i].timestamp - ts <= 3:
            ev = events[i]
            if ev.action is Action.VIEW and ev.timestamp == ts:
                rank += 1
                views[rank] = views.get(rank, 0) + 1
                current = rank
            elif ev.action is Action.CLICK:
                clicks[current] = clicks.get(current, 0) + 1
            i += 1
    return views, clicks


def evaluate_substitutes(
    lookup_table: Mapping[ProductId, SubstituteSet],
    truth: GroundTruth,
    max_substitutes: int = 10,
) -> tuple[float, float]:
    """(precision, recall) of predicted substitute pairs against true clusters.

    Recall counts true same-cluster pairs capped at max_substitutes per seed.
    An empty table has precision 1.0 by convention and recall 0.0.
    """
    cluster_of = truth.cluster_of()
    predicted = 0
    correct = 0
    true_capped = 0
    for seed in sorted(lookup_table):
        subs = lookup_table[seed].ids
        predicted += len(subs)
        seed_cluster = cluster_of.get(seed)
        correct += sum(1 for s in subs if cluster_of.get(s) == seed_cluster)
        if seed_cluster is not None:
            size = len(truth.clusters[seed_cluster])
            true_capped += min(size - 1, max_substitutes)
    precision = correct / predicted if predicted else 1.0
    recall = correct / true_capped if true_capped else 0.0
    return precision, recall


@dataclass(frozen=True)
class DiscoverabilityReport:
    """Per-segment ranking quality before and after boosting."""

    overall_ndcg_before: float
    overall_ndcg_after: float
    cold_ndcg_before: float
    cold_ndcg_after: float
    cold_share_before: float
    cold_share_after: float
    cold_query_count: int

    @property
    def overall_delta_rel(self) -> float:
        if self.overall_ndcg_before == 0:
            return 0.0
        return (self.overall_ndcg_after - self.overall_ndcg_before) / self.overall_ndcg_before

    @property
    def cold_delta_rel(self) -> float:
        if self.cold_ndcg_before == 0:
            return 0.0
        return (self.cold_ndcg_after - self.cold_ndcg_before) / self.cold_ndcg_before

    def to_record(self) -> dict:
        return {
            "overall_ndcg_before": self.overall_ndcg_before,
            "overall_ndcg_after": self.overall_ndcg_after,
            "overall_delta_rel": self.overall_delta_rel,
            "cold_ndcg_before": self.cold_ndcg_before,
            "cold_ndcg_after": self.cold_ndcg_after,
            "cold_delta_rel": self.cold_delta_rel,
            "cold_share_before": self.cold_share_before,
            "cold_share_after": self.cold_share_after,
            "cold_query_count": self.cold_query_count,
        }


def _masked_ndcg(ranking: Sequence[ProductId], grades: Mapping[ProductId, int],
                 keep: frozenset[ProductId], k: int) -> float:
    labels = [grades.get(pid, 0) if pid in keep else 0 for pid in ranking]
    return ndcg_at_k(labels, k)


def top_k_share(ranking: Sequence[ProductId], members: frozenset[ProductId],
                k: int) -> float:
    top = ranking[:k]
    if not top:
        return 0.0
    return sum(1 for pid in top if pid in members) / len(top)


def discoverability_report(
    rankings_before: Mapping[str, Sequence[ProductId]],
    rankings_after: Mapping[str, Sequence[ProductId]],
    truth: GroundTruth,
    k: int = 10,
) -> DiscoverabilityReport:
    """Compare two ranking sets over identical queries.

    Cold-segment NDCG masks gains to cold-start products and averages over
    queries that have at least one positively-labeled cold candidate.
    """
    if set(rankings_before) != set(rankings_after):
        raise ConsistencyError("before/after rankings cover different query sets")
    queries = sorted(rankings_before)
    if not queries:
        raise ConsistencyError("empty ranking sets")
    cold = truth.cold_start_set

    overall_b = overall_a = 0.0
    cold_b = cold_a = 0.0
    share_b = share_a = 0.0
    cold_queries = 0
    for q in queries:
        grades = truth.true_relevance.get(q, {})
        all_ids = frozenset(grades)
        overall_b += _masked_ndcg(rankings_before[q], grades, all_ids, k)
        overall_a += _masked_ndcg(rankings_after[q], grades, all_ids, k)
        share_b += top_k_share(rankings_before[q], cold, k)
        share_a += top_k_share(rankings_after[q], cold, k)
        if any(grades.get(pid, 0) > 0 for pid in rankings_before[q] if pid in cold):
            cold_queries += 1
            cold_b += _masked_ndcg(rankings_before[q], grades, cold, k)
            cold_a += _masked_ndcg(rankings_after[q], grades, cold, k)
    n = len(queries)
    return DiscoverabilityReport(
        overall_ndcg_before=overall_b / n,
        overall_ndcg_after=overall_a / n,
        cold_ndcg_before=cold_b / cold_queries if cold_queries else 1.0,
        cold_ndcg_after=cold_a / cold_queries if cold_queries else 1.0,
        cold_share_before=share_b / n,
        cold_share_after=share_a / n,
        cold_query_count=cold_queries,
    )
