import math

import numpy as np
import pytest
from scipy.stats import spearmanr

from subboost.simulate import (
    GroundTruth,
    SimConfig,
    ctr_by_rank,
    discoverability_report,
    evaluate_substitutes,
    generate,
    top_k_share,
)
from subboost.substitutes import SubstituteSet
from subboost.types import ConfigError, ConsistencyError

SMALL = dict(num_products=300, num_categories=10, num_queries=80,
             events_per_day=1200)


@pytest.fixture(scope="module")
def small_world():
    return generate(SimConfig(seed=5, **SMALL))


class TestSimConfig:
    def test_defaults_valid(self):
        cfg = SimConfig()
        assert cfg.num_products == 2000 and cfg.num_categories == 40

    @pytest.mark.parametrize("kwargs", [
        dict(num_products=0),
        dict(cold_start_fraction=1.5),
        dict(cluster_size_mean=1.0),
        dict(horizon_days=2.0, cold_window_days=3.0),
    ])
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(ConfigError):
            SimConfig(**kwargs)

    def test_infeasible_cluster_size(self):
        with pytest.raises(ConfigError):
            generate(SimConfig(num_products=100, num_categories=50,
                               cluster_size_mean=10.0))

    def test_round_trip(self):
        cfg = SimConfig(seed=3, **SMALL)
        assert SimConfig.from_record(cfg.to_record()) == cfg


class TestGenerate:
    def test_no_purchases_before_launch(self, small_world):
        catalog, events, _, _ = small_world
        launch = {p.id: p.launch_time for p in catalog}
        for e in events:
            assert e.timestamp >= launch[e.product]

    def test_determinism_byte_identical(self):
        cfg = SimConfig(seed=11, **SMALL)
        a = generate(cfg)
        b = generate(cfg)
        assert [p.to_record() for p in a[0]] == [p.to_record() for p in b[0]]
        assert [e.to_record() for e in a[1]] == [e.to_record() for e in b[1]]
        assert [j.to_record() for j in a[2]] == [j.to_record() for j in b[2]]
        assert a[3].to_record() == b[3].to_record()

    def test_distinct_seeds_distinct_logs(self):
        a = generate(SimConfig(seed=1, **SMALL))
        b = generate(SimConfig(seed=2, **SMALL))
        assert [e.to_record() for e in a[1]] != [e.to_record() for e in b[1]]

    def test_cluster_size_mean_tracks_config(self):
        sizes = []
        for seed in range(10):
            _, _, _, truth = generate(SimConfig(seed=seed, num_products=400,
                                                num_categories=10, num_queries=10,
                                                events_per_day=120))
            sizes.extend(len(c) for c in truth.clusters)
        assert np.mean(sizes) == pytest.approx(6.0, abs=1.0)

    def test_generated_catalog_validates(self):
        from subboost.types import validate_catalog

        catalog, _, _, _ = generate(SimConfig(seed=9, num_products=1000,
                                              num_categories=20, num_queries=20,
                                              events_per_day=240))
        assert len(catalog) == 1000
        assert validate_catalog(catalog).error_count == 0

    def test_cluster_purity(self, small_world):
        catalog, _, _, truth = small_world
        category = {p.id: p.category for p in catalog}
        for members in truth.clusters:
            assert len({category[m] for m in members}) == 1

    def test_clusters_partition_catalog(self, small_world):
        catalog, _, _, truth = small_world
        seen = [pid for members in truth.clusters for pid in members]
        assert sorted(seen) == sorted(p.id for p in catalog)

    def test_cold_flag_consistent(self, small_world):
        catalog, _, _, truth = small_world
        cfg = SimConfig(seed=5, **SMALL)
        window_start = cfg.horizon_end - cfg.cold_window_days * 86400
        for p in catalog:
            assert p.is_cold_start == (p.id in truth.cold_start_set)
            assert p.is_cold_start == (p.launch_time >= window_start)

    def test_judgment_invariants(self, small_world):
        _, _, judgments, _ = small_world
        for j in judgments:
            assert len(j.candidates) >= 2
            assert any(j.labels)
            assert j.logged_rank == tuple(range(1, len(j.candidates) + 1))

    def test_cold_start_starvation(self, small_world):
        from subboost.features import DecayConfig, build_snapshot

        catalog, events, _, truth = small_world
        cfg = SimConfig(seed=5, **SMALL)
        snap = build_snapshot(events, catalog, cfg.horizon_end, DecayConfig())
        total = sum(snap.sv.values())
        cold = sum(snap.sv[p] for p in truth.cold_start_set)
        assert total > 0
        assert cold < 0.02 * total

    def test_position_bias_ctr_non_increasing(self, small_world):
        _, events, _, _ = small_world
        views, clicks = ctr_by_rank(events)
        ranks = sorted(views)
        assert len(ranks) >= 5
        ctr = [clicks.get(r, 0) / views[r] for r in ranks]
        # Click draws are Bernoulli, so adjacent ranks are compared within
        # binomial error; the overall trend must still fall steeply.
        for r, (a, b) in enumerate(zip(ctr, ctr[1:]), start=1):
            pooled = (clicks.get(r, 0) + clicks.get(r + 1, 0)) / (views[r] + views[r + 1])
            stderr = math.sqrt(max(pooled * (1 - pooled), 1e-9)
                               * (1 / views[r] + 1 / views[r + 1]))
            assert b <= a + 3.0 * stderr
        assert ctr[-1] < 0.5 * ctr[0]
        rho = spearmanr(ranks, ctr).statistic
        assert rho < -0.95


class TestEvaluateSubstitutes:
    def _truth(self):
        return GroundTruth(
            clusters=(("A", "B", "C"), ("D", "E")),
            true_relevance={},
            cold_start_set=frozenset({"C"}),
        )

    def test_perfect_table(self):
        truth = self._truth()
        table = {
            "A": SubstituteSet("A", (("B", 1.0), ("C", 0.9))),
            "B": SubstituteSet("B", (("A", 1.0), ("C", 0.9))),
            "C": SubstituteSet("C", (("A", 1.0), ("B", 0.9))),
            "D": SubstituteSet("D", (("E", 1.0),)),
            "E": SubstituteSet("E", (("D", 1.0),)),
        }
        precision, recall = evaluate_substitutes(table, truth)
        assert precision == pytest.approx(1.0)
        assert recall == pytest.approx(1.0)

    def test_empty_table_convention(self):
        truth = self._truth()
        table = {pid: SubstituteSet(pid, ()) for pid in "ABCDE"}
        precision, recall = evaluate_substitutes(table, truth)
        assert precision == 1.0
        assert recall == 0.0

    def test_junk_lowers_precision(self):
        truth = self._truth()
        table = {
            "A": SubstituteSet("A", (("B", 1.0), ("D", 0.9))),
            "B": SubstituteSet("B", ()),
            "C": SubstituteSet("C", ()),
            "D": SubstituteSet("D", ()),
            "E": SubstituteSet("E", ()),
        }
        precision, recall = evaluate_substitutes(table, truth)
        assert precision == pytest.approx(0.5)
        assert recall == pytest.approx(1.0 / 8.0)

    def test_recall_cap(self):
        truth = GroundTruth(clusters=(tuple(f"P{i}" for i in range(15)),),
                            true_relevance={}, cold_start_set=frozenset())
        # with cap 10, each seed's denominator is 10 not 14
        table = {f"P{i}": SubstituteSet(f"P{i}", ()) for i in range(15)}
        table["P0"] = SubstituteSet(
            "P0", tuple((f"P{j}", 1.0 - j / 100) for j in range(1, 11)))
        precision, recall = evaluate_substitutes(table, truth, max_substitutes=10)
        assert precision == 1.0
        assert recall == pytest.approx(10 / (15 * 10))


class TestDiscoverability:
    def _truth(self):
        return GroundTruth(
            clusters=(),
            true_relevance={
                "q1": {"A": 3, "B": 2, "C": 1, "D": 0},
                "q2": {"A": 0, "B": 0, "C": 2, "D": 1},
            },
            cold_start_set=frozenset({"C"}),
        )

    def test_identical_rankings_zero_delta(self):
        truth = self._truth()
        rankings = {"q1": ["A", "B", "C", "D"], "q2": ["C", "D", "A", "B"]}
        report = discoverability_report(rankings, rankings, truth)
        assert report.overall_delta_rel == 0.0
        assert report.cold_delta_rel == 0.0
        assert report.cold_share_before == report.cold_share_after

    def test_query_mismatch_rejected(self):
        truth = self._truth()
        with pytest.raises(ConsistencyError):
            discoverability_report({"q1": ["A", "B"]}, {"q2": ["A", "B"]}, truth)

    def test_cold_item_moving_up_raises_share_and_ndcg(self):
        truth = self._truth()
        before = {"q1": ["A", "B", "D", "C"], "q2": ["A", "B", "D", "C"]}
        after = {"q1": ["A", "C", "B", "D"], "q2": ["C", "A", "B", "D"]}
        report = discoverability_report(before, after, truth, k=3)
        assert report.cold_ndcg_after > report.cold_ndcg_before
        assert report.cold_share_after > report.cold_share_before

    def test_rank_moves_change_top3_share(self):
        # one query: a cold item moving from below the cutoff into rank 3
        # takes its query's top-3 share from 0 to 1/3
        cold = frozenset({"X"})
        before = ["A", "B", "C", "D", "E", "F", "G", "X"]
        after = ["A", "B", "X", "C", "D", "E", "F", "G"]
        assert top_k_share(before, cold, 3) == pytest.approx(0.0)
        assert top_k_share(after, cold, 3) == pytest.approx(1.0 / 3.0)
