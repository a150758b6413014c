"""Substitute-boosted behavioral features for cold-start search ranking.

The package covers the full desk-scale loop: a synthetic marketplace with
ground-truth substitute clusters, decayed sales-velocity features, two-stage
substitute discovery, boosted-feature aggregation, a gradient-boosted ranker,
and a reproducible file-driven pipeline.
"""

from .boosting import (
    ATTENTION,
    MAX,
    MEAN,
    P75,
    AggregationStrategy,
    BoostReport,
    aggregate,
    boost_all,
    boost_product,
)
from .features import (
    DecayConfig,
    FeatureSnapshot,
    build_snapshot,
    compute_sv,
    refresh_schedule,
)
from .pipeline import PipelineConfig, assemble_features, run_pipeline
from .ranking import (
    RankerModel,
    RegressionTree,
    TrainConfig,
    lambda_gradients,
    mean_ndcg,
    ndcg_at_k,
    partial_dependence,
    score,
    train,
)
from .simulate import (
    DiscoverabilityReport,
    GroundTruth,
    SimConfig,
    discoverability_report,
    evaluate_substitutes,
    generate,
)
from .substitutes import (
    CandidatePair,
    PairClassifier,
    ProductEmbedding,
    SubstituteSet,
    attribute_post_filter,
    build_lookup_table,
    embed_catalog,
    embed_product,
    knn_candidates,
    train_pair_classifier,
)
from .types import (
    Action,
    ConfigError,
    ConsistencyError,
    DataError,
    FeatureVector,
    InteractionEvent,
    Product,
    ProductId,
    QueryJudgment,
    ValidationReport,
    validate_catalog,
)

__version__ = "0.1.0"
