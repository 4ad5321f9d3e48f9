"""frane - unsupervised feature ranking via attribute networks.

Features of a tabular dataset become nodes of a weighted graph whose edge
weights are feature-feature similarities.  The graph is thresholded at a
sweep of edge-weight cutoffs, weighted PageRank scores each thresholded
graph, and a spread heuristic picks the final ranking.  A cross-validated
5NN-reconstruction harness scores rankings by relative mean absolute error.

Main entry points:

- :func:`frane.ranking.run_frane` - compute a feature ranking.
- :func:`frane.evalharness.evaluate_ranking` - score a ranker by RMAE.
- :func:`frane.service.create_app` - FastAPI service wrapping both.
- ``frane`` CLI (``python -m frane``) - thin client over the service.
"""

from .dataset import DataMatrix, FoldSplit, load_csv, split_folds, take_fold, write_csv
from .similarity import (
    MEASURES,
    SimilarityMatrix,
    distance_similarity,
    feature_similarity,
    offdiag_stats,
    pearson_similarity,
)
from .thresholds import (
    PROGRESSIONS,
    ThresholdSchedule,
    geometric_schedule,
    linear_schedule,
    make_schedule,
    quantile_schedule,
)
from .graph_rank import (
    EdgeList,
    ScoreVector,
    ThresholdGraph,
    build_edge_list,
    weighted_pagerank,
)
from .ranking import (
    FeatureRanking,
    FraneConfig,
    RankingCandidate,
    rqh,
    run_frane,
    select_best,
)
from .evalharness import (
    EvalConfig,
    EvalReport,
    error_curve_points,
    evaluate_ranking,
    knn_reconstruct,
    rmae,
)

__version__ = "0.1.0"

__all__ = [
    "DataMatrix",
    "FoldSplit",
    "load_csv",
    "write_csv",
    "split_folds",
    "take_fold",
    "MEASURES",
    "SimilarityMatrix",
    "pearson_similarity",
    "distance_similarity",
    "feature_similarity",
    "offdiag_stats",
    "PROGRESSIONS",
    "ThresholdSchedule",
    "geometric_schedule",
    "linear_schedule",
    "quantile_schedule",
    "make_schedule",
    "EdgeList",
    "ThresholdGraph",
    "ScoreVector",
    "build_edge_list",
    "weighted_pagerank",
    "FraneConfig",
    "RankingCandidate",
    "FeatureRanking",
    "rqh",
    "run_frane",
    "select_best",
    "EvalConfig",
    "EvalReport",
    "knn_reconstruct",
    "rmae",
    "evaluate_ranking",
    "error_curve_points",
]
