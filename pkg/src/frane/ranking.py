"""End-to-end feature ranking: similarity -> schedule -> sweep -> PageRank.

For every threshold whose graph is dense enough (average degree at least
``min_avg_degree``), PageRank yields one candidate ranking.  The returned
ranking is the candidate with the highest score spread (see :func:`rqh`),
or a seeded uniform draw when ``selection="random"`` is used as a baseline.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .dataset import DataMatrix
from .graph_rank import ScoreVector, ThresholdGraph, build_edge_list, weighted_pagerank
from .similarity import MEASURES, SimilarityMatrix, feature_similarity, offdiag_stats
from .thresholds import PROGRESSIONS, make_schedule

SELECTIONS = ("rqh", "random")


@dataclass(frozen=True)
class FraneConfig:
    """Pipeline parameters; the defaults are the recommended settings."""

    similarity: str = "pearson"
    progression: str = "geometric"
    iterations: int = 100
    min_avg_degree: float = 1.0
    damping: float = 0.85
    selection: str = "rqh"
    seed: int = 0

    def __post_init__(self):
        if self.similarity not in MEASURES:
            raise ValueError(f"unknown similarity {self.similarity!r}, expected one of {MEASURES}")
        if self.progression not in PROGRESSIONS:
            raise ValueError(
                f"unknown progression {self.progression!r}, expected one of {PROGRESSIONS}"
            )
        if self.iterations < 2:
            raise ValueError(f"iterations must be >= 2, got {self.iterations}")
        if self.min_avg_degree < 0:
            raise ValueError(f"min_avg_degree must be >= 0, got {self.min_avg_degree}")
        if not 0 < self.damping < 1:
            raise ValueError(f"damping must be in (0, 1), got {self.damping}")
        if self.selection not in SELECTIONS:
            raise ValueError(f"unknown selection {self.selection!r}, expected one of {SELECTIONS}")


@dataclass(frozen=True)
class RankingCandidate:
    """One PageRank score vector with the threshold that produced it."""

    threshold: float
    scores: ScoreVector
    avg_degree: float
    rqh: float
    schedule_index: int


@dataclass(frozen=True)
class FeatureRanking:
    """Importance scores for all features and the induced order.

    ``order[r]`` is the feature index with rank r (0 = most important);
    equal importances are broken by ascending feature index.
    """

    feature_names: tuple[str, ...]
    importances: np.ndarray
    order: np.ndarray = field(init=False)
    chosen_threshold: float = 0.0
    chosen_rqh: float = 1.0

    def __post_init__(self):
        importances = np.asarray(self.importances, dtype=np.float64)
        if len(importances) != len(self.feature_names):
            raise ValueError("one importance per feature required")
        if importances.min() <= 0:
            raise ValueError("importances must be positive")
        order = np.argsort(-importances, kind="stable")
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "importances", importances)
        object.__setattr__(self, "order", order)
        importances.flags.writeable = False
        order.flags.writeable = False

    @property
    def n(self) -> int:
        return len(self.feature_names)

    def top(self, count: int) -> np.ndarray:
        """Indices of the ``count`` most important features."""
        return self.order[:count]


def rqh(scores) -> float:
    """Ranking quality heuristic: spread of a score vector.

    Ratio of the median of the three largest scores to the median of the
    three smallest.  Scale-free; equals 1 for a uniform vector.  PageRank's
    teleportation floor keeps the denominator positive.
    """
    values = np.asarray(getattr(scores, "scores", scores), dtype=np.float64)
    if values.ndim != 1 or len(values) < 3:
        raise ValueError("need at least 3 scores")
    ordered = np.sort(values)
    return float(ordered[-2] / ordered[1])


def select_best(candidates, selection: str, seed: int = 0) -> RankingCandidate:
    """Pick the final candidate: highest rqh, or a seeded uniform draw.

    rqh ties go to the lowest schedule index.
    """
    if not candidates:
        raise ValueError("no candidates to select from")
    if selection == "random":
        rng = np.random.default_rng(seed)
        return candidates[int(rng.integers(len(candidates)))]
    if selection != "rqh":
        raise ValueError(f"unknown selection {selection!r}, expected one of {SELECTIONS}")
    best = candidates[0]
    for cand in candidates[1:]:
        if cand.rqh > best.rqh or (cand.rqh == best.rqh and cand.schedule_index < best.schedule_index):
            best = cand
    return best


def run_frane(X: DataMatrix, config: FraneConfig = FraneConfig(), *, threads=None,
              weights: SimilarityMatrix | None = None):
    """Rank the features of X.

    Returns ``(ranking, candidates)`` where ``candidates`` holds every
    threshold that passed the density gate, in schedule order, for
    inspection.  Pass ``weights`` to reuse a precomputed similarity matrix
    (its measure must match the config).

    Raises ValueError when no threshold graph reaches ``min_avg_degree``;
    with the geometric progression this can only happen when
    ``min_avg_degree`` exceeds the complete graph's (n - 1) / 2.
    """
    if weights is None:
        weights = feature_similarity(X, config.similarity, threads=threads)
    else:
        if weights.measure != config.similarity:
            raise ValueError(
                f"precomputed weights use measure {weights.measure!r}, "
                f"config wants {config.similarity!r}"
            )
        if weights.n != X.n:
            raise ValueError(f"weights cover {weights.n} features but X has {X.n}")

    stats = offdiag_stats(weights)
    schedule = make_schedule(stats, config.progression, config.iterations)

    # equal threshold values yield identical graphs: evaluate once, keep the
    # earliest schedule index
    first_index = {}
    for idx, t in enumerate(schedule.values):
        first_index.setdefault(float(t), idx)

    graph = ThresholdGraph(build_edge_list(weights))
    candidates = []
    last_edge_count = -1
    last_scores = None
    for t in sorted(first_index, reverse=True):
        graph.advance_to(t)
        avg_degree = graph.average_degree
        if avg_degree < config.min_avg_degree:
            continue
        if graph.active_edge_count == last_edge_count and last_scores is not None:
            scores = last_scores  # same edge set, same fixed point
        else:
            scores = weighted_pagerank(graph, damping=config.damping)
            last_edge_count = graph.active_edge_count
            last_scores = scores
        candidates.append(
            RankingCandidate(
                threshold=t,
                scores=scores,
                avg_degree=avg_degree,
                rqh=rqh(scores.scores),
                schedule_index=first_index[t],
            )
        )
    if not candidates:
        raise ValueError(
            f"no qualifying graph: min_avg_degree={config.min_avg_degree} is not "
            f"reached by any threshold graph over n={X.n} features"
        )
    candidates.sort(key=lambda c: c.schedule_index)

    chosen = select_best(candidates, config.selection, config.seed)
    ranking = FeatureRanking(
        feature_names=X.feature_names,
        importances=chosen.scores.scores,
        chosen_threshold=chosen.threshold,
        chosen_rqh=chosen.rqh,
    )
    return ranking, candidates


def ranking_to_dict(ranking: FeatureRanking, similarity: str, progression: str) -> dict:
    """JSON-ready form: ranked features plus the choice metadata."""
    return {
        "ranking": [
            {
                "feature": ranking.feature_names[j],
                "importance": float(ranking.importances[j]),
                "rank": r + 1,
            }
            for r, j in enumerate(ranking.order)
        ],
        "threshold": ranking.chosen_threshold,
        "rqh": ranking.chosen_rqh,
        "similarity": similarity,
        "progression": progression,
    }


def ranking_to_json(ranking: FeatureRanking, similarity: str, progression: str) -> str:
    return json.dumps(ranking_to_dict(ranking, similarity, progression), indent=2) + "\n"


def ranking_to_csv(ranking: FeatureRanking) -> str:
    lines = ["rank,feature,importance"]
    for r, j in enumerate(ranking.order):
        lines.append(f"{r + 1},{ranking.feature_names[j]},{repr(float(ranking.importances[j]))}")
    return "\n".join(lines) + "\n"
