"""Thresholded attribute graphs and weighted PageRank.

A graph at threshold t contains an edge (j, k, w) whenever w >= t.  The
sweep visits thresholds in descending order and activates edges
incrementally, so a whole schedule costs one pass over the sorted edge
list.  PageRank on each graph follows edges proportionally to their
weights with probability ``damping`` and teleports uniformly otherwise;
nodes with zero weighted degree are dangling and spread their mass
uniformly.
"""

from dataclasses import dataclass

import numpy as np

from .similarity import SimilarityMatrix


@dataclass(frozen=True)
class EdgeList:
    """All feature pairs (j < k) with weights, sorted by weight descending.

    Ties are ordered by (j, k) lexicographically so the sweep is fully
    deterministic.
    """

    js: np.ndarray
    ks: np.ndarray
    weights: np.ndarray
    n: int

    def __post_init__(self):
        if not (len(self.js) == len(self.ks) == len(self.weights)):
            raise ValueError("index and weight arrays must have equal length")
        if len(self.weights) and self.weights.min() < 0:
            raise ValueError("edge weights must be non-negative")
        if np.any(self.js >= self.ks):
            raise ValueError("edges must have j < k")
        if np.any(np.diff(self.weights) > 0):
            raise ValueError("weights must be sorted descending")
        for arr in (self.js, self.ks, self.weights):
            arr.flags.writeable = False

    def __len__(self):
        return len(self.weights)


def build_edge_list(W: SimilarityMatrix) -> EdgeList:
    """List every C(n,2) pair of W, heaviest first."""
    js, ks = np.triu_indices(W.n, 1)
    weights = W.weights[js, ks]
    order = np.lexsort((ks, js, -weights))
    return EdgeList(js[order], ks[order], weights[order], W.n)


class ThresholdGraph:
    """Incremental view of the graph G(t) during a descending sweep.

    ``advance_to(t)`` activates every not-yet-active edge with weight >= t;
    thresholds must be presented in descending order.  Activation touches
    each edge once over a full sweep.
    """

    def __init__(self, edges: EdgeList):
        self.edges = edges
        self.n = edges.n
        self._cursor = 0
        self._threshold = np.inf
        self._active = np.zeros((edges.n, edges.n), dtype=np.float64)
        self.weighted_degree = np.zeros(edges.n, dtype=np.float64)

    @property
    def active_edge_count(self) -> int:
        return self._cursor

    @property
    def threshold(self) -> float:
        return self._threshold

    @property
    def active_weights(self) -> np.ndarray:
        """Dense symmetric matrix of active edge weights (zero elsewhere)."""
        return self._active

    @property
    def average_degree(self) -> float:
        """Active edge count over node count, each undirected edge once."""
        return self.active_edge_count / self.n

    def advance_to(self, t: float) -> "ThresholdGraph":
        if t > self._threshold:
            raise ValueError(
                f"thresholds must be descending: {t} after {self._threshold}"
            )
        self._threshold = t
        w = self.edges.weights
        end = int(np.searchsorted(-w, -t, side="right"))
        if end > self._cursor:
            js = self.edges.js[self._cursor:end]
            ks = self.edges.ks[self._cursor:end]
            ws = w[self._cursor:end]
            self._active[js, ks] = ws
            self._active[ks, js] = ws
            np.add.at(self.weighted_degree, js, ws)
            np.add.at(self.weighted_degree, ks, ws)
            self._cursor = end
        return self

    def active_edges(self):
        """Arrays (js, ks, weights) of the currently active edges."""
        end = self._cursor
        return self.edges.js[:end], self.edges.ks[:end], self.edges.weights[:end]

    def adjacency(self, node: int):
        """Active (neighbor, weight) pairs of one node."""
        js, ks, ws = self.active_edges()
        out = [(int(k), float(w)) for j, k, w in zip(js, ks, ws) if j == node]
        out += [(int(j), float(w)) for j, k, w in zip(js, ks, ws) if k == node]
        return sorted(out)


def dump_edges(graph: ThresholdGraph) -> str:
    """Active edges as text, one ``j k w`` line per edge, heaviest first."""
    js, ks, ws = graph.active_edges()
    return "".join(f"{j} {k} {repr(float(w))}\n" for j, k, w in zip(js, ks, ws))


@dataclass(frozen=True)
class ScoreVector:
    """PageRank scores: positive, summing to one."""

    scores: np.ndarray
    damping: float
    converged: bool
    iterations: int

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64)
        object.__setattr__(self, "scores", scores)
        if not 0 < self.damping < 1:
            raise ValueError(f"damping must be in (0, 1), got {self.damping}")
        if scores.min() <= 0:
            raise ValueError("scores must be strictly positive")
        if abs(scores.sum() - 1.0) > 1e-9:
            raise ValueError(f"scores must sum to 1, got {scores.sum()!r}")
        scores.flags.writeable = False


def weighted_pagerank(graph: ThresholdGraph, damping=0.85, tol=1e-8, max_iter=100) -> ScoreVector:
    """Power iteration for weighted PageRank on the active graph.

    Starting from the uniform vector, each step sends a node's mass to its
    neighbors proportionally to edge weights (dangling nodes spread theirs
    uniformly), damped against uniform teleportation.  Stops when the L1
    change drops below ``tol``; if ``max_iter`` is hit first the current
    vector is returned with ``converged=False``.
    """
    if not 0 < damping < 1:
        raise ValueError(f"damping must be in (0, 1), got {damping}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    n = graph.n
    degree = graph.weighted_degree
    dangling = degree == 0
    inv_degree = np.where(dangling, 0.0, 1.0 / np.where(dangling, 1.0, degree))
    teleport = (1.0 - damping) / n

    pr = np.full(n, 1.0 / n)
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        spread = graph.active_weights @ (pr * inv_degree)
        dangling_mass = float(pr[dangling].sum())
        new = teleport + damping * (spread + dangling_mass / n)
        change = float(np.abs(new - pr).sum())
        pr = new
        if change < tol:
            converged = True
            break
    return ScoreVector(pr, damping, converged, iterations)
