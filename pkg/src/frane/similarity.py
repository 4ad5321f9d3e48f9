"""Feature-feature similarity matrices.

The default measure adds 1 to the Pearson correlation of every column pair,
mapping it onto [0, 2].  Four alternatives derive similarity from a pairwise
column distance d as (max pairwise distance) - d.  All measures produce a
symmetric, non-negative n x n weight matrix.

Pair computation is data-parallel over fixed-size column blocks; block
boundaries do not depend on the worker count, so results are bit-identical
for any ``threads`` setting.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .dataset import DataMatrix

MEASURES = ("pearson", "canberra", "chebyshev", "manhattan", "euclidean")

_CDIST_METRIC = {
    "canberra": "canberra",
    "chebyshev": "chebyshev",
    "manhattan": "cityblock",
    "euclidean": "euclidean",
}

# Columns per parallel work item.  Fixed so that the computation is split
# identically regardless of how many workers execute it.
_BLOCK = 256


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric non-negative feature-similarity weights."""

    weights: np.ndarray
    measure: str

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=np.float64)
        object.__setattr__(self, "weights", weights)
        if weights.ndim != 2 or weights.shape[0] != weights.shape[1]:
            raise ValueError(f"weights must be square, got shape {weights.shape}")
        if weights.shape[0] < 2:
            raise ValueError("need at least 2 features")
        if self.measure not in MEASURES:
            raise ValueError(f"unknown measure {self.measure!r}, expected one of {MEASURES}")
        if not np.array_equal(weights, weights.T):
            raise ValueError("weights must be exactly symmetric")
        if weights.min() < 0:
            raise ValueError("weights must be non-negative")
        weights.flags.writeable = False

    @property
    def n(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class OffdiagStats:
    """Statistics of the multiset of off-diagonal weights (each pair once)."""

    min: float
    max: float
    mean: float
    median: float
    sorted_values: np.ndarray


def _resolve_threads(threads):
    if threads is None:
        return os.cpu_count() or 1
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    return threads


def _blocked_rows(n, compute_block, threads):
    """Fill an n x n matrix by row blocks, optionally in parallel.

    ``compute_block(a, b)`` returns rows a..b of the matrix.  Blocks are
    independent and written to disjoint slices, so scheduling order cannot
    affect the result.
    """
    out = np.empty((n, n), dtype=np.float64)
    bounds = [(a, min(a + _BLOCK, n)) for a in range(0, n, _BLOCK)]
    if threads == 1 or len(bounds) == 1:
        for a, b in bounds:
            out[a:b] = compute_block(a, b)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for (a, b), block in zip(bounds, pool.map(lambda ab: compute_block(*ab), bounds)):
                out[a:b] = block
    return out


def _mirror_upper(raw, diagonal):
    """Keep the upper triangle of ``raw``, mirror it, and set the diagonal."""
    w = np.triu(raw, 1)
    w = w + w.T
    np.fill_diagonal(w, diagonal)
    return w


def pearson_similarity(X: DataMatrix, threads=None) -> SimilarityMatrix:
    """Pearson correlation of every column pair, shifted to [0, 2].

    Zero-variance columns have undefined correlation; it is taken as 0, so
    every pair involving such a column gets the neutral weight 1.  Tiny
    excursions outside [-1, 1] from floating-point error are clamped.
    """
    threads = _resolve_threads(threads)
    values = X.values
    m = X.m
    # exact-equality test: the computed std of a constant column can be a
    # tiny non-zero residue, which would turn into garbage correlations
    constant = np.all(values == values[0], axis=0)
    centered = values - values.mean(axis=0)
    std = np.sqrt(np.mean(centered**2, axis=0))
    nonconst = ~constant & (std > 0)
    z = np.where(nonconst, centered / np.where(nonconst, std, 1.0), 0.0)

    def block(a, b):
        corr = z[:, a:b].T @ z / m
        return np.clip(corr, -1.0, 1.0) + 1.0

    raw = _blocked_rows(X.n, block, threads)
    weights = _mirror_upper(raw, np.where(nonconst, 2.0, 1.0))
    return SimilarityMatrix(weights, "pearson")


def distance_similarity(X: DataMatrix, kind: str, threads=None) -> SimilarityMatrix:
    """Similarity as (max pairwise column distance) - distance.

    ``kind`` is one of canberra, chebyshev, manhattan, euclidean.  The
    offset is the maximum distance over distinct pairs, so the farthest
    pair gets weight exactly 0 and self-similarity is the matrix maximum.
    Canberra terms with a zero denominator contribute 0.
    """
    if kind == "pearson":
        raise ValueError("use pearson_similarity for the pearson measure")
    if kind not in _CDIST_METRIC:
        raise ValueError(f"unknown measure {kind!r}, expected one of {MEASURES}")
    threads = _resolve_threads(threads)
    cols = np.ascontiguousarray(X.values.T)
    metric = _CDIST_METRIC[kind]

    dist = _blocked_rows(X.n, lambda a, b: cdist(cols[a:b], cols, metric=metric), threads)
    dist = _mirror_upper(dist, 0.0)
    iu = np.triu_indices(X.n, 1)
    max_dist = float(dist[iu].max())
    weights = _mirror_upper(max_dist - dist, max_dist)
    return SimilarityMatrix(weights, kind)


def feature_similarity(X: DataMatrix, measure: str, threads=None) -> SimilarityMatrix:
    """Compute the similarity matrix for any supported measure."""
    if measure == "pearson":
        return pearson_similarity(X, threads=threads)
    return distance_similarity(X, measure, threads=threads)


def offdiag_stats(W: SimilarityMatrix) -> OffdiagStats:
    """Statistics over the multiset of weights of distinct pairs (j < k)."""
    iu = np.triu_indices(W.n, 1)
    values = np.sort(W.weights[iu])
    values.flags.writeable = False
    return OffdiagStats(
        min=float(values[0]),
        max=float(values[-1]),
        mean=float(values.mean()),
        median=float(np.median(values)),
        sorted_values=values,
    )


def weights_to_text(W: SimilarityMatrix) -> str:
    """Row-major text dump of W for caching across invocations.

    First line holds the node count and measure; each following line is one
    row of space-separated repr floats, so a reload is bit-exact.
    """
    lines = [f"{W.n} {W.measure}"]
    lines.extend(" ".join(repr(float(v)) for v in row) for row in W.weights)
    return "\n".join(lines) + "\n"


def weights_from_text(text: str) -> SimilarityMatrix:
    """Parse a matrix written by :func:`weights_to_text`."""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty weights dump")
    header = lines[0].split()
    if len(header) != 2 or not header[0].isdigit():
        raise ValueError("malformed weights header, expected 'n measure'")
    n, measure = int(header[0]), header[1]
    rows = [np.array(line.split(), dtype=np.float64) for line in lines[1:]]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"expected {n} rows of {n} values in weights dump")
    return SimilarityMatrix(np.array(rows), measure)


def save_weights(W: SimilarityMatrix, path) -> None:
    """Write :func:`weights_to_text` output to a file."""
    with open(path, "w") as fh:
        fh.write(weights_to_text(W))


def load_weights(path) -> SimilarityMatrix:
    """Read a matrix written by :func:`save_weights`."""
    with open(path) as fh:
        return weights_from_text(fh.read())
