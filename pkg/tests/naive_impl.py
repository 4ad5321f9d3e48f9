"""Slow, direct reimplementations used as oracles by the test suite.

Everything here recomputes results from first principles: per-pair loops,
per-threshold graph rebuilds and dense power iteration, with none of the
incremental machinery of the package under test.
"""

import math
import statistics

import numpy as np


def pearson_weights(values):
    """Correlation + 1 per column pair via the covariance/sigma formula."""
    m, n = values.shape
    w = np.empty((n, n))
    for j in range(n):
        for k in range(n):
            fj, fk = values[:, j], values[:, k]
            sj = math.sqrt(sum((x - fj.mean()) ** 2 for x in fj) / m)
            sk = math.sqrt(sum((x - fk.mean()) ** 2 for x in fk) / m)
            if sj == 0 or sk == 0 or len(set(fj)) == 1 or len(set(fk)) == 1:
                w[j, k] = 1.0
                continue
            cov = sum((a - fj.mean()) * (b - fk.mean()) for a, b in zip(fj, fk)) / m
            corr = min(1.0, max(-1.0, cov / (sj * sk)))
            w[j, k] = corr + 1.0
    return w


def column_distance(u, v, kind):
    if kind == "manhattan":
        return sum(abs(a - b) for a, b in zip(u, v))
    if kind == "chebyshev":
        return max(abs(a - b) for a, b in zip(u, v))
    if kind == "euclidean":
        return math.sqrt(sum((a - b) ** 2 for a, b in zip(u, v)))
    if kind == "canberra":
        total = 0.0
        for a, b in zip(u, v):
            denom = abs(a) + abs(b)
            if denom > 0:
                total += abs(a - b) / denom
        return total
    raise ValueError(kind)


def distance_weights(values, kind):
    """max-distance minus distance, per column pair."""
    n = values.shape[1]
    d = np.zeros((n, n))
    for j in range(n):
        for k in range(n):
            d[j, k] = column_distance(values[:, j], values[:, k], kind)
    max_d = max(d[j, k] for j in range(n) for k in range(n) if j != k)
    return max_d - d


def offdiag_values(w):
    n = w.shape[0]
    return [w[j, k] for j in range(n) for k in range(n) if j < k]


def geometric_thresholds(offdiag, count):
    """Geometric dissimilarity spacing with exact pinned endpoints."""
    max_w = max(offdiag)
    min_w = min(offdiag)
    gaps = sorted({max_w - w for w in offdiag if w < max_w})
    if not gaps:
        return [max_w]
    if len(gaps) == 1:
        return [min_w] * count
    lo, hi = gaps[0], gaps[-1]
    values = [max_w - lo * (hi / lo) ** ((i - 1) / (count - 1)) for i in range(1, count + 1)]
    values[0] = max_w - lo
    values[-1] = min_w
    return [min(max(v, min_w), max_w) for v in values]


def pagerank_power(weights, damping=0.85, tol=1e-10, max_iter=100000):
    """Repeated application of the dense transition matrix.

    ``weights`` is a symmetric matrix with zeros for absent edges; columns
    with zero total weight distribute uniformly.
    """
    n = weights.shape[0]
    transition = np.empty((n, n))
    for k in range(n):
        total = weights[:, k].sum()
        if total == 0:
            transition[:, k] = 1.0 / n
        else:
            transition[:, k] = weights[:, k] / total
    pr = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        new = (1.0 - damping) / n + damping * (transition @ pr)
        if np.abs(new - pr).sum() < tol:
            return new
        pr = new
    return pr


def rqh_value(scores):
    ordered = sorted(scores)
    return statistics.median(ordered[-3:]) / statistics.median(ordered[:3])


def frane_pipeline(values, count=100, min_avg_degree=1.0, damping=0.85):
    """Full pipeline with per-threshold graph rebuilds and exhaustive scan.

    Returns (chosen schedule index, importance order, candidate indexes).
    """
    m, n = values.shape
    w = pearson_weights(values)
    thresholds = geometric_thresholds(offdiag_values(w), count)
    candidates = []
    for idx, t in enumerate(thresholds):
        if any(t == prev_t for prev_t, _, _ in candidates):
            continue  # identical graph already evaluated
        active = np.zeros((n, n))
        edge_count = 0
        for j in range(n):
            for k in range(j + 1, n):
                if w[j, k] >= t:
                    active[j, k] = active[k, j] = w[j, k]
                    edge_count += 1
        if edge_count / n < min_avg_degree:
            continue
        scores = pagerank_power(active, damping)
        candidates.append((t, idx, scores))
    best = None
    for t, idx, scores in candidates:
        value = rqh_value(scores)
        if best is None or value > best[0]:
            best = (value, idx, scores)
    if best is None:
        raise ValueError("no qualifying graph")
    order = np.argsort(-best[2], kind="stable")
    return best[1], order, [idx for _, idx, _ in candidates]


def knn_rmae(train, test, selected, k):
    """Reconstruction RMAE with explicit loops over test rows and features."""
    m_train, n = train.shape
    m_test = test.shape[0]
    sigma = [math.sqrt(sum((x - train[:, i].mean()) ** 2 for x in train[:, i]) / m_train)
             for i in range(n)]
    k_eff = min(k, m_train)
    predictions = np.zeros((m_test, n))
    for r in range(m_test):
        dists = []
        for s in range(m_train):
            d = math.sqrt(sum((test[r, c] - train[s, c]) ** 2 for c in selected))
            dists.append((d, s))
        neighbors = [s for _, s in sorted(dists, key=lambda p: (p[0], p[1]))[:k_eff]]
        for i in range(n):
            predictions[r, i] = sum(train[s, i] for s in neighbors) / k_eff
    total = 0.0
    usable = 0
    for i in range(n):
        if sigma[i] == 0:
            continue
        usable += 1
        total += sum(abs(predictions[r, i] - test[r, i]) for r in range(m_test)) / m_test / sigma[i]
    return total / usable
