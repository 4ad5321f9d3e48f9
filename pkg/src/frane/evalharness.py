"""Ranking evaluation by cross-validated 5NN feature reconstruction.

A ranking is scored by how well its top n' features reconstruct all
feature values of held-out rows: each test row is predicted as the mean of
its k nearest training rows, nearness measured in the selected-feature
subspace, and the error is the mean absolute residual normalized by the
training-side standard deviation of each feature (RMAE), averaged over
features, test rows and folds.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .dataset import DataMatrix, split_folds, take_fold


@dataclass(frozen=True)
class EvalConfig:
    folds: int = 10
    k_neighbors: int = 5
    n_prime_list: tuple[int, ...] = (16,)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "n_prime_list", tuple(int(v) for v in self.n_prime_list))
        if self.folds < 2:
            raise ValueError(f"folds must be >= 2, got {self.folds}")
        if self.k_neighbors < 1:
            raise ValueError(f"k_neighbors must be >= 1, got {self.k_neighbors}")
        if not self.n_prime_list:
            raise ValueError("n_prime_list must not be empty")
        if min(self.n_prime_list) < 1:
            raise ValueError(f"every n' must be >= 1, got {self.n_prime_list}")


@dataclass(frozen=True)
class EvalReport:
    """Per-fold and fold-averaged RMAE for each evaluated n'.

    ``excluded_per_fold`` counts features skipped from the RMAE average
    because their training-side standard deviation was zero.
    """

    n_prime_list: tuple[int, ...]
    per_fold_rmae: np.ndarray
    excluded_per_fold: tuple[int, ...]

    def __post_init__(self):
        per_fold = np.asarray(self.per_fold_rmae, dtype=np.float64)
        object.__setattr__(self, "per_fold_rmae", per_fold)
        object.__setattr__(self, "n_prime_list", tuple(self.n_prime_list))
        object.__setattr__(self, "excluded_per_fold", tuple(self.excluded_per_fold))
        if per_fold.ndim != 2 or per_fold.shape[1] != len(self.n_prime_list):
            raise ValueError("per_fold_rmae must be folds x len(n_prime_list)")
        if per_fold.min() < 0:
            raise ValueError("RMAE values must be non-negative")
        per_fold.flags.writeable = False

    @property
    def folds(self) -> int:
        return self.per_fold_rmae.shape[0]

    @property
    def mean_rmae(self) -> np.ndarray:
        return self.per_fold_rmae.mean(axis=0)


def knn_reconstruct(train: DataMatrix, test: DataMatrix, selected, k: int) -> np.ndarray:
    """Predict every feature of each test row from its k nearest train rows.

    Neighbors are found by Euclidean distance restricted to the ``selected``
    columns; distance ties prefer the lower train-row index.  When the
    train part has fewer than k rows, all of them are used.  The prediction
    is the plain mean of the neighbors' full rows.
    """
    selected = np.asarray(selected, dtype=np.int64)
    if len(selected) == 0:
        raise ValueError("selected feature set must not be empty")
    if selected.min() < 0 or selected.max() >= train.n:
        raise ValueError(f"selected indices out of range for n={train.n}")
    if train.n != test.n:
        raise ValueError("train and test must share the feature set")
    k_eff = min(k, train.m)
    distances = cdist(test.values[:, selected], train.values[:, selected])
    # stable argsort keeps ascending train index among equal distances
    neighbors = np.argsort(distances, axis=1, kind="stable")[:, :k_eff]
    return train.values[neighbors].mean(axis=1)


def rmae(predicted: np.ndarray, actual: DataMatrix, sigma: np.ndarray) -> float:
    """Relative mean absolute error of a reconstruction.

    Mean over features of (mean absolute residual / sigma of the feature).
    Features with sigma 0 are excluded from the average; it is an error if
    that excludes everything.
    """
    predicted = np.asarray(predicted, dtype=np.float64)
    sigma = np.asarray(sigma, dtype=np.float64)
    if predicted.shape != actual.values.shape:
        raise ValueError(
            f"predicted shape {predicted.shape} does not match test shape {actual.values.shape}"
        )
    if len(sigma) != actual.n:
        raise ValueError("one sigma per feature required")
    usable = sigma > 0
    if not usable.any():
        raise ValueError("all features have zero variance on the train part")
    residual = np.abs(predicted - actual.values).mean(axis=0)
    return float((residual[usable] / sigma[usable]).mean())


def evaluate_ranking(X: DataMatrix, ranker, config: EvalConfig) -> EvalReport:
    """Cross-validate a ranker: rank on train, reconstruct test, score RMAE.

    ``ranker`` maps a train DataMatrix to a FeatureRanking (anything with
    a ``top(count)`` method).  For each fold and each n' in the config, the
    n' top-ranked features drive the kNN reconstruction of the test fold.
    Deterministic given the config seed.
    """
    if max(config.n_prime_list) > X.n:
        raise ValueError(
            f"n'={max(config.n_prime_list)} exceeds the feature count {X.n}"
        )
    split = split_folds(X.m, config.folds, config.seed)
    per_fold = np.zeros((config.folds, len(config.n_prime_list)))
    excluded = []
    for fold in range(config.folds):
        train, test = take_fold(X, split, fold)
        ranking = ranker(train)
        sigma = train.values.std(axis=0)
        excluded.append(int((sigma == 0).sum()))
        for col, n_prime in enumerate(config.n_prime_list):
            selected = ranking.top(n_prime)
            predicted = knn_reconstruct(train, test, selected, config.k_neighbors)
            per_fold[fold, col] = rmae(predicted, test, sigma)
    return EvalReport(
        n_prime_list=config.n_prime_list,
        per_fold_rmae=per_fold,
        excluded_per_fold=tuple(excluded),
    )


def error_curve_points(n: int) -> list[int]:
    """The n' grid for error curves: powers of two up to n, plus n itself."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    points = []
    p = 1
    while p <= n:
        points.append(p)
        p *= 2
    if points[-1] != n:
        points.append(n)
    return points


def report_to_csv(report: EvalReport) -> str:
    """CSV rows fold,n_prime,rmae followed by mean,n_prime,rmae summary rows."""
    lines = ["fold,n_prime,rmae"]
    for fold in range(report.folds):
        for col, n_prime in enumerate(report.n_prime_list):
            lines.append(f"{fold},{n_prime},{repr(float(report.per_fold_rmae[fold, col]))}")
    mean = report.mean_rmae
    for col, n_prime in enumerate(report.n_prime_list):
        lines.append(f"mean,{n_prime},{repr(float(mean[col]))}")
    return "\n".join(lines) + "\n"
