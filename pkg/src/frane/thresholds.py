"""Edge-weight threshold schedules for the graph sweep.

The default schedule spaces thresholds geometrically in dissimilarity
(offset from the maximal weight), which probes the high-similarity region
densely.  Linear and quantile progressions are alternatives.
"""

import math
from dataclasses import dataclass

import numpy as np

from .similarity import OffdiagStats

PROGRESSIONS = ("geometric", "linear_min", "linear_mean", "linear_median", "quantile")


@dataclass(frozen=True)
class ThresholdSchedule:
    """Ordered list of edge-weight thresholds, all within [min(W'), max(W')]."""

    values: np.ndarray
    progression: str

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or len(values) == 0:
            raise ValueError("schedule must be a non-empty 1-d sequence")
        if self.progression not in PROGRESSIONS:
            raise ValueError(
                f"unknown progression {self.progression!r}, expected one of {PROGRESSIONS}"
            )
        values.flags.writeable = False

    def __len__(self):
        return len(self.values)


def geometric_schedule(stats: OffdiagStats, count: int) -> ThresholdSchedule:
    """Thresholds at geometrically spaced offsets below the maximal weight.

    With M = max weight and D the set of distinct positive gaps M - w over
    off-diagonal weights, threshold i (1-based) is
    M - min(D) * (max(D)/min(D)) ** ((i-1)/(count-1)), descending from just
    below M down to the minimal weight.  Endpoints are pinned exactly so
    the last threshold always admits every edge.  Degenerate cases: all
    weights equal gives the single threshold [M]; one distinct gap gives
    ``count`` copies of the minimal weight.
    """
    if count < 2:
        raise ValueError(f"count must be >= 2, got {count}")
    gaps = stats.max - stats.sorted_values
    diss = np.unique(gaps[gaps > 0])
    if len(diss) == 0:
        return ThresholdSchedule(np.array([stats.max]), "geometric")
    if len(diss) == 1:
        return ThresholdSchedule(np.full(count, stats.min), "geometric")
    lo, hi = diss[0], diss[-1]
    exponents = np.arange(count) / (count - 1)
    values = stats.max - lo * (hi / lo) ** exponents
    # pin both ends: (hi/lo)**0 is exact but lo*(hi/lo)**1 may round past hi
    values[0] = stats.max - lo
    values[-1] = stats.min
    np.clip(values, stats.min, stats.max, out=values)
    return ThresholdSchedule(values, "geometric")


def linear_schedule(a: float, b: float, count: int, progression="linear_min") -> ThresholdSchedule:
    """``count`` evenly spaced thresholds from a to b inclusive."""
    if count < 2:
        raise ValueError(f"count must be >= 2, got {count}")
    if a > b:
        raise ValueError(f"lower endpoint {a} exceeds upper endpoint {b}")
    return ThresholdSchedule(np.linspace(a, b, count), progression)


def quantile_schedule(sorted_offdiag, count: int) -> ThresholdSchedule:
    """Thresholds at the i-th count-quantiles of the off-diagonal weights.

    Nearest-rank definition: quantile i is the element at position
    ceil(i * L / count) (1-based) of the ascending weight list.
    """
    if count < 2:
        raise ValueError(f"count must be >= 2, got {count}")
    values = np.asarray(sorted_offdiag, dtype=np.float64)
    if len(values) == 0:
        raise ValueError("empty weight list")
    length = len(values)
    ranks = [math.ceil(i * length / count) - 1 for i in range(1, count + 1)]
    return ThresholdSchedule(values[ranks], "quantile")


def make_schedule(stats: OffdiagStats, progression: str, count: int) -> ThresholdSchedule:
    """Build the schedule for a named progression from off-diagonal stats."""
    if progression == "geometric":
        return geometric_schedule(stats, count)
    if progression == "linear_min":
        return linear_schedule(stats.min, stats.max, count, "linear_min")
    if progression == "linear_mean":
        return linear_schedule(stats.mean, stats.max, count, "linear_mean")
    if progression == "linear_median":
        return linear_schedule(stats.median, stats.max, count, "linear_median")
    if progression == "quantile":
        return quantile_schedule(stats.sorted_values, count)
    raise ValueError(f"unknown progression {progression!r}, expected one of {PROGRESSIONS}")
