"""Tabular data model, CSV ingestion and deterministic fold splitting."""

import csv
import math
import os
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class DataMatrix:
    """Dense numeric table of m examples (rows) by n features (columns).

    All values must be finite and feature names unique.  At least three
    features are required because downstream score statistics take medians
    of three values.  Instances are immutable; the value buffer is marked
    read-only so they can be shared freely.
    """

    values: np.ndarray
    feature_names: tuple[str, ...]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError(f"expected a 2-d matrix, got shape {values.shape}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        m, n = values.shape
        if m < 1:
            raise ValueError("need at least 1 example row")
        if n < 3:
            raise ValueError(f"need at least 3 features, got {n}")
        if len(self.feature_names) != n:
            raise ValueError(
                f"{len(self.feature_names)} feature names for {n} columns"
            )
        if len(set(self.feature_names)) != n:
            dupes = sorted({x for x in self.feature_names if self.feature_names.count(x) > 1})
            raise ValueError(f"duplicate feature names: {dupes}")
        if not np.all(np.isfinite(values)):
            i, j = np.argwhere(~np.isfinite(values))[0]
            raise ValueError(
                f"non-finite value in row {i + 1}, column {self.feature_names[j]!r}"
            )
        values.flags.writeable = False

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]

    def column(self, j: int) -> np.ndarray:
        return self.values[:, j]


@dataclass(frozen=True)
class FoldSplit:
    """Assignment of m rows to cross-validation folds.

    Fold sizes differ by at most one and the assignment is a pure function
    of (m, fold_count, seed).
    """

    fold_count: int
    assignments: np.ndarray
    seed: int = field(default=0)

    def __post_init__(self):
        assignments = np.asarray(self.assignments, dtype=np.int64)
        object.__setattr__(self, "assignments", assignments)
        counts = np.bincount(assignments, minlength=self.fold_count)
        if len(counts) != self.fold_count or counts.min() < 1:
            raise ValueError("every fold index must appear at least once")
        if counts.max() - counts.min() > 1:
            raise ValueError("fold sizes must differ by at most one")
        assignments.flags.writeable = False

    @property
    def m(self) -> int:
        return len(self.assignments)


def load_csv(path, ignore_columns=()) -> DataMatrix:
    """Read a headered, comma-separated numeric table into a DataMatrix.

    Columns named in ``ignore_columns`` (e.g. class labels) are dropped.
    Decimal separator is ".".  Any cell that does not parse as a finite
    real number is an error reported with its position; missing values are
    not imputed.
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(f"no such file: {path}")
    with open(path, newline="") as fh:
        return _parse_csv(csv.reader(fh), ignore_columns, source=str(path))


def parse_csv_text(text: str, ignore_columns=()) -> DataMatrix:
    """Same as :func:`load_csv` but from an in-memory CSV string."""
    return _parse_csv(csv.reader(text.splitlines()), ignore_columns, source="<csv>")


def _parse_csv(reader, ignore_columns, source):
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError(f"{source}: empty file, expected a header row") from None
    header = [h.strip() for h in header]
    if len(set(header)) != len(header):
        dupes = sorted({h for h in header if header.count(h) > 1})
        raise ValueError(f"{source}: duplicate header names: {dupes}")
    ignore = set(ignore_columns)
    unknown = ignore - set(header)
    if unknown:
        raise ValueError(f"{source}: ignored columns not in header: {sorted(unknown)}")
    keep = [j for j, h in enumerate(header) if h not in ignore]
    names = [header[j] for j in keep]
    if len(names) < 3:
        raise ValueError(
            f"{source}: need at least 3 features, got {len(names)} after ignoring"
        )

    rows = []
    # line numbers are 1-based file lines; the header is line 1
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise ValueError(
                f"{source}: line {line_no} has {len(row)} cells, expected {len(header)}"
            )
        parsed = []
        for j in keep:
            cell = row[j].strip()
            try:
                value = float(cell)
            except ValueError:
                raise ValueError(
                    f"{source}: non-numeric cell {cell!r} at line {line_no}, "
                    f"column {header[j]!r}"
                ) from None
            if not math.isfinite(value):
                raise ValueError(
                    f"{source}: non-finite cell {cell!r} at line {line_no}, "
                    f"column {header[j]!r}"
                )
            parsed.append(value)
        rows.append(parsed)
    if not rows:
        raise ValueError(f"{source}: no data rows")
    return DataMatrix(np.array(rows, dtype=np.float64), tuple(names))


def write_csv(X: DataMatrix, path) -> None:
    """Write a DataMatrix back to CSV; floats use repr so a reload is exact."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(X.feature_names)
        for row in X.values:
            writer.writerow([repr(float(v)) for v in row])


def split_folds(m: int, fold_count: int, seed: int) -> FoldSplit:
    """Partition row indices 0..m-1 into near-equal folds after a seeded shuffle."""
    if fold_count < 2:
        raise ValueError(f"fold_count must be >= 2, got {fold_count}")
    if m < fold_count:
        raise ValueError(f"cannot split {m} rows into {fold_count} folds")
    rng = np.random.default_rng(seed)
    order = rng.permutation(m)
    assignments = np.empty(m, dtype=np.int64)
    for fold, chunk in enumerate(np.array_split(order, fold_count)):
        assignments[chunk] = fold
    return FoldSplit(fold_count=fold_count, assignments=assignments, seed=seed)


def take_fold(X: DataMatrix, split: FoldSplit, fold: int):
    """Split X into (train, test) for one fold; relative row order is kept."""
    if X.m != split.m:
        raise ValueError(f"split covers {split.m} rows but X has {X.m}")
    if not 0 <= fold < split.fold_count:
        raise ValueError(f"fold {fold} out of range [0, {split.fold_count})")
    mask = split.assignments == fold
    train = DataMatrix(X.values[~mask], X.feature_names)
    test = DataMatrix(X.values[mask], X.feature_names)
    return train, test
