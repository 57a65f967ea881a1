"""Dataset generation, CSV ingestion, feature scaling, and splitting.

Features are min-max scaled to [0, pi] before training so encoding angles
stay bounded; the scaler is fitted on the training partition and applied
(with clipping) to validation rows.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

SCALE_RANGE = (0.0, math.pi)

# Default column choices for the two CSV benchmarks (overridable).
DIABETES_FEATURES = ("Glucose", "BMI", "Age")
DIABETES_TARGET = "Outcome"
BANKNOTE_FEATURES = ("variance", "skewness")
BANKNOTE_TARGET = "class"


@dataclass
class Dataset:
    features: np.ndarray               # (m, k) float64
    targets: np.ndarray                # (m,) int, values 0/1
    names: tuple[str, ...]             # k feature labels
    scaling: tuple[np.ndarray, np.ndarray] | None = None  # fitted per-feature (min, max)

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]


def generate_synthetic(seed: int, n_rows: int = 350) -> Dataset:
    """Balanced binary problem: two informative features drawn from
    unit-variance Gaussian clusters at opposite corners (-1,-1) / (+1,+1),
    plus one pure-noise feature. Deterministic per seed."""
    rng = np.random.default_rng(seed)
    half = n_rows // 2
    targets = np.array([0] * (n_rows - half) + [1] * half)
    centers = np.where(targets[:, None] == 1, 1.0, -1.0)
    informative = rng.normal(0.0, 1.0, size=(n_rows, 2)) + centers
    noise = rng.normal(0.0, 1.0, size=(n_rows, 1))
    order = rng.permutation(n_rows)
    features = np.hstack([informative, noise])[order]
    return Dataset(features, targets[order],
                   ("informative_0", "informative_1", "noise"))


def load_csv(path, feature_columns, target_column) -> Dataset:
    """Read selected numeric columns plus a binary target from a
    comma-separated file with a header row."""
    feature_columns = tuple(feature_columns)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        missing = [c for c in (*feature_columns, target_column) if c not in header]
        if missing:
            raise ValueError(f"{path}: columns not found: {', '.join(missing)} "
                             f"(header has {', '.join(header)})")
        fcols = [header.index(c) for c in feature_columns]
        tcol = header.index(target_column)
        rows = []
        targets = []
        for lineno, record in enumerate(reader, start=2):
            if not record or all(not cell.strip() for cell in record):
                continue
            values = []
            for col, name in zip((*fcols, tcol), (*feature_columns, target_column)):
                cell = record[col].strip() if col < len(record) else ""
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ValueError(
                        f"{path}: non-numeric value {cell!r} at row {lineno}, "
                        f"column {name!r}") from None
            rows.append(values[:-1])
            targets.append(values[-1])
    if not rows:
        raise ValueError(f"{path}: no data rows")
    targets = np.asarray(targets)
    if not np.all(np.isin(targets, (0.0, 1.0))):
        bad = sorted(set(targets) - {0.0, 1.0})
        raise ValueError(f"{path}: target column {target_column!r} must be "
                         f"binary 0/1, found {bad}")
    return Dataset(np.asarray(rows, dtype=float), targets.astype(int),
                   feature_columns)


def scale_minmax(dataset: Dataset, reference: Dataset | None = None) -> Dataset:
    """Affinely map each feature to [0, pi]. With a ``reference`` (the
    training partition) its fitted ranges are reused and out-of-range values
    are clipped, so validation rows stay inside the encoding interval."""
    if reference is not None:
        if reference.scaling is None:
            raise ValueError("reference dataset has no fitted scaling")
        lo, hi = reference.scaling
    else:
        lo = dataset.features.min(axis=0)
        hi = dataset.features.max(axis=0)
        degenerate = np.flatnonzero(hi - lo == 0.0)
        if degenerate.size:
            names = ", ".join(dataset.names[i] for i in degenerate)
            raise ValueError(f"constant feature(s) cannot be scaled: {names}")
    span = SCALE_RANGE[1] - SCALE_RANGE[0]
    scaled = SCALE_RANGE[0] + (dataset.features - lo) / (hi - lo) * span
    scaled = np.clip(scaled, SCALE_RANGE[0], SCALE_RANGE[1])
    return Dataset(scaled, dataset.targets.copy(), dataset.names, (lo, hi))


def split(dataset: Dataset, train_fraction: float = 0.8,
          seed: int = 0) -> tuple[Dataset, Dataset]:
    """Seeded row shuffle, then partition. The validation side gets
    floor(m * (1 - train_fraction)) rows."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    m = dataset.n_rows
    n_val = int(math.floor(m * (1.0 - train_fraction) + 1e-9))
    perm = np.random.default_rng(seed).permutation(m)
    train_idx, val_idx = perm[:m - n_val], perm[m - n_val:]
    make = lambda idx: Dataset(dataset.features[idx].copy(),
                               dataset.targets[idx].copy(),
                               dataset.names, dataset.scaling)
    return make(train_idx), make(val_idx)
