"""SMOTE oversampling of the minority class.

A synthetic sample is ``x_i + lam * (x_j - x_i)`` where ``x_i`` is a
minority row, ``x_j`` one of its nearest minority neighbours and
``lam ~ U[0, 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import check_array, check_binary_labels, check_seed
from .exceptions import DataValidationError


@dataclass(frozen=True)
class SmoteConfig:
    k_neighbors: int = 5
    target_ratio: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.k_neighbors, int) or self.k_neighbors < 1:
            raise DataValidationError(f"k_neighbors must be a positive integer, got {self.k_neighbors!r}")
        if not 0.0 < self.target_ratio <= 1.0:
            raise DataValidationError(f"target_ratio must be in (0, 1], got {self.target_ratio!r}")
        check_seed(self.seed)


@dataclass(frozen=True)
class SyntheticRecord:
    """Provenance of one synthetic row; indices refer to rows of the input matrix."""

    i: int
    j: int
    lam: float


@dataclass(frozen=True)
class ResampledSet:
    features: np.ndarray
    labels: np.ndarray
    synthetic_flags: np.ndarray
    records: tuple[SyntheticRecord, ...]
    minority_label: int
    duplicated_singleton: bool = False

    @property
    def n_synthetic(self):
        return int(self.synthetic_flags.sum())


def interpolate(x_i, x_j, lam):
    x_i = np.asarray(x_i, dtype=np.float64)
    x_j = np.asarray(x_j, dtype=np.float64)
    if x_i.shape != x_j.shape:
        raise DataValidationError(f"dimension mismatch: {x_i.shape} vs {x_j.shape}")
    if not 0.0 <= lam <= 1.0:
        raise DataValidationError(f"lambda must lie in [0, 1], got {lam}")
    if lam == 1.0:
        return x_j.copy()
    out = x_i + lam * (x_j - x_i)
    # rounding can overshoot the segment by an ulp
    return np.clip(out, np.minimum(x_i, x_j), np.maximum(x_i, x_j))


def k_nearest_minority(query_index, minority_rows, k):
    """Ordinals of the ``k`` nearest other rows, Euclidean, ties to lower ordinal."""
    rows = np.asarray(minority_rows, dtype=np.float64)
    if rows.ndim == 1:
        rows = rows.reshape(-1, 1)
    n = rows.shape[0]
    if n < 2:
        raise DataValidationError("need at least 2 minority rows to find neighbours")
    if not 0 <= query_index < n:
        raise DataValidationError(f"query index {query_index} out of range for {n} rows")
    if k < 1:
        raise DataValidationError(f"k must be positive, got {k}")
    k = min(k, n - 1)
    dist = np.sum((rows - rows[query_index]) ** 2, axis=1)
    dist[query_index] = np.inf
    order = np.argsort(dist, kind="stable")
    return [int(o) for o in order[:k]]


def smote_balance(features, labels, config=SmoteConfig()):
    """Append synthetic minority rows until minority/majority reaches ``target_ratio``.

    Original rows are kept, in order, ahead of the synthetics. A lone
    minority row is duplicated rather than interpolated and
    ``duplicated_singleton`` is set so callers can disclose it.
    """
    X = check_array(features, name="features")
    y = check_binary_labels(labels, X.shape[0])
    classes, counts = np.unique(y, return_counts=True)
    if classes.size < 2:
        raise DataValidationError("SMOTE needs both classes present")
    # equal counts: label 1 is treated as minority, and nothing is generated anyway
    minority_label = int(classes[np.argmin(counts)]) if counts[0] != counts[1] else 1
    minority_idx = np.flatnonzero(y == minority_label)
    n_min = minority_idx.size
    n_maj = y.size - n_min
    n_new = max(0, math.ceil(config.target_ratio * n_maj) - n_min)

    rng = np.random.default_rng(config.seed)
    minority = X[minority_idx]
    new_rows = np.empty((n_new, X.shape[1]))
    records = []
    neighbours = {}
    singleton = n_min == 1
    for s in range(n_new):
        a = int(rng.integers(n_min))
        if singleton:
            b, lam = a, 0.0
        else:
            if a not in neighbours:
                neighbours[a] = k_nearest_minority(a, minority, config.k_neighbors)
            cand = neighbours[a]
            b = cand[int(rng.integers(len(cand)))]
            lam = float(rng.random())
        new_rows[s] = interpolate(minority[a], minority[b], lam)
        records.append(SyntheticRecord(int(minority_idx[a]), int(minority_idx[b]), lam))

    return ResampledSet(
        features=np.vstack([X, new_rows]) if n_new else X.copy(),
        labels=np.concatenate([y, np.full(n_new, minority_label, dtype=np.int64)]),
        synthetic_flags=np.concatenate([np.zeros(y.size, bool), np.ones(n_new, bool)]),
        records=tuple(records),
        minority_label=minority_label,
        duplicated_singleton=singleton and n_new > 0,
    )


class SMOTE(BaseEstimator):
    """Resampler with the ``fit_resample`` convention used by imbalanced-learn."""

    def __init__(self, k_neighbors=5, target_ratio=1.0, random_state=0):
        self.k_neighbors = k_neighbors
        self.target_ratio = target_ratio
        self.random_state = random_state

    def fit_resample(self, X, y):
        config = SmoteConfig(self.k_neighbors, self.target_ratio, check_seed(self.random_state))
        result = smote_balance(X, y, config)
        self.result_ = result
        self.sample_indices_ = np.flatnonzero(~result.synthetic_flags)
        return result.features, result.labels
