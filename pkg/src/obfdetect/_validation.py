"""Input validation helpers shared by the estimators."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .exceptions import DataValidationError, NotFittedError


def check_array(X, *, name="X"):
    """Return ``X`` as a 2-D float64 ndarray, rejecting non-finite values.

    Sparse input is densified; the toolkit works at desk scale where a
    dense design matrix is cheaper than sparse bookkeeping in the
    training loops.
    """
    if sp.issparse(X):
        X = X.toarray()
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise DataValidationError(f"{name} must be 2-dimensional, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise DataValidationError(f"{name} contains non-finite values")
    return X


def check_binary_labels(y, n_samples=None):
    y = np.asarray(y)
    if y.ndim != 1:
        raise DataValidationError("labels must be a 1-D sequence")
    if y.size and not np.all(np.isin(y, (0, 1))):
        bad = sorted(set(y.tolist()) - {0, 1})
        raise DataValidationError(f"labels must be 0 or 1, found {bad[:5]}")
    if n_samples is not None and y.shape[0] != n_samples:
        raise DataValidationError(
            f"X has {n_samples} rows but y has {y.shape[0]} labels"
        )
    return y.astype(np.int64)


def check_X_y(X, y, *, require_both_classes=False):
    X = check_array(X)
    y = check_binary_labels(y, X.shape[0])
    if X.shape[0] == 0:
        raise DataValidationError("need at least one sample")
    if require_both_classes and np.unique(y).size < 2:
        raise DataValidationError(
            f"need samples from both classes, got only label {int(y[0])}"
        )
    return X, y


def check_is_fitted(estimator, attribute):
    if not hasattr(estimator, attribute):
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted; call fit() first"
        )


def check_n_features(estimator, X):
    expected = estimator.n_features_in_
    if X.shape[1] != expected:
        raise DataValidationError(
            f"X has {X.shape[1]} features, but {type(estimator).__name__} "
            f"was fitted with {expected}"
        )


def check_seed(seed):
    """Seeds are mandatory and must fit in an unsigned 64-bit integer."""
    if isinstance(seed, (bool, np.bool_)) or not isinstance(seed, (int, np.integer)):
        raise DataValidationError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise DataValidationError(f"seed must be in [0, 2**64), got {seed}")
    return seed
