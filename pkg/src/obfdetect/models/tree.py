"""CART decision tree with Gini impurity for binary labels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .._validation import check_array, check_is_fitted, check_n_features, check_seed, check_X_y
from ..exceptions import DataValidationError

_TIE_EPS = 1e-12


def gini_impurity(class_counts):
    n0, n1 = class_counts
    if n0 < 0 or n1 < 0:
        raise DataValidationError("class counts must be non-negative")
    total = n0 + n1
    if total == 0:
        raise DataValidationError("gini impurity of an empty node is undefined")
    p0, p1 = n0 / total, n1 / total
    return 1.0 - (p0 * p0 + p1 * p1)


@dataclass(frozen=True)
class Split:
    feature: int
    threshold: float
    impurity: float


def best_split(X, y, candidate_features=None, *, require_decrease=True):
    """Exhaustive midpoint scan minimizing count-weighted child Gini.

    Ties go to the lower feature ordinal, then the lower threshold. With
    ``require_decrease`` (the default) a split is only returned when it
    strictly lowers impurity; otherwise the best split that separates any
    two distinct values is returned even if the gain is zero.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    n = y.shape[0]
    if n < 2:
        return None
    feats = np.arange(X.shape[1]) if candidate_features is None else np.sort(np.asarray(candidate_features, dtype=np.int64))
    if feats.size == 0:
        return None
    cols = X[:, feats]
    order = np.argsort(cols, axis=0, kind="stable")
    values = np.take_along_axis(cols, order, axis=0)
    ones = np.cumsum(y[order] == 1, axis=0)[:-1].astype(np.float64)

    n_left = np.arange(1, n, dtype=np.float64)[:, None]
    n_right = n - n_left
    total_ones = float(np.sum(y == 1))
    zeros_left = n_left - ones
    ones_right = total_ones - ones
    zeros_right = n_right - ones_right
    # n_l * gini_l = n_l - (z_l^2 + o_l^2) / n_l
    weighted = (
        n_left - (zeros_left**2 + ones**2) / n_left + n_right - (zeros_right**2 + ones_right**2) / n_right
    ) / n
    valid = values[1:] > values[:-1]
    if not valid.any():
        return None
    weighted = np.where(valid, weighted, np.inf)
    best = weighted.min()
    parent = gini_impurity((n - total_ones, total_ones))
    if require_decrease and not best < parent - _TIE_EPS:
        return None

    # column-major scan = (feature, threshold) lexicographic order
    pos, col = np.nonzero((weighted <= best + _TIE_EPS).T)[::-1]
    pos, col = pos[0], col[0]
    lo, hi = values[pos, col], values[pos + 1, col]
    threshold = (lo + hi) / 2.0
    if not lo <= threshold < hi:
        threshold = lo
    return Split(int(feats[col]), float(threshold), float(weighted[pos, col]))


@dataclass
class TreeStructure:
    """Flat node arrays indexed by node id (root = 0); ``feature == -1`` marks a leaf."""

    feature: list
    threshold: list
    left: list
    right: list
    counts: list
    label: list

    @property
    def n_nodes(self):
        return len(self.feature)

    def apply(self, X):
        leaves = np.empty(X.shape[0], dtype=np.int64)
        for r in range(X.shape[0]):
            node = 0
            while self.feature[node] >= 0:
                node = self.left[node] if X[r, self.feature[node]] <= self.threshold[node] else self.right[node]
            leaves[r] = node
        return leaves

    def depth(self):
        depths = [0] * self.n_nodes
        for node in range(self.n_nodes):
            if self.feature[node] >= 0:
                depths[self.left[node]] = depths[self.right[node]] = depths[node] + 1
        return max(depths)

    def to_dict(self):
        return {k: list(getattr(self, k)) for k in ("feature", "threshold", "left", "right", "counts", "label")}

    @classmethod
    def from_dict(cls, data):
        return cls(
            feature=[int(v) for v in data["feature"]],
            threshold=[float(v) for v in data["threshold"]],
            left=[int(v) for v in data["left"]],
            right=[int(v) for v in data["right"]],
            counts=[[int(a), int(b)] for a, b in data["counts"]],
            label=[int(v) for v in data["label"]],
        )


def grow_tree(X, y, max_depth=None, min_samples_split=2, max_features=None, rng=None, subset_log=None):
    """Greedy recursive partitioning.

    A node becomes a leaf when pure, at ``max_depth``, below
    ``min_samples_split`` samples, or when no threshold separates its
    rows. If no split lowers impurity, the best zero-gain split is taken
    instead, so distinct inputs are always separated and an unbounded tree
    fits any conflict-free training set exactly. When ``max_features`` is
    set, each node draws a fresh feature subset from ``rng`` and appends it
    to ``subset_log``.
    """
    n_features = X.shape[1]
    tree = TreeStructure([], [], [], [], [], [])

    def new_node(idx):
        ones = int(np.sum(y[idx] == 1))
        zeros = idx.size - ones
        tree.feature.append(-1)
        tree.threshold.append(0.0)
        tree.left.append(-1)
        tree.right.append(-1)
        tree.counts.append([zeros, ones])
        tree.label.append(1 if ones > zeros else 0)
        return tree.n_nodes - 1

    root = np.arange(X.shape[0])
    stack = [(new_node(root), root, 0)]
    while stack:
        node, idx, depth = stack.pop()
        zeros, ones = tree.counts[node]
        if zeros == 0 or ones == 0:
            continue
        if max_depth is not None and depth >= max_depth:
            continue
        if idx.size < min_samples_split:
            continue
        if max_features is not None and max_features < n_features:
            cand = np.sort(rng.choice(n_features, size=max_features, replace=False))
        else:
            cand = np.arange(n_features)
        if subset_log is not None:
            subset_log.append([int(c) for c in cand])
        Xn, yn = X[idx], y[idx]
        split = best_split(Xn, yn, cand) or best_split(Xn, yn, cand, require_decrease=False)
        if split is None:
            continue
        go_left = Xn[:, split.feature] <= split.threshold
        tree.feature[node] = split.feature
        tree.threshold[node] = split.threshold
        left_idx, right_idx = idx[go_left], idx[~go_left]
        tree.left[node] = new_node(left_idx)
        tree.right[node] = new_node(right_idx)
        # left popped first: depth-first, left subtree expanded before right
        stack.append((tree.right[node], right_idx, depth + 1))
        stack.append((tree.left[node], left_idx, depth + 1))
    return tree


class DecisionTree(ClassifierMixin, BaseEstimator):
    """Binary CART classifier.

    Goes left when ``x[feature] <= threshold``. Leaf labels are the
    majority class with ties resolved to 0.
    """

    family = "tree"

    def __init__(self, max_depth=None, min_samples_split=2, max_features=None, random_state=0):
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.max_features = max_features
        self.random_state = random_state

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        if self.max_depth is not None and self.max_depth < 0:
            raise DataValidationError("max_depth must be non-negative")
        rng = np.random.default_rng(check_seed(self.random_state))
        self.tree_ = grow_tree(X, y, self.max_depth, self.min_samples_split, self.max_features, rng)
        self.n_features_in_ = X.shape[1]
        self.classes_ = np.array([0, 1])
        return self

    def apply(self, X):
        check_is_fitted(self, "tree_")
        X = check_array(X)
        check_n_features(self, X)
        return self.tree_.apply(X)

    def predict(self, X):
        leaves = self.apply(X)
        return np.asarray(self.tree_.label, dtype=np.int64)[leaves]

    def get_depth(self):
        check_is_fitted(self, "tree_")
        return self.tree_.depth()

    def to_dict(self):
        check_is_fitted(self, "tree_")
        return {
            "family": self.family,
            "params": self.get_params(),
            "n_features": self.n_features_in_,
            "tree": self.tree_.to_dict(),
        }

    @classmethod
    def from_dict(cls, data):
        model = cls(**data["params"])
        model.tree_ = TreeStructure.from_dict(data["tree"])
        model.n_features_in_ = int(data["n_features"])
        model.classes_ = np.array([0, 1])
        return model
