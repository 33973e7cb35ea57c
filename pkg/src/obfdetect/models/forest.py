"""Random forest of CART trees with bootstrap rows and per-split feature subsets."""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .._validation import check_array, check_is_fitted, check_n_features, check_seed, check_X_y
from ..exceptions import DataValidationError
from .tree import DecisionTree, TreeStructure, grow_tree


def resolve_max_features(max_features, n_features):
    if max_features is None:
        return n_features
    if max_features == "sqrt":
        return max(1, math.ceil(math.sqrt(n_features)))
    if isinstance(max_features, int) and max_features >= 1:
        return min(max_features, n_features)
    raise DataValidationError(f"max_features must be None, 'sqrt' or a positive int, got {max_features!r}")


class RandomForest(ClassifierMixin, BaseEstimator):
    """Majority vote over ``n_trees`` trees; a tied vote predicts 0.

    Tree ``t`` draws everything (bootstrap rows, then feature subsets)
    from a generator seeded with ``random_state + t``, so any tree can be
    rebuilt on its own and the result does not depend on build order.
    ``bootstrap_indices_`` and ``feature_subsets_`` record the draws.
    """

    family = "forest"

    def __init__(self, n_trees=100, bootstrap=True, max_features="sqrt", max_depth=None,
                 min_samples_split=2, random_state=0):
        self.n_trees = n_trees
        self.bootstrap = bootstrap
        self.max_features = max_features
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.random_state = random_state

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        if not isinstance(self.n_trees, int) or self.n_trees < 1:
            raise DataValidationError(f"n_trees must be at least 1, got {self.n_trees!r}")
        seed = check_seed(self.random_state)
        n, d = X.shape
        m = resolve_max_features(self.max_features, d)
        self.trees_, self.bootstrap_indices_, self.feature_subsets_ = [], [], []
        for t in range(self.n_trees):
            rng = np.random.default_rng(seed + t)
            rows = rng.integers(0, n, size=n) if self.bootstrap else np.arange(n)
            subsets = []
            structure = grow_tree(X[rows], y[rows], self.max_depth, self.min_samples_split, m, rng, subsets)
            self.trees_.append(_wrap(structure, d, self.max_depth, self.min_samples_split, m, seed + t))
            self.bootstrap_indices_.append(rows.tolist())
            self.feature_subsets_.append(subsets)
        self.n_features_in_ = d
        self.max_features_ = m
        self.classes_ = np.array([0, 1])
        return self

    def votes(self, X):
        """Number of trees voting label 1, per row."""
        check_is_fitted(self, "trees_")
        X = check_array(X)
        check_n_features(self, X)
        return np.sum([tree.predict(X) for tree in self.trees_], axis=0)

    def predict(self, X):
        return (2 * self.votes(X) > len(self.trees_)).astype(np.int64)

    def to_dict(self):
        check_is_fitted(self, "trees_")
        return {
            "family": self.family,
            "params": self.get_params(),
            "n_features": self.n_features_in_,
            "max_features_resolved": self.max_features_,
            "trees": [t.tree_.to_dict() for t in self.trees_],
            "bootstrap_indices": self.bootstrap_indices_,
            "feature_subsets": self.feature_subsets_,
        }

    @classmethod
    def from_dict(cls, data):
        model = cls(**data["params"])
        d = int(data["n_features"])
        m = int(data["max_features_resolved"])
        seed = model.random_state
        model.trees_ = [
            _wrap(TreeStructure.from_dict(td), d, model.max_depth, model.min_samples_split, m, seed + t)
            for t, td in enumerate(data["trees"])
        ]
        model.bootstrap_indices_ = data["bootstrap_indices"]
        model.feature_subsets_ = data["feature_subsets"]
        model.n_features_in_ = d
        model.max_features_ = m
        model.classes_ = np.array([0, 1])
        return model


def _wrap(structure, n_features, max_depth, min_samples_split, max_features, seed):
    tree = DecisionTree(max_depth=max_depth, min_samples_split=min_samples_split,
                        max_features=max_features, random_state=seed)
    tree.tree_ = structure
    tree.n_features_in_ = n_features
    tree.classes_ = np.array([0, 1])
    return tree
