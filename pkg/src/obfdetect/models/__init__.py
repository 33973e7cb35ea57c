"""Classifier families and a family-tagged registry for building and loading them."""

from __future__ import annotations

import numpy as np

from ..exceptions import DataValidationError, SerializationError
from .baseline import MajorityClassifier
from .forest import RandomForest
from .linear import LogisticRegressionGD, PegasosSVM, hinge_subgradient, logistic_loss_and_grad
from .tree import DecisionTree, Split, best_split, gini_impurity

FAMILIES = {
    "logistic": LogisticRegressionGD,
    "svm": PegasosSVM,
    "tree": DecisionTree,
    "forest": RandomForest,
    "majority": MajorityClassifier,
}

LINEAR_FAMILIES = (LogisticRegressionGD, PegasosSVM)


def make_model(family, params=None, seed=0):
    """Instantiate an unfitted estimator; ``seed`` fills ``random_state``."""
    try:
        cls = FAMILIES[family]
    except KeyError:
        raise DataValidationError(f"unknown model family {family!r}; expected one of {sorted(FAMILIES)}") from None
    params = dict(params or {})
    valid = set(cls().get_params())
    unknown = set(params) - valid
    if unknown:
        raise DataValidationError(f"unknown hyperparameters for {family}: {sorted(unknown)}")
    params["random_state"] = seed
    return cls(**params)


def train_logistic(X, y, **hp):
    return LogisticRegressionGD(**hp).fit(X, y)


def train_linear_svm(X, y, **hp):
    return PegasosSVM(**hp).fit(X, y)


def train_tree(X, y, **hp):
    return DecisionTree(**hp).fit(X, y)


def train_forest(X, y, **hp):
    return RandomForest(**hp).fit(X, y)


def _as_row(x):
    x = np.asarray(x.to_dense() if hasattr(x, "to_dense") else x, dtype=np.float64)
    return x.reshape(1, -1)


def predict(model, x):
    """Label for a single feature vector."""
    return int(model.predict(_as_row(x))[0])


def decision_score(model, x):
    if not isinstance(model, LINEAR_FAMILIES):
        raise DataValidationError(f"decision_score is defined for linear models only, not {type(model).__name__}")
    return float(model.decision_function(_as_row(x))[0])


def model_to_dict(model):
    return model.to_dict()


def model_from_dict(data):
    family = data.get("family")
    if family not in FAMILIES:
        raise SerializationError(f"unknown model family in saved data: {family!r}")
    return FAMILIES[family].from_dict(data)


__all__ = [
    "FAMILIES",
    "DecisionTree",
    "LogisticRegressionGD",
    "MajorityClassifier",
    "PegasosSVM",
    "RandomForest",
    "Split",
    "best_split",
    "decision_score",
    "gini_impurity",
    "hinge_subgradient",
    "logistic_loss_and_grad",
    "make_model",
    "model_from_dict",
    "model_to_dict",
    "predict",
    "train_forest",
    "train_linear_svm",
    "train_logistic",
    "train_tree",
]
