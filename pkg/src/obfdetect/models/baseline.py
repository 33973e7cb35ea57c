"""Constant majority-class baseline, used as a sanity floor in experiments."""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .._validation import check_array, check_is_fitted, check_n_features, check_X_y


class MajorityClassifier(ClassifierMixin, BaseEstimator):
    family = "majority"

    def __init__(self, random_state=0):
        self.random_state = random_state

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        ones = int(y.sum())
        self.label_ = 1 if ones > y.size - ones else 0
        self.n_features_in_ = X.shape[1]
        self.classes_ = np.array([0, 1])
        return self

    def predict(self, X):
        check_is_fitted(self, "label_")
        X = check_array(X)
        check_n_features(self, X)
        return np.full(X.shape[0], self.label_, dtype=np.int64)

    def to_dict(self):
        check_is_fitted(self, "label_")
        return {"family": self.family, "params": self.get_params(),
                "n_features": self.n_features_in_, "label": self.label_}

    @classmethod
    def from_dict(cls, data):
        model = cls(**data["params"])
        model.label_ = int(data["label"])
        model.n_features_in_ = int(data["n_features"])
        model.classes_ = np.array([0, 1])
        return model
