"""Linear classifiers: logistic regression (batch gradient descent) and a
Pegasos-style linear SVM.

Both predict label 1 only when ``w.x + b > 0``; a score of exactly zero
maps to label 0.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit
from sklearn.base import BaseEstimator, ClassifierMixin

from .._validation import check_array, check_is_fitted, check_n_features, check_seed, check_X_y


class _LinearClassifier(ClassifierMixin, BaseEstimator):
    family = None

    def decision_function(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X)
        check_n_features(self, X)
        return X @ self.coef_ + self.intercept_

    def predict(self, X):
        return (self.decision_function(X) > 0.0).astype(np.int64)

    def _set_fitted(self, coef, intercept, n_features):
        self.coef_ = np.asarray(coef, dtype=np.float64)
        self.intercept_ = float(intercept)
        self.n_features_in_ = n_features
        self.classes_ = np.array([0, 1])

    def to_dict(self):
        check_is_fitted(self, "coef_")
        return {
            "family": self.family,
            "params": self.get_params(),
            "coef": self.coef_.tolist(),
            "intercept": self.intercept_,
        }

    @classmethod
    def from_dict(cls, data):
        model = cls(**data["params"])
        coef = np.array(data["coef"], dtype=np.float64)
        model._set_fitted(coef, data["intercept"], coef.size)
        return model


def logistic_loss_and_grad(coef, intercept, X, y, l2=0.0):
    """Mean negative log-likelihood plus ``l2/2 * ||coef||^2``; bias unpenalized.

    Returns ``(loss, grad_coef, grad_intercept)``.
    """
    z = X @ coef + intercept
    loss = np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * l2 * coef @ coef
    resid = expit(z) - y
    grad_coef = X.T @ resid / X.shape[0] + l2 * coef
    grad_intercept = resid.mean()
    return float(loss), grad_coef, float(grad_intercept)


class LogisticRegressionGD(_LinearClassifier):
    """L2-regularized logistic regression trained by full-batch gradient descent.

    Weights start at zero and the epoch count is fixed, so training is a
    deterministic function of the data. ``random_state`` is accepted for a
    uniform estimator signature and recorded, but no randomness is drawn.
    """

    family = "logistic"

    def __init__(self, learning_rate=0.1, epochs=500, l2=1e-4, random_state=0):
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.l2 = l2
        self.random_state = random_state

    def fit(self, X, y):
        X, y = check_X_y(X, y, require_both_classes=True)
        check_seed(self.random_state)
        coef = np.zeros(X.shape[1])
        intercept = 0.0
        yf = y.astype(np.float64)
        for _ in range(int(self.epochs)):
            _, g_w, g_b = logistic_loss_and_grad(coef, intercept, X, yf, self.l2)
            coef -= self.learning_rate * g_w
            intercept -= self.learning_rate * g_b
        self._set_fitted(coef, intercept, X.shape[1])
        return self

    def predict_proba(self, X):
        p = expit(self.decision_function(X))
        return np.column_stack([1.0 - p, p])


def hinge_subgradient(w, Xa, ys, reg_lambda):
    """Subgradient of ``reg_lambda/2 ||w||^2 + mean hinge`` on augmented rows.

    ``Xa`` carries a trailing column of ones for the bias; ``ys`` is in
    {-1, +1}. Rows with margin >= 1 contribute nothing.
    """
    margins = ys * (Xa @ w)
    active = margins < 1.0
    return reg_lambda * w - (ys[active] @ Xa[active]) / Xa.shape[0]


class PegasosSVM(_LinearClassifier):
    """Linear SVM fitted with the Pegasos step size ``1 / (lambda * t)``.

    The bias is learned as a weight on a constant feature. With
    ``batch_size=None`` each step uses the whole training set; otherwise a
    seeded minibatch of that size is drawn per step. Iterates are
    projected onto the ball of radius ``1/sqrt(lambda)``.
    """

    family = "svm"

    def __init__(self, reg_lambda=1e-3, epochs=500, batch_size=None, random_state=0):
        self.reg_lambda = reg_lambda
        self.epochs = epochs
        self.batch_size = batch_size
        self.random_state = random_state

    def fit(self, X, y):
        X, y = check_X_y(X, y, require_both_classes=True)
        rng = np.random.default_rng(check_seed(self.random_state))
        n, d = X.shape
        Xa = np.hstack([X, np.ones((n, 1))])
        ys = np.where(y == 1, 1.0, -1.0)
        lam = float(self.reg_lambda)
        radius = 1.0 / np.sqrt(lam)
        w = np.zeros(d + 1)
        for t in range(1, int(self.epochs) + 1):
            if self.batch_size is None or self.batch_size >= n:
                grad = hinge_subgradient(w, Xa, ys, lam)
            else:
                batch = rng.choice(n, size=self.batch_size, replace=False)
                grad = hinge_subgradient(w, Xa[batch], ys[batch], lam)
            w = w - grad / (lam * t)
            norm = np.linalg.norm(w)
            if norm > radius:
                w *= radius / norm
        self._set_fitted(w[:d], w[d], d)
        return self
