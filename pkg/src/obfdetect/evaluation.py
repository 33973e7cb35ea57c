"""Stratified k-fold cross-validation and grid search over pipeline configs."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, replace

import numpy as np

from .corpus import FoldPlan, stratified_fold_assignments, stratified_k_fold
from .exceptions import DataValidationError
from .metrics import MetricsReport, score
from .pipeline import fit_pipeline, train_classifier, vectorize
from .resample import smote_balance

METRICS = ("accuracy", "precision", "recall", "f1")


@dataclass(frozen=True)
class FoldResult:
    fold: int
    test_ids: tuple[int, ...]
    test: MetricsReport
    train: MetricsReport
    n_synthetic: int = 0
    duplicated_singleton: bool = False

    def to_dict(self):
        return {
            "fold": self.fold,
            "test_ids": list(self.test_ids),
            "test": self.test.to_dict(),
            "train": self.train.to_dict(),
            "n_synthetic": self.n_synthetic,
            "duplicated_singleton": self.duplicated_singleton,
        }


@dataclass(frozen=True)
class CvResult:
    config: object
    plan: FoldPlan
    folds: tuple[FoldResult, ...]
    seed: int
    resample_before_split: bool = False

    @property
    def k(self):
        return self.plan.k

    def values(self, metric, split="test"):
        return [getattr(getattr(f, split), metric) for f in self.folds]

    @property
    def mean(self):
        return {m: statistics.fmean(self.values(m)) for m in METRICS}

    @property
    def std(self):
        """Population standard deviation across folds."""
        return {m: statistics.pstdev(self.values(m)) for m in METRICS}

    @property
    def train_mean(self):
        return {m: statistics.fmean(self.values(m, "train")) for m in METRICS}

    def to_dict(self):
        return {
            "config": self.config.to_dict(),
            "k": self.k,
            "seed": self.seed,
            "resample_before_split": self.resample_before_split,
            "fold_assignments": list(self.plan.assignments),
            "folds": [f.to_dict() for f in self.folds],
            "mean": self.mean,
            "std": self.std,
            "train_mean": self.train_mean,
        }


def _check_training_classes(labels, fold):
    if np.unique(labels).size < 2:
        raise DataValidationError(f"fold {fold}: training split contains a single class")


def cross_validate(config, corpus, k=5, seed=0, *, fit=fit_pipeline, resample_before_split=False):
    """Evaluate ``config`` on ``corpus`` with stratified k-fold CV.

    Each fold refits the whole pipeline on its training documents only,
    with every seed shifted by the fold index. ``fit`` is the pipeline
    factory and can be swapped to instrument what each fold sees.

    ``resample_before_split=True`` reproduces the leaky protocol for
    comparison: TF-IDF and SMOTE run on the full corpus, and the resampled
    rows (synthetics included) are then split into folds.
    """
    if resample_before_split:
        return _cross_validate_leaky(config, corpus, k, seed)
    plan = stratified_k_fold(corpus, k, seed)
    texts = corpus.texts
    labels = corpus.labels
    folds = []
    for fold in range(k):
        train_ids, test_ids = plan.train_ids(fold), plan.test_ids(fold)
        _check_training_classes(labels[train_ids], fold)
        pipeline = fit(config.derive(fold), corpus.subset(train_ids))
        preds = pipeline.predict([texts[i] for i in test_ids])
        folds.append(FoldResult(
            fold=fold,
            test_ids=tuple(test_ids),
            test=score(preds, labels[test_ids]),
            train=MetricsReport.from_dict(pipeline.training["metrics"]),
            n_synthetic=pipeline.training["n_synthetic"],
            duplicated_singleton=pipeline.training["duplicated_singleton"],
        ))
    return CvResult(config, plan, tuple(folds), seed)


def _cross_validate_leaky(config, corpus, k, seed):
    _, X = vectorize(config, corpus.texts)
    y = corpus.labels
    n_synthetic = 0
    if config.smote is not None:
        resampled = smote_balance(X, y, config.smote)
        X, y, n_synthetic = resampled.features, resampled.labels, resampled.n_synthetic
    plan = stratified_fold_assignments(y, k, seed)
    no_smote = replace(config, smote=None)
    folds = []
    for fold in range(k):
        train_ids, test_ids = plan.train_ids(fold), plan.test_ids(fold)
        _check_training_classes(y[train_ids], fold)
        model, X_fit, y_fit, _ = train_classifier(no_smote.derive(fold), X[train_ids], y[train_ids])
        folds.append(FoldResult(
            fold=fold,
            test_ids=tuple(test_ids),
            test=score(model.predict(X[test_ids]), y[test_ids]),
            train=score(model.predict(X_fit), y_fit),
            n_synthetic=n_synthetic,
        ))
    return CvResult(config, plan, tuple(folds), seed, resample_before_split=True)


@dataclass(frozen=True)
class GridSearchResult:
    best_index: int
    results: tuple[CvResult, ...]

    @property
    def best_config(self):
        return self.results[self.best_index].config

    @property
    def best_result(self):
        return self.results[self.best_index]


def select_best(results):
    """Highest mean F1, then highest mean accuracy, then earliest position."""
    return min(range(len(results)), key=lambda i: (-results[i].mean["f1"], -results[i].mean["accuracy"], i))


def grid_search(grid, corpus, k=5, seed=0, **cv_kwargs):
    grid = list(grid)
    if not grid:
        raise DataValidationError("grid search needs at least one config")
    results = tuple(cross_validate(config, corpus, k, seed, **cv_kwargs) for config in grid)
    return GridSearchResult(select_best(results), results)
