"""Confusion matrix and the accuracy/precision/recall/F1 family.

Label 1 (obfuscated) is the positive class. Any ratio with a zero
denominator is reported as 0.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import DataValidationError


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.tn, self.fp, self.fn) < 0:
            raise DataValidationError("confusion counts must be non-negative")

    @property
    def total(self):
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    precision: float
    recall: float
    f1: float
    confusion: ConfusionMatrix

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(
            accuracy=data["accuracy"],
            precision=data["precision"],
            recall=data["recall"],
            f1=data["f1"],
            confusion=ConfusionMatrix(**data["confusion"]),
        )


def confusion_matrix(predictions, truth):
    pred = np.asarray(predictions)
    true = np.asarray(truth)
    if pred.shape != true.shape:
        raise DataValidationError(f"length mismatch: {pred.size} predictions vs {true.size} labels")
    if pred.size == 0:
        raise DataValidationError("cannot score an empty prediction set")
    for name, arr in (("predictions", pred), ("truth", true)):
        if not np.all(np.isin(arr, (0, 1))):
            raise DataValidationError(f"{name} must be binary 0/1")
    return ConfusionMatrix(
        tp=int(np.sum((pred == 1) & (true == 1))),
        tn=int(np.sum((pred == 0) & (true == 0))),
        fp=int(np.sum((pred == 1) & (true == 0))),
        fn=int(np.sum((pred == 0) & (true == 1))),
    )


def _ratio(num, den):
    return num / den if den else 0.0


def compute_metrics(cm):
    if cm.total == 0:
        raise DataValidationError("confusion matrix is empty")
    precision = _ratio(cm.tp, cm.tp + cm.fp)
    recall = _ratio(cm.tp, cm.tp + cm.fn)
    return MetricsReport(
        accuracy=(cm.tp + cm.tn) / cm.total,
        precision=precision,
        recall=recall,
        f1=_ratio(2 * precision * recall, precision + recall),
        confusion=cm,
    )


def score(predictions, truth):
    return compute_metrics(confusion_matrix(predictions, truth))
