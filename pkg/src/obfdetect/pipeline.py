"""Vectorizer, optional SMOTE and classifier composed into one trainable unit.

SMOTE runs in TF-IDF space on the training rows only; synthetic rows
never leave ``fit_pipeline``.
"""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from . import __version__
from ._validation import check_seed
from .corpus import LabeledCorpus
from .exceptions import DataValidationError, SerializationError, TrainingError
from .metrics import score
from .models import FAMILIES, LINEAR_FAMILIES, make_model, model_from_dict
from .resample import SmoteConfig, smote_balance
from .textprep import IDF_MODES, TfIdfModel, fit_tfidf, tokenize, transform_matrix

FILE_FORMAT = "obfdetect.pipeline"
FORMAT_VERSION = 1

_CONFIG_KEYS = {"name", "model", "params", "smote", "idf_mode", "lowercase", "seed"}
_SMOTE_KEYS = {"k_neighbors", "target_ratio", "seed"}


@dataclass(frozen=True)
class PipelineConfig:
    model: str
    params: dict = field(default_factory=dict)
    smote: SmoteConfig | None = None
    idf_mode: str = "raw"
    lowercase: bool = True
    seed: int = 0
    name: str | None = None

    def __post_init__(self):
        if self.idf_mode not in IDF_MODES:
            raise DataValidationError(f"idf_mode must be one of {IDF_MODES}, got {self.idf_mode!r}")
        check_seed(self.seed)
        make_model(self.model, self.params, self.seed)  # validates family and hyperparameter names

    @property
    def label(self):
        return self.name or self.model

    def derive(self, offset):
        """Copy with every seed shifted by ``offset`` (per-fold seeding)."""
        smote = None if self.smote is None else replace(self.smote, seed=self.smote.seed + offset)
        return replace(self, seed=self.seed + offset, smote=smote)

    def to_dict(self):
        return {
            "name": self.name,
            "model": self.model,
            "params": dict(self.params),
            "smote": None if self.smote is None else {
                "k_neighbors": self.smote.k_neighbors,
                "target_ratio": self.smote.target_ratio,
                "seed": self.smote.seed,
            },
            "idf_mode": self.idf_mode,
            "lowercase": self.lowercase,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data, default_seed=None):
        """Build from a parsed config document.

        A missing ``seed`` falls back to ``default_seed``; a missing SMOTE
        seed falls back to the pipeline seed.
        """
        if not isinstance(data, dict):
            raise DataValidationError("pipeline config must be an object")
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise DataValidationError(f"unknown pipeline config keys: {sorted(unknown)}")
        if "model" not in data:
            raise DataValidationError("pipeline config needs a 'model' field")
        seed = data.get("seed", default_seed)
        if seed is None:
            raise DataValidationError("pipeline config needs a seed (in the file or via --seed)")
        smote = data.get("smote")
        if smote is not None:
            if not isinstance(smote, dict) or set(smote) - _SMOTE_KEYS:
                raise DataValidationError(f"smote must be an object with keys from {sorted(_SMOTE_KEYS)}")
            smote = SmoteConfig(
                k_neighbors=smote.get("k_neighbors", 5),
                target_ratio=smote.get("target_ratio", 1.0),
                seed=smote.get("seed", seed),
            )
        return cls(
            model=data["model"],
            params=dict(data.get("params") or {}),
            smote=smote,
            idf_mode=data.get("idf_mode", "raw"),
            lowercase=data.get("lowercase", True),
            seed=seed,
            name=data.get("name"),
        )


def default_configs(seed=0):
    """The four families at their default hyperparameters, SMOTE on."""
    smote = SmoteConfig(k_neighbors=5, target_ratio=1.0, seed=seed)
    return [
        PipelineConfig("logistic", {"learning_rate": 0.1, "epochs": 500, "l2": 1e-4}, smote, seed=seed,
                       name="Logistic Regression"),
        PipelineConfig("tree", {"max_depth": None}, smote, seed=seed, name="Decision Tree"),
        PipelineConfig("forest", {"n_trees": 100, "bootstrap": True, "max_features": "sqrt"}, smote, seed=seed,
                       name="Random Forest"),
        PipelineConfig("svm", {"reg_lambda": 1e-3, "epochs": 500}, smote, seed=seed, name="SVM"),
    ]


@dataclass(frozen=True)
class Prediction:
    label: int
    score: float | None


@dataclass(frozen=True)
class TrainedPipeline:
    config: PipelineConfig
    tfidf: TfIdfModel
    classifier: object
    provenance: dict
    training: dict

    def __post_init__(self):
        if self.classifier.n_features_in_ != self.tfidf.dimension:
            raise TrainingError("classifier dimension does not match vocabulary size")

    def features(self, texts):
        return transform_matrix(self.tfidf, [tokenize(t, self.config.lowercase) for t in texts]).toarray()

    def predict(self, texts):
        return self.classifier.predict(self.features(texts))

    def decision_scores(self, texts):
        if not isinstance(self.classifier, LINEAR_FAMILIES):
            return None
        return self.classifier.decision_function(self.features(texts))

    def predict_one(self, text):
        X = self.features([text])
        label = int(self.classifier.predict(X)[0])
        s = float(self.classifier.decision_function(X)[0]) if isinstance(self.classifier, LINEAR_FAMILIES) else None
        return Prediction(label, s)

    def to_payload(self):
        return {
            "config": self.config.to_dict(),
            "tfidf": self.tfidf.to_dict(),
            "classifier": self.classifier.to_dict(),
            "provenance": dict(self.provenance),
            "training": dict(self.training),
        }

    @classmethod
    def from_payload(cls, payload):
        return cls(
            config=PipelineConfig.from_dict(payload["config"]),
            tfidf=TfIdfModel.from_dict(payload["tfidf"]),
            classifier=model_from_dict(payload["classifier"]),
            provenance=payload["provenance"],
            training=payload["training"],
        )


def vectorize(config, texts):
    tokens = [tokenize(t, config.lowercase) for t in texts]
    model = fit_tfidf(tokens, mode=config.idf_mode)
    return model, transform_matrix(model, tokens).toarray()


def train_classifier(config, X, y):
    """Optional SMOTE, then the classifier. Returns ``(model, X_fit, y_fit, info)``."""
    info = {"n_synthetic": 0, "duplicated_singleton": False}
    if config.smote is not None:
        resampled = smote_balance(X, y, config.smote)
        X, y = resampled.features, resampled.labels
        info = {"n_synthetic": resampled.n_synthetic, "duplicated_singleton": resampled.duplicated_singleton}
    model = make_model(config.model, config.params, config.seed)
    try:
        model.fit(X, y)
    except FloatingPointError as exc:
        raise TrainingError(f"{config.label}: numerical failure during training: {exc}") from exc
    return model, X, y, info


def fit_pipeline(config, corpus, timestamp=None):
    """tokenize -> TF-IDF -> (SMOTE) -> classifier, deterministic per seed.

    ``timestamp`` (ISO-8601) is only provenance; it defaults to the
    current UTC time and has no effect on the fitted weights.
    """
    if not isinstance(corpus, LabeledCorpus):
        raise DataValidationError("fit_pipeline expects a LabeledCorpus")
    y = corpus.labels
    if np.unique(y).size < 2:
        raise DataValidationError(f"training corpus has a single class (label {int(y[0])})")
    tfidf, X = vectorize(config, corpus.texts)
    model, X_fit, y_fit, info = train_classifier(config, X, y)
    train_report = score(model.predict(X_fit), y_fit)
    if timestamp is None:
        timestamp = _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat()
    provenance = {
        "corpus_fingerprint": corpus.fingerprint(),
        "n_documents": len(corpus),
        "timestamp": timestamp,
        "toolkit_version": __version__,
    }
    training = {**info, "n_rows": int(y_fit.size), "metrics": train_report.to_dict()}
    return TrainedPipeline(config, tfidf, model, provenance, training)


def predict_pipeline(pipeline, text):
    return pipeline.predict_one(text)


def _canonical(payload):
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def save_pipeline(pipeline, path):
    payload = pipeline.to_payload()
    doc = {
        "format": FILE_FORMAT,
        "format_version": FORMAT_VERSION,
        "checksum": hashlib.sha256(_canonical(payload).encode("utf-8")).hexdigest(),
        "payload": payload,
    }
    path = Path(path)
    path.write_text(json.dumps(doc, ensure_ascii=False, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    return path


def load_pipeline(path):
    raw = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SerializationError(f"{path}: truncated or corrupt pipeline file ({exc.msg})") from exc
    if not isinstance(doc, dict) or doc.get("format") != FILE_FORMAT:
        raise SerializationError(f"{path}: not a pipeline file")
    if doc.get("format_version") != FORMAT_VERSION:
        raise SerializationError(f"{path}: unsupported version {doc.get('format_version')!r}")
    payload = doc.get("payload")
    digest = hashlib.sha256(_canonical(payload).encode("utf-8")).hexdigest()
    if digest != doc.get("checksum"):
        raise SerializationError(f"{path}: checksum mismatch, file is corrupt")
    try:
        return TrainedPipeline.from_payload(payload)
    except (KeyError, TypeError, ValueError) as exc:
        raise SerializationError(f"{path}: malformed pipeline payload: {exc}") from exc


class ObfuscationClassifier(ClassifierMixin, BaseEstimator):
    """Raw-text classifier wrapping ``fit_pipeline`` for scikit-learn tooling.

    >>> clf = ObfuscationClassifier(model="tree").fit(texts, labels)  # doctest: +SKIP
    >>> clf.predict(["h@bari yako"])  # doctest: +SKIP
    """

    def __init__(self, model="logistic", params=None, smote=True, k_neighbors=5, target_ratio=1.0,
                 idf_mode="raw", lowercase=True, random_state=0):
        self.model = model
        self.params = params
        self.smote = smote
        self.k_neighbors = k_neighbors
        self.target_ratio = target_ratio
        self.idf_mode = idf_mode
        self.lowercase = lowercase
        self.random_state = random_state

    def _config(self):
        smote = SmoteConfig(self.k_neighbors, self.target_ratio, self.random_state) if self.smote else None
        return PipelineConfig(self.model, dict(self.params or {}), smote, self.idf_mode, self.lowercase,
                              self.random_state)

    def fit(self, X, y):
        corpus = LabeledCorpus.from_records(list(X), [int(v) for v in y])
        self.pipeline_ = fit_pipeline(self._config(), corpus, timestamp="")
        self.classes_ = np.array([0, 1])
        return self

    def predict(self, X):
        return self.pipeline_.predict(list(X))


__all__ = [
    "FAMILIES",
    "ObfuscationClassifier",
    "PipelineConfig",
    "Prediction",
    "TrainedPipeline",
    "default_configs",
    "fit_pipeline",
    "load_pipeline",
    "predict_pipeline",
    "save_pipeline",
]
