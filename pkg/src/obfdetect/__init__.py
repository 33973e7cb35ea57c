"""Detect whether abusive short texts are obfuscated.

TF-IDF features, SMOTE class balancing, four classifier families and a
stratified cross-validation harness, all seeded and deterministic.
"""

__version__ = "0.1.0"

from .corpus import Document, FoldPlan, LabeledCorpus, load_corpus, save_corpus, stratified_k_fold  # noqa: E402
from .evaluation import CvResult, cross_validate, grid_search  # noqa: E402
from .metrics import ConfusionMatrix, MetricsReport, compute_metrics, confusion_matrix  # noqa: E402
from .pipeline import (  # noqa: E402
    ObfuscationClassifier,
    PipelineConfig,
    TrainedPipeline,
    default_configs,
    fit_pipeline,
    load_pipeline,
    predict_pipeline,
    save_pipeline,
)
from .resample import SMOTE, SmoteConfig, smote_balance  # noqa: E402
from .synth import ObfuscationRule, SynthConfig, generate_synthetic_corpus, obfuscate_text  # noqa: E402
from .textprep import TfidfVectorizer, fit_tfidf, tokenize, transform_tfidf  # noqa: E402

__all__ = [
    "ConfusionMatrix",
    "CvResult",
    "Document",
    "FoldPlan",
    "LabeledCorpus",
    "MetricsReport",
    "ObfuscationClassifier",
    "ObfuscationRule",
    "PipelineConfig",
    "SMOTE",
    "SmoteConfig",
    "SynthConfig",
    "TfidfVectorizer",
    "TrainedPipeline",
    "compute_metrics",
    "confusion_matrix",
    "cross_validate",
    "default_configs",
    "fit_pipeline",
    "fit_tfidf",
    "generate_synthetic_corpus",
    "grid_search",
    "load_corpus",
    "load_pipeline",
    "obfuscate_text",
    "predict_pipeline",
    "save_corpus",
    "save_pipeline",
    "smote_balance",
    "stratified_k_fold",
    "tokenize",
    "transform_tfidf",
]
