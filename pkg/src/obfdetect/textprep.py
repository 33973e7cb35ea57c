"""Tokenization and TF-IDF vectorization.

Term frequency is the in-vocabulary count of a term divided by the total
in-vocabulary token count of the document. Raw IDF is ``ln(N / df)``; the
smoothed variant is ``ln((1 + N) / (1 + df)) + 1``.
"""

from __future__ import annotations

import json
import unicodedata
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import check_is_fitted
from .exceptions import DataValidationError, SerializationError

IDF_MODES = ("raw", "smoothed")
_MODEL_FORMAT = "obfdetect.tfidf"


def _is_punct(ch):
    return unicodedata.category(ch).startswith(("P", "S"))


def tokenize(text, lowercase=True):
    """Split on whitespace and strip punctuation from token edges only.

    Digits and inner punctuation survive, so ``"m*inga"`` and ``"mj1nga"``
    stay distinct tokens.
    """
    if lowercase:
        text = text.lower()
    tokens = []
    for raw in text.split():
        start, end = 0, len(raw)
        while start < end and _is_punct(raw[start]):
            start += 1
        while end > start and _is_punct(raw[end - 1]):
            end -= 1
        if start < end:
            tokens.append(raw[start:end])
    return tokens


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]

    def __post_init__(self):
        if list(self.terms) != sorted(set(self.terms)):
            raise DataValidationError("vocabulary terms must be unique and sorted")
        object.__setattr__(self, "index", {t: i for i, t in enumerate(self.terms)})

    def __len__(self):
        return len(self.terms)

    def __contains__(self, term):
        return term in self.index


@dataclass(frozen=True)
class FeatureVector:
    """Sparse non-negative weights keyed by column ordinal; zeros never stored."""

    weights: dict
    dimension: int

    def to_dense(self):
        out = np.zeros(self.dimension)
        for col, w in self.weights.items():
            out[col] = w
        return out


@dataclass(frozen=True)
class TfIdfModel:
    vocabulary: Vocabulary
    df: tuple[int, ...]
    idf: np.ndarray
    n_docs: int
    mode: str = "raw"

    @property
    def dimension(self):
        return len(self.vocabulary)

    def to_dict(self):
        return {
            "format": _MODEL_FORMAT,
            "mode": self.mode,
            "n_docs": self.n_docs,
            "terms": [
                {"term": t, "df": d, "idf": float(w)}
                for t, d, w in zip(self.vocabulary.terms, self.df, self.idf)
            ],
        }

    @classmethod
    def from_dict(cls, data):
        if data.get("format") != _MODEL_FORMAT:
            raise SerializationError(f"not a TF-IDF model document: format={data.get('format')!r}")
        try:
            rows = data["terms"]
            return cls(
                vocabulary=Vocabulary(tuple(r["term"] for r in rows)),
                df=tuple(int(r["df"]) for r in rows),
                idf=np.array([float(r["idf"]) for r in rows], dtype=np.float64),
                n_docs=int(data["n_docs"]),
                mode=data["mode"],
            )
        except (KeyError, TypeError) as exc:
            raise SerializationError(f"malformed TF-IDF model: {exc}") from exc

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), ensure_ascii=False, indent=1), encoding="utf-8")

    @classmethod
    def load(cls, path):
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def fit_tfidf(docs, mode="raw"):
    """Fit vocabulary and IDF weights on a list of token lists."""
    if mode not in IDF_MODES:
        raise DataValidationError(f"unknown idf mode {mode!r}; expected one of {IDF_MODES}")
    docs = list(docs)
    if not docs:
        raise DataValidationError("need at least one document")
    df = Counter()
    for tokens in docs:
        df.update(set(tokens))
    if not df:
        raise DataValidationError("empty vocabulary")
    terms = tuple(sorted(df))
    n = len(docs)
    counts = np.array([df[t] for t in terms], dtype=np.float64)
    if mode == "raw":
        idf = np.log(n / counts)
    else:
        idf = np.log((1.0 + n) / (1.0 + counts)) + 1.0
    return TfIdfModel(Vocabulary(terms), tuple(df[t] for t in terms), idf, n, mode)


def transform_tfidf(model, tokens):
    index = model.vocabulary.index
    counts = Counter(t for t in tokens if t in index)
    total = sum(counts.values())
    weights = {}
    for term, c in sorted(counts.items()):
        w = (c / total) * model.idf[index[term]]
        if w != 0.0:
            weights[index[term]] = float(w)
    return FeatureVector(weights, model.dimension)


def transform_matrix(model, token_lists):
    """Row-stack ``transform_tfidf`` into a CSR matrix."""
    indptr, indices, data = [0], [], []
    for tokens in token_lists:
        vec = transform_tfidf(model, tokens)
        cols = sorted(vec.weights)
        indices.extend(cols)
        data.extend(vec.weights[c] for c in cols)
        indptr.append(len(indices))
    return sp.csr_matrix(
        (np.array(data, dtype=np.float64), np.array(indices, dtype=np.int64), np.array(indptr)),
        shape=(len(indptr) - 1, model.dimension),
    )


class TfidfVectorizer(TransformerMixin, BaseEstimator):
    """Raw documents in, CSR TF-IDF matrix out.

    Parameters
    ----------
    idf_mode : {"raw", "smoothed"}
        ``"raw"`` zeroes terms present in every fitting document.
    lowercase : bool
        Case-fold before splitting.
    """

    def __init__(self, idf_mode="raw", lowercase=True):
        self.idf_mode = idf_mode
        self.lowercase = lowercase

    def _tokens(self, raw_documents):
        if isinstance(raw_documents, str):
            raise DataValidationError("expected an iterable of documents, got a single string")
        return [tokenize(doc, lowercase=self.lowercase) for doc in raw_documents]

    def fit(self, raw_documents, y=None):
        self.model_ = fit_tfidf(self._tokens(raw_documents), mode=self.idf_mode)
        return self

    def transform(self, raw_documents):
        check_is_fitted(self, "model_")
        return transform_matrix(self.model_, self._tokens(raw_documents))

    @property
    def vocabulary_(self):
        check_is_fitted(self, "model_")
        return self.model_.vocabulary.index

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "model_")
        return np.array(self.model_.vocabulary.terms, dtype=object)

