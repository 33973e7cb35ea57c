"""Labeled corpora, CSV/JSONL ingestion and stratified fold planning.

Label 1 marks an obfuscated text, label 0 a plain one.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._validation import check_seed
from .exceptions import DataValidationError

FORMATS = ("csv", "jsonl")


@dataclass(frozen=True)
class Document:
    id: int
    text: str
    label: int

    def __post_init__(self):
        if self.label not in (0, 1) or isinstance(self.label, bool):
            raise DataValidationError(f"document {self.id}: label must be 0 or 1, got {self.label!r}")
        if not isinstance(self.text, str) or not self.text.strip():
            raise DataValidationError(f"document {self.id}: text is empty")


@dataclass(frozen=True)
class LabeledCorpus:
    documents: tuple[Document, ...]

    def __post_init__(self):
        for position, doc in enumerate(self.documents):
            if doc.id != position:
                raise DataValidationError(
                    f"document ids must be consecutive from 0, found {doc.id} at position {position}"
                )

    @classmethod
    def from_records(cls, texts, labels):
        texts, labels = list(texts), list(labels)
        if len(texts) != len(labels):
            raise DataValidationError(f"{len(texts)} texts but {len(labels)} labels")
        return cls(tuple(Document(i, t, int(lab)) for i, (t, lab) in enumerate(zip(texts, labels))))

    def __len__(self):
        return len(self.documents)

    @property
    def texts(self):
        return [d.text for d in self.documents]

    @property
    def labels(self):
        return np.array([d.label for d in self.documents], dtype=np.int64)

    @property
    def class_counts(self):
        counts = Counter(d.label for d in self.documents)
        return {label: counts[label] for label in sorted(counts)}

    def subset(self, ids):
        """New corpus with the given documents, renumbered from 0."""
        return LabeledCorpus.from_records(
            [self.documents[i].text for i in ids], [self.documents[i].label for i in ids]
        )

    def fingerprint(self):
        """SHA-256 over the ordered (text, label) pairs."""
        payload = json.dumps(
            [[d.text, d.label] for d in self.documents], ensure_ascii=False, separators=(",", ":")
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _fail(path, line, message):
    raise DataValidationError(f"{path}:{line}: {message}")


def _parse_label(raw, path, line):
    if isinstance(raw, bool):
        _fail(path, line, f"label must be 0 or 1, got {raw!r}")
    if isinstance(raw, int):
        label = raw
    elif isinstance(raw, str) and raw.strip().lstrip("+-").isdigit():
        label = int(raw.strip())
    else:
        _fail(path, line, f"label is not an integer: {raw!r}")
    if label not in (0, 1):
        _fail(path, line, f"label must be 0 or 1, got {label}")
    return label


def _check_text(text, path, line):
    if not isinstance(text, str):
        _fail(path, line, f"text field must be a string, got {type(text).__name__}")
    if not text.strip():
        _fail(path, line, "empty text field")
    return text


def _read_csv(path, handle):
    reader = csv.reader(handle)
    header = next(reader, None)
    if header is None:
        raise DataValidationError(f"{path}: zero records")
    if [h.strip() for h in header] != ["text", "label"]:
        _fail(path, 1, f"header must be 'text,label', got {','.join(header)!r}")
    records = []
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != 2:
            _fail(path, line, f"expected 2 fields, got {len(row)}")
        records.append((_check_text(row[0], path, line), _parse_label(row[1], path, line)))
    return records


def _read_jsonl(path, handle):
    records = []
    for line, raw in enumerate(handle, start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            _fail(path, line, f"invalid JSON ({exc.msg})")
        if not isinstance(obj, dict) or "text" not in obj or "label" not in obj:
            _fail(path, line, "record must be an object with 'text' and 'label'")
        if isinstance(obj["label"], str):
            _fail(path, line, f"label must be an integer, got {obj['label']!r}")
        records.append((_check_text(obj["text"], path, line), _parse_label(obj["label"], path, line)))
    return records


def load_corpus(path, format=None):
    """Read a CSV (``text,label`` header) or JSONL corpus.

    ``format`` defaults to the file suffix. Raises ``FileNotFoundError``
    for a missing file and ``DataValidationError`` (with line number) for
    bad content.
    """
    path = Path(path)
    format = format or path.suffix.lstrip(".").lower()
    if format not in FORMATS:
        raise DataValidationError(f"unknown corpus format {format!r}; expected one of {FORMATS}")
    with open(path, encoding="utf-8", newline="") as handle:
        records = _read_csv(path, handle) if format == "csv" else _read_jsonl(path, handle)
    if not records:
        raise DataValidationError(f"{path}: zero records")
    return LabeledCorpus.from_records([t for t, _ in records], [lab for _, lab in records])


def dumps_corpus(corpus, format="csv"):
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["text", "label"])
        for doc in corpus.documents:
            writer.writerow([doc.text, doc.label])
        return buf.getvalue()
    if format == "jsonl":
        return "".join(
            json.dumps({"text": d.text, "label": d.label}, ensure_ascii=False) + "\n"
            for d in corpus.documents
        )
    raise DataValidationError(f"unknown corpus format {format!r}; expected one of {FORMATS}")


def save_corpus(corpus, path, format=None):
    path = Path(path)
    format = format or path.suffix.lstrip(".").lower()
    text = dumps_corpus(corpus, format)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    return path


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: tuple[int, ...]

    def test_ids(self, fold):
        return [i for i, f in enumerate(self.assignments) if f == fold]

    def train_ids(self, fold):
        return [i for i, f in enumerate(self.assignments) if f != fold]

    def fold_sizes(self):
        counts = Counter(self.assignments)
        return [counts[f] for f in range(self.k)]


def stratified_fold_assignments(labels, k, seed):
    """Per-class seeded shuffle, then one round-robin pass over the folds.

    The fold pointer carries over from one class to the next, which keeps
    total fold sizes within 1 of each other as well as per-class counts.
    """
    labels = np.asarray(labels)
    n = labels.shape[0]
    if k < 2:
        raise DataValidationError("k must be at least 2")
    if k > n:
        raise DataValidationError(f"k={k} exceeds the number of documents ({n})")
    rng = np.random.default_rng(check_seed(seed))
    assignments = np.empty(n, dtype=np.int64)
    pointer = 0
    for label in np.unique(labels):
        members = np.flatnonzero(labels == label)
        members = members[rng.permutation(members.size)]
        assignments[members] = (pointer + np.arange(members.size)) % k
        pointer = (pointer + members.size) % k
    return FoldPlan(k=int(k), assignments=tuple(int(a) for a in assignments))


def stratified_k_fold(corpus, k=5, seed=0):
    return stratified_fold_assignments(corpus.labels, k, seed)
