"""Seeded synthetic corpora with character-level obfuscation.

Label-1 documents are lexicon phrases passed through obfuscation rules;
label-0 documents are lexicon phrases with, at most, their word order
shuffled. The bundled lexicon is a neutral placeholder.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from ._validation import check_seed
from .corpus import LabeledCorpus
from .exceptions import DataValidationError
from .textprep import tokenize

RULE_KINDS = ("substitute", "insert_separator", "repeat_char", "space_split")
REPEAT_POSITIONS = ("first", "last", "random")
_MAX_REDRAWS = 64
SYNTHETIC_NOTE = (
    "synthetic corpus; its obfuscation rules are an explicit stand-in, not a model of any real dataset"
)


@dataclass(frozen=True)
class ObfuscationRule:
    kind: str
    probability: float = 1.0
    source: str | None = None
    target: str | None = None
    char: str | None = None
    every: int = 1
    position: str = "random"

    def __post_init__(self):
        if self.kind not in RULE_KINDS:
            raise DataValidationError(f"unknown rule kind {self.kind!r}; expected one of {RULE_KINDS}")
        if not 0.0 <= self.probability <= 1.0:
            raise DataValidationError(f"rule probability must be in [0, 1], got {self.probability}")
        if self.kind == "substitute":
            if not self.source or self.target is None:
                raise DataValidationError("substitute rule needs 'source' and 'target'")
            if self.source == self.target:
                raise DataValidationError(f"substitute rule maps {self.source!r} to itself")
        if self.kind == "insert_separator":
            if not self.char or self.char.isspace():
                raise DataValidationError("insert_separator needs a non-whitespace 'char'")
            if self.every < 1:
                raise DataValidationError("insert_separator 'every' must be >= 1")
        if self.kind == "repeat_char" and self.position not in REPEAT_POSITIONS:
            raise DataValidationError(f"repeat_char position must be one of {REPEAT_POSITIONS}")

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(**data)
        except TypeError as exc:
            raise DataValidationError(f"invalid rule {data!r}: {exc}") from exc

    def to_dict(self):
        out = {"kind": self.kind, "probability": self.probability}
        if self.kind == "substitute":
            out.update(source=self.source, target=self.target)
        elif self.kind == "insert_separator":
            out.update(char=self.char, every=self.every)
        elif self.kind == "repeat_char":
            out.update(position=self.position)
        return out

    def apply(self, text, rng):
        """Apply unconditionally; ``rng`` picks the word/position where needed."""
        if self.kind == "substitute":
            return text.replace(self.source, self.target)
        words = text.split(" ")
        min_len = {"insert_separator": self.every + 1, "repeat_char": 1, "space_split": 2}[self.kind]
        eligible = [i for i, w in enumerate(words) if len(w) >= min_len]
        if not eligible:
            return text
        w = eligible[int(rng.integers(len(eligible)))]
        word = words[w]
        if self.kind == "insert_separator":
            chunks = [word[i:i + self.every] for i in range(0, len(word), self.every)]
            words[w] = self.char.join(chunks)
        elif self.kind == "repeat_char":
            pos = {"first": 0, "last": len(word) - 1}.get(self.position)
            if pos is None:
                pos = int(rng.integers(len(word)))
            words[w] = word[:pos + 1] + word[pos:]
        else:
            cut = int(rng.integers(1, len(word)))
            words[w] = word[:cut] + " " + word[cut:]
        return " ".join(words)


def _changed(original, candidate):
    return candidate != original and tokenize(candidate) != tokenize(original)


def _obfuscate(text, rules, rng):
    for _ in range(_MAX_REDRAWS):
        out = text
        for rule in rules:
            if rng.random() < rule.probability:
                out = rule.apply(out, rng)
        if _changed(text, out):
            return out
    for rule in rules:
        out = rule.apply(text, rng)
        if _changed(text, out):
            return out
    raise DataValidationError(f"no rule can obfuscate {text!r}")


def obfuscate_text(text, rules, seed):
    """Apply each rule with its probability, redrawing until the text changes.

    The change must survive tokenization, so a separator that only lands
    on a token edge does not count.
    """
    if not text or not text.strip():
        raise DataValidationError("cannot obfuscate empty text")
    rules = list(rules)
    if not rules:
        raise DataValidationError("need at least one obfuscation rule")
    return _obfuscate(text, rules, np.random.default_rng(check_seed(seed)))


def _load_packaged(name):
    return json.loads(resources.files("obfdetect").joinpath("data", name).read_text(encoding="utf-8"))


def default_lexicon():
    return list(_load_packaged("lexicon.json")["phrases"])


def default_rules():
    return [ObfuscationRule.from_dict(r) for r in _load_packaged("rules.json")["rules"]]


def load_lexicon(path):
    """A JSON list of phrases, a JSON object with ``phrases``, or plain text (one per line)."""
    raw = Path(path).read_text(encoding="utf-8")
    if Path(path).suffix.lower() == ".json":
        data = json.loads(raw)
        phrases = data["phrases"] if isinstance(data, dict) else data
    else:
        phrases = [line.strip() for line in raw.splitlines() if line.strip()]
    return [str(p) for p in phrases]


def load_rules(path):
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return [ObfuscationRule.from_dict(r) for r in (data["rules"] if isinstance(data, dict) else data)]


@dataclass(frozen=True)
class SynthConfig:
    n_docs: int = 200
    obfuscated_fraction: float = 0.3
    seed: int = 42
    base_lexicon: list = field(default_factory=default_lexicon)
    rules: list = field(default_factory=default_rules)
    shuffle_probability: float = 0.5

    def __post_init__(self):
        if not isinstance(self.n_docs, int) or self.n_docs < 2:
            raise DataValidationError(f"n_docs must be an integer >= 2, got {self.n_docs!r}")
        if not 0.0 < self.obfuscated_fraction < 1.0:
            raise DataValidationError("obfuscated_fraction must be strictly between 0 and 1")
        if not 0.0 <= self.shuffle_probability <= 1.0:
            raise DataValidationError("shuffle_probability must be in [0, 1]")
        check_seed(self.seed)
        n_pos = self.n_obfuscated
        if not 0 < n_pos < self.n_docs:
            raise DataValidationError(
                f"n_docs={self.n_docs} with fraction {self.obfuscated_fraction} yields a single class"
            )

    @property
    def n_obfuscated(self):
        # half-up rounding; Python's round() would send 2.5 to 2
        return int(np.floor(self.n_docs * self.obfuscated_fraction + 0.5))

    def to_dict(self):
        return {
            "n_docs": self.n_docs,
            "obfuscated_fraction": self.obfuscated_fraction,
            "seed": self.seed,
            "shuffle_probability": self.shuffle_probability,
            "lexicon": list(self.base_lexicon),
            "rules": [r.to_dict() for r in self.rules],
        }

    @classmethod
    def from_dict(cls, data, base_dir=".", seed=None):
        """Parse a config document; ``*_path`` entries resolve against ``base_dir``."""
        data = dict(data)
        known = {"n_docs", "obfuscated_fraction", "seed", "shuffle_probability",
                 "lexicon", "lexicon_path", "rules", "rules_path"}
        unknown = set(data) - known
        if unknown:
            raise DataValidationError(f"unknown synth config keys: {sorted(unknown)}")
        base_dir = Path(base_dir)
        kwargs = {k: data[k] for k in ("n_docs", "obfuscated_fraction", "shuffle_probability") if k in data}
        if "lexicon_path" in data:
            kwargs["base_lexicon"] = load_lexicon(base_dir / data["lexicon_path"])
        elif "lexicon" in data:
            kwargs["base_lexicon"] = list(data["lexicon"])
        if "rules_path" in data:
            kwargs["rules"] = load_rules(base_dir / data["rules_path"])
        elif "rules" in data:
            kwargs["rules"] = [ObfuscationRule.from_dict(r) for r in data["rules"]]
        if seed is not None:
            kwargs["seed"] = seed
        elif "seed" in data:
            kwargs["seed"] = data["seed"]
        return cls(**kwargs)


def generate_with_sources(config):
    """Like ``generate_synthetic_corpus`` but also returns each document's source phrase."""
    lexicon = [p for p in config.base_lexicon if p.strip()]
    if not lexicon:
        raise DataValidationError("empty lexicon")
    if not config.rules:
        raise DataValidationError("need at least one obfuscation rule")
    rng = np.random.default_rng(config.seed)
    positive = np.zeros(config.n_docs, dtype=bool)
    positive[rng.permutation(config.n_docs)[: config.n_obfuscated]] = True
    texts, labels, sources = [], [], []
    for is_pos in positive:
        phrase = lexicon[int(rng.integers(len(lexicon)))]
        if is_pos:
            text = _obfuscate(phrase, config.rules, rng)
        elif rng.random() < config.shuffle_probability:
            words = phrase.split()
            text = " ".join(words[i] for i in rng.permutation(len(words)))
        else:
            text = phrase
        texts.append(text)
        labels.append(int(is_pos))
        sources.append(phrase)
    return LabeledCorpus.from_records(texts, labels), sources


def generate_synthetic_corpus(config=None):
    return generate_with_sources(config or SynthConfig())[0]
