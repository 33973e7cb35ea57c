import pytest

from obfdetect.corpus import LabeledCorpus
from obfdetect.synth import SynthConfig, generate_synthetic_corpus


@pytest.fixture(scope="session")
def synth_corpus():
    """The default 200-document synthetic corpus (seed 42, 30% obfuscated)."""
    return generate_synthetic_corpus(SynthConfig(seed=42))


@pytest.fixture
def toy_corpus():
    """8 docs, 4 per class, disjoint vocabularies."""
    plain = ["habari yako", "karibu sana", "habari njema", "karibu tena"]
    obf = ["h@bari y@k0", "k@ribu s@n@", "h@bari nj3ma", "k@ribu t3na"]
    return LabeledCorpus.from_records(plain + obf, [0] * 4 + [1] * 4)
