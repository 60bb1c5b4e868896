import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

from finsent.evaluate import Corpus
from finsent.lexicon import load_default_lexicon


@pytest.fixture(scope="session")
def lexicon():
    return load_default_lexicon()


@pytest.fixture(scope="session")
def benchmark_corpus():
    from synth_corpus import synthetic_benchmark

    texts, labels = synthetic_benchmark()
    return Corpus(texts, labels, name="synth-benchmark")
