import pytest

from natlog.lexicon import load_kb
from natlog.prover import NLIProblem, classify
from natlog.serialize import load_corpus, packaged_data_path


@pytest.fixture(scope="session")
def default_kb():
    return load_kb(packaged_data_path("default.tsv"))


@pytest.fixture(scope="session")
def regression_kb():
    return load_kb(packaged_data_path("regression.tsv"))


@pytest.fixture(scope="session")
def regression_kb_path():
    return packaged_data_path("regression.tsv")


@pytest.fixture(scope="session")
def regression_corpus_path():
    return packaged_data_path("regression.jsonl")


@pytest.fixture(scope="session")
def regression_corpus(regression_corpus_path):
    return load_corpus(regression_corpus_path)


@pytest.fixture(scope="session")
def prove():
    def run(premises, hypothesis, kb, **kwargs):
        if isinstance(premises, str):
            premises = (premises,)
        return classify(NLIProblem("test", tuple(premises), hypothesis), kb, **kwargs)

    return run
