from __future__ import annotations

from pathlib import Path

import pytest

from quizwright.corpus import (
    QuestionSet,
    load_alias_table,
    load_country_lexicon,
    load_question_set,
)
from quizwright.index import Grouping, build_index

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def sample_questions() -> QuestionSet:
    return load_question_set(DATA_DIR / "sample_questions.json")


@pytest.fixture(scope="session")
def fixture_corpus() -> QuestionSet:
    return load_question_set(DATA_DIR / "fixture_corpus.json")


@pytest.fixture(scope="session")
def synthetic_only(fixture_corpus) -> QuestionSet:
    return QuestionSet(
        tuple(q for q in fixture_corpus if q.source == "synthetic")
    )


@pytest.fixture(scope="session")
def alias_table():
    return load_alias_table(DATA_DIR / "aliases.tsv")


@pytest.fixture(scope="session")
def country_lexicon():
    return load_country_lexicon(DATA_DIR / "countries.tsv")


@pytest.fixture(scope="session")
def engines():
    from quizwright.config import AppConfig
    from quizwright.engines import load_engines

    return load_engines(AppConfig(), base_dir=DATA_DIR.parent)


@pytest.fixture(scope="session")
def answer_index(fixture_corpus):
    return build_index(fixture_corpus, Grouping.BY_ANSWER)


@pytest.fixture(scope="session")
def question_index(fixture_corpus):
    return build_index(fixture_corpus, Grouping.BY_QUESTION)
