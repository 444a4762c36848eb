"""Composition root: load the corpus and build every model the widgets need.

Engines are immutable after loading and shared read-only by all sessions and
request handlers.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from .annotators import (
    RepresentationTable,
    build_representation_table,
    train_difficulty,
    train_pronunciation_model,
)
from .annotators.difficulty import DifficultyClassifier, TrainingGrain
from .annotators.pronunciation import PronunciationModel
from .buzzer import BuzzConfig, EvaluationGrain
from .config import AppConfig
from .corpus import (
    AliasTable,
    CountryLexicon,
    QuestionSet,
    load_alias_table,
    load_country_lexicon,
    load_question_set,
)
from .errors import InsufficientLabels
from .index import Grouping, TfIdfIndex, build_index

logger = logging.getLogger(__name__)


@dataclass
class Engines:
    question_set: QuestionSet
    answer_index: TfIdfIndex
    question_index: TfIdfIndex
    alias_table: AliasTable
    country_lexicon: CountryLexicon
    representation_table: RepresentationTable
    pronunciation_model: PronunciationModel
    difficulty_classifier: DifficultyClassifier | None
    buzz_config: BuzzConfig
    config: AppConfig

    @property
    def corpus_hash(self) -> str:
        return self.answer_index.corpus_hash


def load_engines(config: AppConfig, base_dir: Path | None = None) -> Engines:
    """Load data files and train the feature models, single-threaded."""
    corpus = load_question_set(config.resolve_path(config.corpus_path, base_dir))
    alias_table = load_alias_table(config.resolve_path(config.alias_path, base_dir))
    lexicon = load_country_lexicon(config.resolve_path(config.lexicon_path, base_dir))

    answer_index = build_index(corpus, Grouping.BY_ANSWER)
    question_index = build_index(corpus, Grouping.BY_QUESTION)
    representation = build_representation_table(corpus, lexicon)
    pronunciation = train_pronunciation_model(
        corpus,
        quantile=config.pronunciation_quantile,
        min_freq=config.pronunciation_min_freq,
    )

    classifier: DifficultyClassifier | None = None
    if config.difficulty_model_path:
        classifier = DifficultyClassifier.load(
            config.resolve_path(config.difficulty_model_path, base_dir)
        )
    else:
        try:
            classifier = train_difficulty(
                corpus,
                grain=TrainingGrain(config.difficulty_grain),
                seed=config.difficulty_seed,
                epochs=config.difficulty_epochs,
                learning_rate=config.difficulty_learning_rate,
            )
        except InsufficientLabels:
            logger.warning(
                "corpus lacks labeled questions; difficulty widget disabled"
            )

    buzz_config = BuzzConfig(
        confidence_threshold=config.confidence_threshold,
        evaluation_grain=EvaluationGrain(config.evaluation_grain),
        top_k=config.buzz_top_k,
    )
    return Engines(
        question_set=corpus,
        answer_index=answer_index,
        question_index=question_index,
        alias_table=alias_table,
        country_lexicon=lexicon,
        representation_table=representation,
        pronunciation_model=pronunciation,
        difficulty_classifier=classifier,
        buzz_config=buzz_config,
        config=config,
    )
