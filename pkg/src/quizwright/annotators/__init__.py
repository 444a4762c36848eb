"""Draft annotators: pronunciation difficulty, countries, difficulty class."""

from .countries import (
    CountryMention,
    RepresentationTable,
    build_representation_table,
    detect_countries,
    recommend_underrepresented,
)
from .difficulty import (
    DifficultyClassifier,
    TrainingGrain,
    classify_difficulty,
    train_difficulty,
)
from .pronunciation import (
    PronunciationModel,
    flag_hard_words,
    train_pronunciation_model,
)

__all__ = [
    "CountryMention",
    "RepresentationTable",
    "build_representation_table",
    "detect_countries",
    "recommend_underrepresented",
    "DifficultyClassifier",
    "TrainingGrain",
    "classify_difficulty",
    "train_difficulty",
    "PronunciationModel",
    "flag_hard_words",
    "train_pronunciation_model",
]
