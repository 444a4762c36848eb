"""High-school vs college difficulty classifier.

Logistic regression over L2-normalized tf-idf unit vectors, trained by
full-batch gradient descent. Units are whole questions or single sentences
(sentences inherit their question's label); the sentence grain exists so a
lone clue can be rated without the rest of the question. College is the
positive class: reported probabilities are always P(college).
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from ..corpus import DifficultyLabel, QuestionSet, split_sentences, tokenize
from ..errors import InsufficientLabels, MalformedFile

_MODEL_VERSION = 1

LABEL_ORDER = (DifficultyLabel.HIGH_SCHOOL, DifficultyLabel.COLLEGE)


class TrainingGrain(str, Enum):
    PER_QUESTION = "question"
    PER_SENTENCE = "sentence"


@dataclass
class DifficultyClassifier:
    feature_vocab: dict[str, int]
    idf: list[float]
    weights: list[float]
    bias: float
    grain: TrainingGrain
    seed: int

    label_order = LABEL_ORDER

    def feature_vector(self, text: str) -> np.ndarray:
        vec = np.zeros(len(self.feature_vocab), dtype=np.float64)
        counts = Counter(t.normalized for t in tokenize(text) if t.normalized)
        for term, tf in counts.items():
            j = self.feature_vocab.get(term)
            if j is not None:
                vec[j] = (1.0 + math.log(tf)) * self.idf[j]
        norm = float(np.linalg.norm(vec))
        if norm > 0.0:
            vec /= norm
        return vec

    def probability_college(self, text: str) -> float:
        z = float(np.dot(self.feature_vector(text), self.weights)) + self.bias
        return _sigmoid(z)

    def to_json(self) -> str:
        payload = {
            "version": _MODEL_VERSION,
            "grain": self.grain.value,
            "seed": self.seed,
            "bias": self.bias,
            "label_order": [label.value for label in self.label_order],
            "vocab": self.feature_vocab,
            "idf": self.idf,
            "weights": self.weights,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "DifficultyClassifier":
        try:
            payload = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise MalformedFile(f"{path}: {exc}") from exc
        if payload.get("version") != _MODEL_VERSION:
            raise MalformedFile(f"{path}: unsupported model version")
        return cls(
            feature_vocab=dict(payload["vocab"]),
            idf=list(payload["idf"]),
            weights=list(payload["weights"]),
            bias=float(payload["bias"]),
            grain=TrainingGrain(payload["grain"]),
            seed=int(payload["seed"]),
        )


def _sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


def logistic_loss(
    w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray
) -> float:
    """Mean negative log likelihood of labels y in {0, 1}."""
    z = X @ w + b
    # log(1 + exp(z)) - y*z, computed stably
    return float(np.mean(np.logaddexp(0.0, z) - y * z))


def logistic_gradient(
    w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray
) -> tuple[np.ndarray, float]:
    """Analytic gradient of ``logistic_loss`` in (w, b)."""
    z = X @ w + b
    p = 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))
    err = p - y
    return X.T @ err / len(y), float(np.mean(err))


def _training_units(
    qs: QuestionSet, grain: TrainingGrain
) -> tuple[list[str], list[int]]:
    texts: list[str] = []
    labels: list[int] = []
    for q in qs:
        if q.difficulty_label is DifficultyLabel.UNLABELED:
            continue
        y = 1 if q.difficulty_label is DifficultyLabel.COLLEGE else 0
        if grain is TrainingGrain.PER_QUESTION:
            texts.append(q.text)
            labels.append(y)
        else:
            for span in split_sentences(q.text):
                texts.append(q.text[span.start : span.end])
                labels.append(y)
    return texts, labels


def train_difficulty(
    qs: QuestionSet,
    grain: TrainingGrain = TrainingGrain.PER_QUESTION,
    seed: int = 13,
    epochs: int = 400,
    learning_rate: float = 2.0,
) -> DifficultyClassifier:
    """Train the classifier on every labeled question in the set.

    Deterministic: full-batch gradient descent from zero weights, so the seed
    only tags the model for reproducible bookkeeping (splits happen upstream).
    Requires at least two examples of each class.
    """
    texts, labels = _training_units(qs, grain)
    per_class = Counter(labels)
    if per_class[0] < 2 or per_class[1] < 2:
        raise InsufficientLabels(
            "need at least 2 labeled examples of each difficulty class"
        )

    df: Counter[str] = Counter()
    unit_counts: list[Counter[str]] = []
    for text in texts:
        counts = Counter(t.normalized for t in tokenize(text) if t.normalized)
        unit_counts.append(counts)
        df.update(counts.keys())
    vocab = {term: j for j, term in enumerate(sorted(df))}
    n_units = len(texts)
    idf = [0.0] * len(vocab)
    for term, j in vocab.items():
        idf[j] = math.log(n_units / df[term])

    X = np.zeros((n_units, len(vocab)), dtype=np.float64)
    for i, counts in enumerate(unit_counts):
        for term, tf in counts.items():
            X[i, vocab[term]] = (1.0 + math.log(tf)) * idf[vocab[term]]
        norm = np.linalg.norm(X[i])
        if norm > 0.0:
            X[i] /= norm
    y = np.asarray(labels, dtype=np.float64)

    w = np.zeros(len(vocab), dtype=np.float64)
    b = 0.0
    for _ in range(epochs):
        grad_w, grad_b = logistic_gradient(w, b, X, y)
        w -= learning_rate * grad_w
        b -= learning_rate * grad_b

    return DifficultyClassifier(
        feature_vocab=vocab,
        idf=idf,
        weights=[float(v) for v in w],
        bias=float(b),
        grain=grain,
        seed=seed,
    )


def classify_difficulty(
    c: DifficultyClassifier, text: str
) -> tuple[DifficultyLabel, float]:
    """Label a draft; the probability returned is always P(college).

    The sentence grain labels each sentence and majority-votes the question
    label, with the mean sentence probability breaking ties and reported as
    the question probability.
    """
    if c.grain is TrainingGrain.PER_QUESTION:
        p = c.probability_college(text)
        label = LABEL_ORDER[1] if p >= 0.5 else LABEL_ORDER[0]
        return label, p
    details = classify_sentences(c, text)
    if not details:
        p = c.probability_college(text)
        return (LABEL_ORDER[1] if p >= 0.5 else LABEL_ORDER[0]), p
    votes_college = sum(1 for _, label, _ in details if label is LABEL_ORDER[1])
    mean_p = sum(p for _, _, p in details) / len(details)
    if votes_college * 2 > len(details):
        label = LABEL_ORDER[1]
    elif votes_college * 2 < len(details):
        label = LABEL_ORDER[0]
    else:
        label = LABEL_ORDER[1] if mean_p >= 0.5 else LABEL_ORDER[0]
    return label, mean_p


def classify_sentences(
    c: DifficultyClassifier, text: str
) -> list[tuple[tuple[int, int], DifficultyLabel, float]]:
    """Per-sentence labels: ((start, end), label, P(college)) per sentence."""
    out = []
    for span in split_sentences(text):
        p = c.probability_college(text[span.start : span.end])
        label = LABEL_ORDER[1] if p >= 0.5 else LABEL_ORDER[0]
        out.append(((span.start, span.end), label, p))
    return out
