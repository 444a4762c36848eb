"""Pronunciation-hazard flagging via a character trigram model plus rarity.

A word is hard to read aloud when its spelling is surprising under a model
of the corpus (high per-character surprisal) or when it is both rare and
long enough that a reader cannot lean on familiarity. Short purely
alphabetic words are never flagged.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from ..corpus import QuestionSet, Token, tokenize
from ..errors import EmptyCorpus

_BOUNDARY_START = "^"
_BOUNDARY_END = "$"
_MIN_FLAG_LENGTH = 4


@dataclass
class PronunciationModel:
    """Add-one-smoothed character trigram model over corpus word tokens.

    Contexts and counts are token-frequency weighted, so common spellings
    dominate the probability mass. ``flag_threshold`` is calibrated from the
    surprisal distribution of the training vocabulary.
    """

    context_counts: dict[str, int]
    trigram_counts: dict[str, int]
    alphabet: tuple[str, ...]
    vocab_freq: dict[str, int]
    flag_threshold: float
    min_freq: int
    quantile: float
    _alphabet_size: int = field(init=False)

    def __post_init__(self) -> None:
        self._alphabet_size = len(self.alphabet)

    def logprob(self, context: str, char: str) -> float:
        """log P(char | two-character context), add-one smoothed."""
        ctx_total = self.context_counts.get(context, 0)
        tri = self.trigram_counts.get(context + char, 0)
        return math.log((tri + 1) / (ctx_total + self._alphabet_size))

    def char_trigram_logprobs(self) -> dict[str, float]:
        """Observed trigram -> log probability (the trained table)."""
        return {
            trigram: self.logprob(trigram[:2], trigram[2])
            for trigram in self.trigram_counts
        }

    def surprisal(self, word: str) -> float:
        """Mean negative log probability per predicted character.

        Predictions cover every character of the word plus the end boundary.
        """
        if not word:
            return 0.0
        padded = _BOUNDARY_START * 2 + word + _BOUNDARY_END
        total = 0.0
        for i in range(2, len(padded)):
            total -= self.logprob(padded[i - 2 : i], padded[i])
        return total / (len(word) + 1)


def _iter_corpus_words(qs: QuestionSet) -> Counter[str]:
    freq: Counter[str] = Counter()
    for q in qs:
        for token in tokenize(q.text):
            if token.normalized:
                freq[token.normalized] += 1
    return freq


def train_pronunciation_model(
    qs: QuestionSet, quantile: float = 0.95, min_freq: int = 3
) -> PronunciationModel:
    """Train the trigram model and calibrate the surprisal cutoff.

    The cutoff is placed so that ceil((1 - quantile) * vocabulary) distinct
    words sit at or above it; quantile 1.0 places it above every trained
    word's surprisal.
    """
    if not (0.0 <= quantile <= 1.0):
        raise ValueError("quantile must be in [0, 1]")
    freq = _iter_corpus_words(qs)
    if not freq:
        raise EmptyCorpus("corpus has no word tokens")

    context_counts: Counter[str] = Counter()
    trigram_counts: Counter[str] = Counter()
    chars: set[str] = {_BOUNDARY_END}
    for word, count in freq.items():
        chars.update(word)
        padded = _BOUNDARY_START * 2 + word + _BOUNDARY_END
        for i in range(2, len(padded)):
            context_counts[padded[i - 2 : i]] += count
            trigram_counts[padded[i - 2 : i + 1]] += count

    model = PronunciationModel(
        context_counts=dict(context_counts),
        trigram_counts=dict(trigram_counts),
        alphabet=tuple(sorted(chars)),
        vocab_freq=dict(freq),
        flag_threshold=0.0,
        min_freq=min_freq,
        quantile=quantile,
    )
    surprisals = sorted(model.surprisal(word) for word in freq)
    n = len(surprisals)
    flagged_count = math.ceil((1.0 - quantile) * n)
    if flagged_count <= 0:
        model.flag_threshold = math.nextafter(surprisals[-1], math.inf)
    else:
        model.flag_threshold = surprisals[n - flagged_count]
    return model


def flag_hard_words(m: PronunciationModel, text: str) -> list[tuple[Token, float]]:
    """Tokens likely to need an in-text pronunciation guide, with surprisal.

    Flagged when per-char surprisal reaches the calibrated cutoff, or when
    the word is corpus-rare and at least four characters long. Short purely
    alphabetic words are exempt.
    """
    flagged: list[tuple[Token, float]] = []
    for token in tokenize(text):
        word = token.normalized
        if not word:
            continue
        if len(word) < _MIN_FLAG_LENGTH and token.surface.isalpha():
            continue
        score = m.surprisal(word)
        rare = (
            m.vocab_freq.get(word, 0) < m.min_freq and len(word) >= _MIN_FLAG_LENGTH
        )
        if score >= m.flag_threshold or rare:
            flagged.append((token, score))
    return flagged
