"""Incremental buzz evaluation over growing draft prefixes.

The machine "buzzes" where its confidence crosses a threshold. The position
only locks when the confident top guess also matches the author's answer
(directly, via normalization, or through the redirect alias closure); until
then a confident wrong guess merely marks a would-buzz point, and that point
moving later is counted as a regression event.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .corpus import AliasTable, Question, normalize_answer, split_sentences, tokenize
from .errors import OutOfOrderEvaluation, WrongGrouping
from .index import Grouping, Guess, TfIdfIndex, confidence as confidence_of, query


class EvaluationGrain(str, Enum):
    PER_TOKEN = "token"
    PER_SENTENCE = "sentence"


class MatchVia(str, Enum):
    EXACT = "exact"
    NORMALIZED = "normalized"
    ALIAS = "alias"


@dataclass(frozen=True)
class BuzzConfig:
    confidence_threshold: float = 0.5
    evaluation_grain: EvaluationGrain = EvaluationGrain.PER_SENTENCE
    top_k: int = 10

    def __post_init__(self) -> None:
        if not (0.0 < self.confidence_threshold <= 1.0):
            raise ValueError("confidence_threshold must be in (0, 1]")
        if self.top_k < 2:
            raise ValueError("top_k must be >= 2")


@dataclass(frozen=True)
class AnswerMatch:
    user_answer: str
    machine_answer: str
    verdict: bool
    via: MatchVia | None = None


@dataclass(frozen=True)
class BuzzEvaluation:
    prefix_end: int
    guesses: tuple[Guess, ...]
    confidence: float
    matches_user_answer: bool
    pass_id: int = 0


@dataclass(frozen=True)
class BuzzState:
    """Evolving judgment over a draft; folded one evaluation at a time.

    ``current_position`` is the latest confident-but-wrong would-buzz point;
    ``first_wrong_position`` pins the earliest one for display. A lock freezes
    ``lock_position`` permanently.
    """

    locked: bool = False
    lock_position: int | None = None
    current_position: int | None = None
    history: tuple[BuzzEvaluation, ...] = ()
    regression_events: int = 0
    first_wrong_position: int | None = None
    first_wrong_guess: str | None = None


def answers_match(at: AliasTable, user_answer: str, machine_answer: str) -> AnswerMatch:
    """Decide whether two answer strings denote the same entity."""
    if user_answer == machine_answer:
        return AnswerMatch(user_answer, machine_answer, True, MatchVia.EXACT)
    if normalize_answer(user_answer) == normalize_answer(machine_answer):
        return AnswerMatch(user_answer, machine_answer, True, MatchVia.NORMALIZED)
    user_canon = at.resolve(user_answer)
    machine_canon = at.resolve(machine_answer)
    if user_canon is not None and user_canon == machine_canon:
        return AnswerMatch(user_answer, machine_answer, True, MatchVia.ALIAS)
    return AnswerMatch(user_answer, machine_answer, False, None)


def evaluate_prefix(
    ix: TfIdfIndex,
    draft: str,
    prefix_end: int,
    user_answer: str,
    at: AliasTable,
    cfg: BuzzConfig,
    pass_id: int = 0,
) -> BuzzEvaluation:
    """Evaluate one draft prefix: guesses, confidence, and answer match.

    Only text before ``prefix_end`` is consulted.
    """
    if not (0 <= prefix_end <= len(draft)):
        raise ValueError("prefix_end outside draft")
    if ix.grouping is not Grouping.BY_ANSWER:
        raise WrongGrouping("buzz evaluation requires a ByAnswer index")
    guesses = query(ix, draft[:prefix_end], cfg.top_k)
    if not guesses:
        return BuzzEvaluation(prefix_end, (), 0.0, False, pass_id)
    conf = confidence_of([g.score for g in guesses])
    match = answers_match(at, user_answer, guesses[0].answer)
    return BuzzEvaluation(prefix_end, tuple(guesses), conf, match.verdict, pass_id)


def update_buzz_state(st: BuzzState, ev: BuzzEvaluation, cfg: BuzzConfig) -> BuzzState:
    """Fold one evaluation into the state, enforcing the lock rule.

    Once locked, the position never changes; evaluations still append to
    history. A confident evaluation locks only when its top guess matched the
    user's answer; a confident miss moves the would-buzz point and counts a
    regression whenever that point moves later. Within one pass, evaluations
    must arrive in prefix order; a repeat of the last prefix is a no-op.
    """
    if st.history:
        last = st.history[-1]
        if ev.pass_id == last.pass_id:
            if ev.prefix_end < last.prefix_end:
                raise OutOfOrderEvaluation(
                    f"prefix_end {ev.prefix_end} precedes {last.prefix_end}"
                )
            if ev.prefix_end == last.prefix_end:
                return st
    base = replace(st, history=st.history + (ev,))
    if st.locked:
        return base
    if ev.confidence >= cfg.confidence_threshold and ev.matches_user_answer:
        return replace(base, locked=True, lock_position=ev.prefix_end)
    if ev.confidence >= cfg.confidence_threshold:
        regressions = st.regression_events
        if st.current_position is not None and ev.prefix_end > st.current_position:
            regressions += 1
        first_pos, first_guess = st.first_wrong_position, st.first_wrong_guess
        if first_pos is None:
            first_pos = ev.prefix_end
            first_guess = ev.guesses[0].answer if ev.guesses else None
        return replace(
            base,
            current_position=ev.prefix_end,
            regression_events=regressions,
            first_wrong_position=first_pos,
            first_wrong_guess=first_guess,
        )
    return base


def grain_boundaries(text: str, grain: EvaluationGrain) -> list[int]:
    """Prefix endpoints to evaluate at: sentence ends or token ends."""
    if grain is EvaluationGrain.PER_SENTENCE:
        return [span.end for span in split_sentences(text)]
    return [tok.end for tok in tokenize(text)]


def replay_draft(
    ix: TfIdfIndex,
    text: str,
    user_answer: str,
    at: AliasTable,
    cfg: BuzzConfig,
    state: BuzzState | None = None,
    pass_id: int = 0,
) -> BuzzState:
    """Evaluate every grain boundary of a draft in order, folding the state.

    Uses one incremental scoring pass over the text rather than a fresh query
    per prefix, so a full-draft replay costs about as much as one full query.
    """
    if ix.grouping is not Grouping.BY_ANSWER:
        raise WrongGrouping("buzz evaluation requires a ByAnswer index")
    st = state if state is not None else BuzzState()
    scorer = ix.scorer()
    cursor = 0
    for boundary in grain_boundaries(text, cfg.evaluation_grain):
        for token in tokenize(text[cursor:boundary]):
            scorer.feed(token.normalized)
        cursor = boundary
        guesses = scorer.snapshot(cfg.top_k)
        if guesses:
            conf = confidence_of([g.score for g in guesses])
            verdict = answers_match(at, user_answer, guesses[0].answer).verdict
            ev = BuzzEvaluation(boundary, tuple(guesses), conf, verdict, pass_id)
        else:
            ev = BuzzEvaluation(boundary, (), 0.0, False, pass_id)
        st = update_buzz_state(st, ev, cfg)
    return st


def replay_full_question(
    ix: TfIdfIndex, question: Question, at: AliasTable, cfg: BuzzConfig
) -> BuzzState:
    """Batch analogue of interactive typing: replay one stored question."""
    return replay_draft(ix, question.text, question.answer, at, cfg)
