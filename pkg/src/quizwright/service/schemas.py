"""Pydantic wire models: the JSON projection of an analysis report.

Offsets on the wire are the engine's character offsets, untouched; floats
ride through Python's repr serialization, which preserves them exactly.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..session import AnalysisReport


class GameBody(BaseModel):
    duration_s: float = Field(gt=0)


class CreateSessionBody(BaseModel):
    game: Optional[GameBody] = None
    category: Optional[str] = None


class CreateSessionResponse(BaseModel):
    session_id: str


class DraftBody(BaseModel):
    text: str
    answer: str


class SpanModel(BaseModel):
    start: int
    end: int
    kind: Literal["evidence", "pronunciation", "country"]
    payload: dict


class GuessModel(BaseModel):
    answer: str
    score: float
    confidence: float


class BuzzHistoryEntry(BaseModel):
    pass_id: int
    prefix_end: int
    confidence: float
    matches: bool
    top_guess: Optional[str]


class BuzzModel(BaseModel):
    locked: bool
    position: Optional[int]
    history_len: int
    regression_events: int
    first_wrong_position: Optional[int]
    first_wrong_guess: Optional[str]
    history: list[BuzzHistoryEntry]


class SimilarModel(BaseModel):
    id: str
    similarity: float


class DifficultyModel(BaseModel):
    label: str
    p: float


class RecommendationModel(BaseModel):
    country: str
    count: int


class ScoreModel(BaseModel):
    adversarial: float
    diversity: float
    total: int


class GameModel(BaseModel):
    remaining_s: float
    estimate: Optional[ScoreModel] = None


class WireReport(BaseModel):
    report_hash: str
    spans: list[SpanModel]
    guesses: list[GuessModel]
    buzz: BuzzModel
    similar: list[SimilarModel]
    difficulty: Optional[DifficultyModel]
    distribution: dict[str, int]
    recommendations: list[RecommendationModel]
    errors: dict[str, str]
    game: Optional[GameModel] = None


class HealthResponse(BaseModel):
    status: str
    version: str
    engines: str
    corpus_hash: Optional[str] = None
    n_answer_docs: Optional[int] = None
    n_question_docs: Optional[int] = None
    detail: Optional[str] = None


class ErrorBody(BaseModel):
    code: str
    message: str


def report_to_wire(report: AnalysisReport) -> WireReport:
    spans: list[SpanModel] = []
    for ev in report.evidence_spans:
        spans.append(
            SpanModel(
                start=ev.start,
                end=ev.end,
                kind="evidence",
                payload={"term": ev.term, "contribution": ev.contribution},
            )
        )
    for token, surprisal in report.pronunciation_spans:
        spans.append(
            SpanModel(
                start=token.start,
                end=token.end,
                kind="pronunciation",
                payload={"word": token.surface, "surprisal": surprisal},
            )
        )
    for mention in report.country_mentions:
        spans.append(
            SpanModel(
                start=mention.start,
                end=mention.end,
                kind="country",
                payload={"country": mention.country, "region": mention.region},
            )
        )

    buzz_state = report.buzz
    position = (
        buzz_state.lock_position if buzz_state.locked else buzz_state.current_position
    )
    buzz = BuzzModel(
        locked=buzz_state.locked,
        position=position,
        history_len=len(buzz_state.history),
        regression_events=buzz_state.regression_events,
        first_wrong_position=buzz_state.first_wrong_position,
        first_wrong_guess=buzz_state.first_wrong_guess,
        history=[
            BuzzHistoryEntry(
                pass_id=ev.pass_id,
                prefix_end=ev.prefix_end,
                confidence=ev.confidence,
                matches=ev.matches_user_answer,
                top_guess=ev.guesses[0].answer if ev.guesses else None,
            )
            for ev in buzz_state.history
        ],
    )

    difficulty = None
    if report.difficulty is not None:
        label, p = report.difficulty
        difficulty = DifficultyModel(label=label.value, p=p)

    game = None
    if report.game_remaining_s is not None:
        estimate = None
        if report.game_estimate is not None:
            estimate = ScoreModel(
                adversarial=report.game_estimate.adversarial_component,
                diversity=report.game_estimate.diversity_component,
                total=report.game_estimate.total,
            )
        game = GameModel(remaining_s=report.game_remaining_s, estimate=estimate)

    return WireReport(
        report_hash=report.report_hash,
        spans=spans,
        guesses=[
            GuessModel(answer=g.answer, score=g.score, confidence=g.confidence)
            for g in report.guesses
        ],
        buzz=buzz,
        similar=[SimilarModel(id=i, similarity=s) for i, s in report.similar],
        difficulty=difficulty,
        distribution=dict(report.category_distribution),
        recommendations=[
            RecommendationModel(country=c, count=n) for c, n in report.recommendations
        ],
        errors=dict(report.errors),
        game=game,
    )
