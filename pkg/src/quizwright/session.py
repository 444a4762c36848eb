"""One author's live draft: edits, snapshots, analysis, scoring, submission.

A session owns exactly one draft. Edits replace the text wholesale and
re-drive the buzzer; snapshots capture the edit history at a configured
cadence; ``analyze`` composes every widget into a single report stamped with
the draft's content hash so stale reports can never be acted on.
"""

from __future__ import annotations

import hashlib
import json
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .annotators import (
    detect_countries,
    flag_hard_words,
    recommend_underrepresented,
)
from .annotators.countries import CountryMention
from .annotators.difficulty import classify_difficulty
from .buzzer import BuzzState, replay_draft
from .corpus import DifficultyLabel, Token
from .engines import Engines
from .errors import (
    EditAfterDeadline,
    EmptyDraft,
    SessionFinalized,
    StaleReport,
)
from .index import EvidenceSpan, Guess, evidence, query, similar_questions


def draft_hash(text: str, answer: str) -> str:
    digest = hashlib.sha256()
    digest.update(text.encode("utf-8"))
    digest.update(b"\x00")
    digest.update(answer.encode("utf-8"))
    return digest.hexdigest()


def iso8601(ts: float) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).isoformat()


@dataclass(frozen=True)
class EditSnapshot:
    at: float
    text: str
    answer: str
    buzz_locked: bool
    buzz_position: int | None

    def to_json_line(self) -> str:
        return json.dumps(
            {
                "at": iso8601(self.at),
                "text": self.text,
                "answer": self.answer,
                "buzz": {"locked": self.buzz_locked, "position": self.buzz_position},
            },
            ensure_ascii=False,
        )


@dataclass(frozen=True)
class GameClock:
    duration_s: float
    started_at: float

    def remaining(self, now: float) -> float:
        return max(0.0, self.started_at + self.duration_s - now)

    def expired(self, now: float) -> bool:
        return now > self.started_at + self.duration_s


@dataclass(frozen=True)
class GameScore:
    adversarial_component: float
    diversity_component: float
    total: int


@dataclass
class AnalysisReport:
    report_hash: str
    guesses: list[Guess] = field(default_factory=list)
    buzz: BuzzState = field(default_factory=BuzzState)
    evidence_spans: list[EvidenceSpan] = field(default_factory=list)
    pronunciation_spans: list[tuple[Token, float]] = field(default_factory=list)
    country_mentions: list[CountryMention] = field(default_factory=list)
    recommendations: list[tuple[str, int]] = field(default_factory=list)
    similar: list[tuple[str, float]] = field(default_factory=list)
    difficulty: tuple[DifficultyLabel, float] | None = None
    category_distribution: dict[str, int] = field(default_factory=dict)
    errors: dict[str, str] = field(default_factory=dict)
    game_remaining_s: float | None = None
    game_estimate: GameScore | None = None


@dataclass(frozen=True)
class SubmissionRecord:
    session_id: str
    finalized_at: float
    text: str
    answer: str
    category: str | None
    difficulty_label: str | None
    difficulty_p: float | None
    score: GameScore | None
    snapshots: tuple[EditSnapshot, ...]
    buzz_history: tuple[dict, ...]

    def to_json_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "finalized_at": iso8601(self.finalized_at),
            "text": self.text,
            "answer": self.answer,
            "category": self.category,
            "difficulty": {
                "label": self.difficulty_label,
                "p": self.difficulty_p,
            },
            "score": None
            if self.score is None
            else {
                "adversarial": self.score.adversarial_component,
                "diversity": self.score.diversity_component,
                "total": self.score.total,
            },
            "snapshots": [
                json.loads(snap.to_json_line()) for snap in self.snapshots
            ],
            "buzz_history": list(self.buzz_history),
        }


@dataclass
class Session:
    id: str
    created_at: float
    last_edit_at: float
    draft_text: str = ""
    draft_answer: str = ""
    category: str | None = None
    buzz_state: BuzzState = field(default_factory=BuzzState)
    snapshots: list[EditSnapshot] = field(default_factory=list)
    game: GameClock | None = None
    finalized: bool = False
    pass_counter: int = 0


def create_session(
    now: float, game_duration_s: float | None = None, category: str | None = None
) -> Session:
    return Session(
        id=uuid.uuid4().hex,
        created_at=now,
        last_edit_at=now,
        category=category,
        game=None
        if game_duration_s is None
        else GameClock(duration_s=game_duration_s, started_at=now),
    )


def apply_edit(
    s: Session, new_text: str, new_answer: str, now: float, engines: Engines
) -> Session:
    """Replace the draft wholesale and re-drive the buzzer over it.

    A no-op edit (identical text and answer) only refreshes the timestamp.
    """
    if s.finalized:
        raise SessionFinalized(f"session {s.id} is finalized")
    if s.game is not None and s.game.expired(now):
        raise EditAfterDeadline(f"game clock expired for session {s.id}")
    if new_text == s.draft_text and new_answer == s.draft_answer:
        s.last_edit_at = now
        return s
    s.draft_text = new_text
    s.draft_answer = new_answer
    s.last_edit_at = now
    s.pass_counter += 1
    s.buzz_state = replay_draft(
        engines.answer_index,
        new_text,
        new_answer,
        engines.alias_table,
        engines.buzz_config,
        state=s.buzz_state,
        pass_id=s.pass_counter,
    )
    return s


def maybe_snapshot(s: Session, now: float, interval: float = 15.0) -> EditSnapshot | None:
    """Record an edit-history snapshot if due.

    Due means the draft changed since the last snapshot and at least
    ``interval`` seconds have passed since it was taken; the first snapshot
    happens as soon as there is any content.
    """
    if s.snapshots:
        last = s.snapshots[-1]
        if now - last.at < interval:
            return None
        if (s.draft_text, s.draft_answer) == (last.text, last.answer):
            return None
    elif not s.draft_text and not s.draft_answer:
        return None
    snap = EditSnapshot(
        at=now,
        text=s.draft_text,
        answer=s.draft_answer,
        buzz_locked=s.buzz_state.locked,
        buzz_position=s.buzz_state.lock_position
        if s.buzz_state.locked
        else s.buzz_state.current_position,
    )
    s.snapshots.append(snap)
    return snap


def _widget(report: AnalysisReport, name: str):
    """Isolate one widget computation; a failure becomes a report entry."""

    def run(fn, default):
        try:
            return fn()
        except Exception as exc:  # noqa: BLE001 - per-widget isolation is the contract
            report.errors[name] = f"{type(exc).__name__}: {exc}"
            return default

    return run


def analyze(s: Session, engines: Engines, now: float | None = None) -> AnalysisReport:
    """Compose every widget's output over the current draft into one report.

    Widget failures never fail the report; they land in ``report.errors``
    keyed by widget name.
    """
    cfg = engines.config
    text = s.draft_text
    report = AnalysisReport(report_hash=draft_hash(text, s.draft_answer))
    report.buzz = s.buzz_state
    report.category_distribution = dict(engines.question_set.category_counts)

    run = _widget(report, "guesses")
    report.guesses = run(
        lambda: query(engines.answer_index, text, cfg.guesses_k) if text else [],
        [],
    )

    run = _widget(report, "evidence")
    if report.guesses:
        top_answer = report.guesses[0].answer
        report.evidence_spans = run(
            lambda: evidence(engines.answer_index, text, top_answer, cfg.evidence_top_n),
            [],
        )

    run = _widget(report, "pronunciation")
    report.pronunciation_spans = run(
        lambda: flag_hard_words(engines.pronunciation_model, text) if text else [],
        [],
    )

    run = _widget(report, "countries")
    report.country_mentions = run(
        lambda: detect_countries(engines.country_lexicon, text) if text else [],
        [],
    )
    run = _widget(report, "recommendations")
    report.recommendations = run(
        lambda: recommend_underrepresented(
            engines.representation_table, report.country_mentions, cfg.recommend_k
        ),
        [],
    )

    run = _widget(report, "similar")
    report.similar = run(
        lambda: similar_questions(engines.question_index, text, cfg.similar_k)
        if text
        else [],
        [],
    )

    run = _widget(report, "difficulty")
    if engines.difficulty_classifier is None:
        report.errors["difficulty"] = "unavailable: no trained difficulty model"
    else:
        report.difficulty = run(
            lambda: classify_difficulty(engines.difficulty_classifier, text),
            None,
        )

    if s.game is not None and now is not None:
        report.game_remaining_s = s.game.remaining(now)
        run = _widget(report, "game_estimate")
        report.game_estimate = run(
            lambda: score_submission(
                s, report, cfg.adversarial_weight, cfg.diversity_weight
            ),
            None,
        )
    return report


def score_submission(
    s: Session,
    report: AnalysisReport,
    adversarial_weight: float = 0.6,
    diversity_weight: float = 0.4,
) -> GameScore:
    """Score a draft: later locks and lower similarity earn more points.

    Never locking is a full adversarial win; an empty similar-questions
    widget is full diversity. ``total = round(100 * (wa*a + wd*d))``.
    """
    if report.report_hash != draft_hash(s.draft_text, s.draft_answer):
        raise StaleReport("report was computed for a different draft")
    if s.buzz_state.locked and s.buzz_state.lock_position is not None and s.draft_text:
        adversarial = s.buzz_state.lock_position / len(s.draft_text)
    else:
        adversarial = 1.0
    max_similarity = max((sim for _, sim in report.similar), default=0.0)
    diversity = 1.0 - max_similarity
    total = round(100.0 * (adversarial_weight * adversarial + diversity_weight * diversity))
    return GameScore(
        adversarial_component=adversarial,
        diversity_component=diversity,
        total=int(total),
    )


def finalize_submission(
    s: Session, report: AnalysisReport, now: float, engines: Engines
) -> SubmissionRecord:
    """Freeze the session and produce its permanent record."""
    if s.finalized:
        raise SessionFinalized(f"session {s.id} is already finalized")
    if not s.draft_text or not s.draft_answer:
        raise EmptyDraft("cannot submit an empty draft or answer")
    if report.report_hash != draft_hash(s.draft_text, s.draft_answer):
        raise StaleReport("report was computed for a different draft")

    score = None
    if s.game is not None:
        score = score_submission(
            s,
            report,
            engines.config.adversarial_weight,
            engines.config.diversity_weight,
        )
    difficulty_label = difficulty_p = None
    if report.difficulty is not None:
        difficulty_label = report.difficulty[0].value
        difficulty_p = report.difficulty[1]

    history = tuple(
        {
            "pass_id": ev.pass_id,
            "prefix_end": ev.prefix_end,
            "confidence": ev.confidence,
            "matches": ev.matches_user_answer,
            "top_guess": ev.guesses[0].answer if ev.guesses else None,
        }
        for ev in s.buzz_state.history
    )
    s.finalized = True
    return SubmissionRecord(
        session_id=s.id,
        finalized_at=now,
        text=s.draft_text,
        answer=s.draft_answer,
        category=s.category,
        difficulty_label=difficulty_label,
        difficulty_p=difficulty_p,
        score=score,
        snapshots=tuple(s.snapshots),
        buzz_history=history,
    )
