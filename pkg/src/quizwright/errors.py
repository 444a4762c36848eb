"""Exception hierarchy shared by every module.

Each error carries a stable machine-readable ``code`` so the HTTP layer and
the CLI can map failures without string matching.
"""

from __future__ import annotations


class QuizwrightError(Exception):
    """Base class for all workbench errors."""

    code = "Error"

    @property
    def message(self) -> str:
        return str(self)


class MalformedFile(QuizwrightError):
    code = "MalformedFile"


class DuplicateId(QuizwrightError):
    code = "DuplicateId"


class CycleDetected(QuizwrightError):
    code = "CycleDetected"


class EmptyCorpus(QuizwrightError):
    code = "EmptyCorpus"


class UnknownAnswer(QuizwrightError):
    code = "UnknownAnswer"


class WrongGrouping(QuizwrightError):
    code = "WrongGrouping"


class EmptyScores(QuizwrightError):
    code = "EmptyScores"


class OutOfOrderEvaluation(QuizwrightError):
    code = "OutOfOrderEvaluation"


class InsufficientLabels(QuizwrightError):
    code = "InsufficientLabels"


class SessionFinalized(QuizwrightError):
    code = "SessionFinalized"


class EditAfterDeadline(QuizwrightError):
    code = "EditAfterDeadline"


class EmptyDraft(QuizwrightError):
    code = "EmptyDraft"


class StaleReport(QuizwrightError):
    code = "StaleReport"


class UnknownSession(QuizwrightError):
    code = "UnknownSession"


class EnginesNotReady(QuizwrightError):
    code = "EnginesNotReady"
