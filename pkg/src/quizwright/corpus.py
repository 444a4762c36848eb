"""Question-set ingestion, tokenization, and sentence segmentation.

Everything downstream (highlights, buzz markers, country mentions) references
character offsets produced here, so the tokenizer and sentence splitter are
deterministic pure functions and offsets are Unicode scalar-value offsets
(Python string indices), never bytes.
"""

from __future__ import annotations

import json
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import CycleDetected, DuplicateId, MalformedFile

# Maximal runs of alphanumerics, allowing internal apostrophes (straight or
# curly) and hyphens: "Saturn's" and "Thunder-ten-Tronckh" are single tokens.
_TOKEN_RE = re.compile(r"[^\W_]+(?:['’\-][^\W_]+)*", re.UNICODE)

_SENTENCE_TERMINATORS = ".?!"


class DifficultyLabel(str, Enum):
    HIGH_SCHOOL = "high_school"
    COLLEGE = "college"
    UNLABELED = "unlabeled"


def parse_difficulty(raw: str | None) -> DifficultyLabel:
    """Map a free-form difficulty string onto the binary label set.

    Only "high school" and "college" (case-insensitive, separator-tolerant)
    are recognized; anything else is Unlabeled.
    """
    if raw is None:
        return DifficultyLabel.UNLABELED
    folded = re.sub(r"[\s_\-]+", " ", raw.strip().lower())
    if folded == "high school" or folded == "highschool":
        return DifficultyLabel.HIGH_SCHOOL
    if folded == "college":
        return DifficultyLabel.COLLEGE
    return DifficultyLabel.UNLABELED


@dataclass(frozen=True)
class Question:
    id: str
    text: str
    answer: str
    category: str | None = None
    subcategory: str | None = None
    difficulty_label: DifficultyLabel = DifficultyLabel.UNLABELED
    source: str = ""


@dataclass
class QuestionSet:
    """An ordered, immutable-after-load collection of questions."""

    questions: tuple[Question, ...]
    category_counts: dict[str, int] = field(default_factory=dict)
    subcategory_counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.questions = tuple(self.questions)
        self.category_counts = dict(
            Counter(q.category for q in self.questions if q.category)
        )
        self.subcategory_counts = dict(
            Counter(q.subcategory for q in self.questions if q.subcategory)
        )

    def __len__(self) -> int:
        return len(self.questions)

    def __iter__(self):
        return iter(self.questions)


@dataclass(frozen=True)
class Token:
    surface: str
    start: int
    end: int
    normalized: str


@dataclass(frozen=True)
class SentenceSpan:
    start: int
    end: int
    index: int


def fold_diacritics(text: str) -> str:
    """NFKD-decompose and drop combining marks ("Chávez" -> "Chavez")."""
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def normalize_token(surface: str) -> str:
    """Lowercase, diacritic-fold, and strip non-alphanumerics from one token."""
    folded = fold_diacritics(surface).lower()
    return "".join(ch for ch in folded if ch.isalnum())


def normalize_text(text: str) -> str:
    """Normalize a whole phrase: per-token normalization joined by spaces.

    "Saturn's rings" -> "saturns rings". This is the key form used by the
    alias table and country matching.
    """
    parts = [tok.normalized for tok in tokenize(text)]
    return " ".join(p for p in parts if p)


_LEADING_ARTICLES = ("the", "a", "an")


def normalize_answer(s: str) -> str:
    """Canonicalize an answer line for equality checks.

    Lowercases, folds diacritics, strips punctuation, collapses whitespace,
    and drops a leading article: "The Tender Land" -> "tender land".
    """
    normalized = normalize_text(s)
    parts = normalized.split(" ") if normalized else []
    if len(parts) > 1 and parts[0] in _LEADING_ARTICLES:
        parts = parts[1:]
    return " ".join(parts)


def tokenize(text: str) -> list[Token]:
    """Split text into offset-carrying tokens.

    Offsets index the input string exactly: ``text[t.start:t.end] == t.surface``.
    """
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        surface = m.group(0)
        tokens.append(Token(surface, m.start(), m.end(), normalize_token(surface)))
    return tokens


def _is_single_letter_abbreviation(text: str, dot: int) -> bool:
    # Initials like "J. K. Rowling": an uppercase one-letter word before the dot.
    if dot == 0:
        return False
    prev = text[dot - 1]
    if not (prev.isalpha() and prev.isupper()):
        return False
    return dot - 1 == 0 or not text[dot - 2].isalnum()


def split_sentences(text: str) -> list[SentenceSpan]:
    """Segment text into ordered sentence spans.

    A '.', '?' or '!' ends a sentence when followed by whitespace and then an
    uppercase letter, or when it closes the text. Single-letter abbreviations
    (initials) never split. Spans cover every non-whitespace character.
    """
    spans: list[SentenceSpan] = []
    n = len(text)
    start: int | None = None
    for i, ch in enumerate(text):
        if start is None and not ch.isspace():
            start = i
        if start is None or ch not in _SENTENCE_TERMINATORS:
            continue
        if ch == "." and _is_single_letter_abbreviation(text, i):
            continue
        j = i + 1
        while j < n and text[j].isspace():
            j += 1
        if j < n and j > i + 1 and text[j].isupper():
            spans.append(SentenceSpan(start, i + 1, len(spans)))
            start = None
    if start is not None:
        end = n
        while end > start and text[end - 1].isspace():
            end -= 1
        spans.append(SentenceSpan(start, end, len(spans)))
    return spans


def _require_str(record: dict, key: str, index: int, *, optional: bool = False) -> str | None:
    value = record.get(key)
    if value is None:
        if optional:
            return None
        raise MalformedFile(f"record {index}: missing required field {key!r}")
    if not isinstance(value, str):
        raise MalformedFile(f"record {index}: field {key!r} must be a string")
    if not optional and not value:
        raise MalformedFile(f"record {index}: field {key!r} must be non-empty")
    return value


def load_question_set(path: str | Path) -> QuestionSet:
    """Load a question-set JSON file.

    The format is a top-level array of objects with required keys
    ``id``, ``text``, ``answer`` and optional ``category``, ``subcategory``,
    ``difficulty``, ``source``. Unknown keys are ignored.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedFile(f"{path}: {exc}") from exc
    if not isinstance(raw, list):
        raise MalformedFile(f"{path}: top level must be a JSON array")

    questions: list[Question] = []
    seen_ids: set[str] = set()
    for i, record in enumerate(raw):
        if not isinstance(record, dict):
            raise MalformedFile(f"record {i}: not a JSON object")
        qid = _require_str(record, "id", i)
        text = _require_str(record, "text", i)
        answer = _require_str(record, "answer", i)
        if qid in seen_ids:
            raise DuplicateId(f"record {i}: duplicate question id {qid!r}")
        seen_ids.add(qid)
        questions.append(
            Question(
                id=qid,
                text=text,
                answer=answer,
                category=_require_str(record, "category", i, optional=True),
                subcategory=_require_str(record, "subcategory", i, optional=True),
                difficulty_label=parse_difficulty(
                    _require_str(record, "difficulty", i, optional=True)
                ),
                source=_require_str(record, "source", i, optional=True) or "",
            )
        )
    return QuestionSet(tuple(questions))


def _data_lines(path: Path) -> list[tuple[int, str]]:
    lines = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip("\n")
        if not stripped.strip() or stripped.lstrip().startswith("#"):
            continue
        lines.append((lineno, stripped))
    return lines


@dataclass
class AliasTable:
    """Alias -> canonical entity mapping with redirect chains collapsed.

    Keys of ``alias_to_canonical`` are normalized (see ``normalize_text``);
    every canonical name maps to itself under normalization.
    """

    canonical: set[str] = field(default_factory=set)
    alias_to_canonical: dict[str, str] = field(default_factory=dict)

    def resolve(self, name: str) -> str | None:
        """Resolve an arbitrary surface string to its canonical entity."""
        key = normalize_text(name)
        hit = self.alias_to_canonical.get(key)
        if hit is not None:
            return hit
        # Tolerate a leading article the alias file did not carry.
        parts = key.split(" ")
        if len(parts) > 1 and parts[0] in ("the", "a", "an"):
            return self.alias_to_canonical.get(" ".join(parts[1:]))
        return None

    def dump_tsv(self, path: str | Path) -> None:
        lines = [
            f"{alias}\t{canonical}"
            for alias, canonical in sorted(self.alias_to_canonical.items())
        ]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_alias_table(path: str | Path) -> AliasTable:
    """Load alias TSV ("alias<TAB>canonical" per line) and close redirect chains.

    Chains like A -> B, B -> C collapse so every alias maps directly to the
    final canonical name. A redirect cycle rejects the whole file.
    """
    path = Path(path)
    raw_map: dict[str, str] = {}
    for lineno, line in _data_lines(path):
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise MalformedFile(f"{path}:{lineno}: expected 'alias<TAB>canonical'")
        alias, canonical = parts[0].strip(), parts[1].strip()
        raw_map[normalize_text(alias)] = canonical

    def chase(target: str) -> str:
        seen: set[str] = set()
        current = target
        while True:
            key = normalize_text(current)
            if key in seen:
                raise CycleDetected(f"{path}: redirect cycle through {current!r}")
            seen.add(key)
            nxt = raw_map.get(key)
            if nxt is None or normalize_text(nxt) == key:
                return nxt if nxt is not None else current
            current = nxt

    table = AliasTable()
    for alias_key, canonical in raw_map.items():
        final = chase(canonical)
        table.alias_to_canonical[alias_key] = final
        table.canonical.add(final)
    for name in table.canonical:
        table.alias_to_canonical[normalize_text(name)] = name
    return table


@dataclass(frozen=True)
class CountryEntry:
    name: str
    tokens: tuple[str, ...]
    region: str


@dataclass
class CountryLexicon:
    entries: tuple[CountryEntry, ...]
    regions: set[str] = field(default_factory=set)

    def __post_init__(self) -> None:
        self.regions = {e.region for e in self.entries}

    def __len__(self) -> int:
        return len(self.entries)


def load_country_lexicon(path: str | Path) -> CountryLexicon:
    """Load country TSV ("country<TAB>region" per line).

    Multi-word names are kept as normalized token sequences so matching can
    require whole consecutive tokens ("Burkina Faso" is two tokens).
    """
    path = Path(path)
    entries: list[CountryEntry] = []
    seen: set[str] = set()
    for lineno, line in _data_lines(path):
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise MalformedFile(f"{path}:{lineno}: expected 'country<TAB>region'")
        name, region = parts[0].strip(), parts[1].strip()
        tokens = tuple(t.normalized for t in tokenize(name) if t.normalized)
        if not tokens:
            raise MalformedFile(f"{path}:{lineno}: country name has no tokens")
        if name in seen:
            raise MalformedFile(f"{path}:{lineno}: duplicate country {name!r}")
        seen.add(name)
        entries.append(CountryEntry(name=name, tokens=tokens, region=region))
    return CountryLexicon(tuple(entries))
