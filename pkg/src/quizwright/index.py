"""Inverted tf-idf index: guessing, evidence terms, and nearest-question search.

Weighting is pinned: document vectors use 1 + ln(tf) with no idf, cosine
normalization applied at scoring time (lnc); query vectors use
(1 + ln(tf)) * ln(n_docs / df) (ltc). Unknown query terms contribute nothing.

The index is immutable after build. Scoring goes through an incremental
scorer that consumes one token occurrence at a time, so the buzzer can
checkpoint scores at every sentence boundary of a growing draft in a single
pass over the text instead of re-querying each prefix from scratch.
"""

from __future__ import annotations

import hashlib
import json
import math
import zlib
from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .corpus import QuestionSet, normalize_answer, tokenize
from .errors import (
    EmptyCorpus,
    EmptyScores,
    MalformedFile,
    UnknownAnswer,
    WrongGrouping,
)

_CACHE_VERSION = 1

# Confidence uses at most this many top scores as its denominator.
CONFIDENCE_POOL = 10


class Grouping(str, Enum):
    BY_ANSWER = "answer"
    BY_QUESTION = "question"


@dataclass(frozen=True)
class Guess:
    answer: str
    score: float
    confidence: float


@dataclass(frozen=True)
class EvidenceSpan:
    start: int
    end: int
    term: str
    contribution: float


class TfIdfIndex:
    """Inverted index over either answer-grouped or per-question documents."""

    def __init__(
        self,
        doc_ids: list[str],
        term_postings: dict[str, tuple[np.ndarray, np.ndarray]],
        doc_norms: np.ndarray,
        grouping: Grouping,
        corpus_hash: str,
    ) -> None:
        self.doc_ids = doc_ids
        self.n_docs = len(doc_ids)
        self.grouping = grouping
        self.corpus_hash = corpus_hash
        self.doc_norms = doc_norms
        # term -> (ordinals asc int64, raw weights 1+ln(tf) float64)
        self._postings = term_postings
        self.df = {term: int(len(p[0])) for term, p in term_postings.items()}
        self._idf = {
            term: math.log(self.n_docs / df) for term, df in self.df.items()
        }
        # ltc norms for symmetric cosine (similar-questions path).
        ltc_sq = np.zeros(self.n_docs, dtype=np.float64)
        for term, (ords, weights) in term_postings.items():
            idf = self._idf[term]
            if idf != 0.0:
                np.add.at(ltc_sq, ords, (weights * idf) ** 2)
        self._ltc_norms = np.sqrt(ltc_sq)

    # -- contract surface -------------------------------------------------

    def postings(self, term: str) -> list[tuple[int, float]]:
        """Posting list of a term as (doc ordinal, raw document weight)."""
        ords, weights = self._postings.get(term, (np.empty(0, np.int64), np.empty(0)))
        return [(int(o), float(w)) for o, w in zip(ords, weights)]

    def idf(self, term: str) -> float:
        return self._idf.get(term, 0.0)

    def vocabulary_size(self) -> int:
        return len(self._postings)

    def doc_weight(self, term: str, ordinal: int) -> float:
        """Raw (un-normalized) weight of a term in one document, 0 if absent."""
        entry = self._postings.get(term)
        if entry is None:
            return 0.0
        ords, weights = entry
        pos = bisect_left(ords, ordinal)
        if pos < len(ords) and ords[pos] == ordinal:
            return float(weights[pos])
        return 0.0

    def ordinal_of(self, doc_id: str) -> int:
        try:
            return self._doc_index[doc_id]
        except AttributeError:
            self._doc_index = {d: i for i, d in enumerate(self.doc_ids)}
            return self._doc_index[doc_id]

    def scorer(self) -> "IncrementalScorer":
        return IncrementalScorer(self)


class IncrementalScorer:
    """Streaming ltc x lnc scorer over a growing token sequence.

    Feed token occurrences in draft order; ``snapshot(k)`` flushes pending
    term-frequency updates and returns the current ranked guesses. Feeding
    more tokens afterwards continues the same accumulation, which is what
    makes per-sentence buzz checkpoints a single pass over the draft.
    """

    def __init__(self, ix: TfIdfIndex) -> None:
        self._ix = ix
        self._tf: Counter[str] = Counter()
        self._pending: Counter[str] = Counter()
        self._scores = np.zeros(ix.n_docs, dtype=np.float64)
        self._touched = np.zeros(ix.n_docs, dtype=bool)

    def feed(self, term: str) -> None:
        if term and term in self._ix._postings:
            self._pending[term] += 1

    def feed_text(self, text: str) -> None:
        for token in tokenize(text):
            self.feed(token.normalized)

    def _flush(self) -> None:
        if not self._pending:
            return
        for term, extra in self._pending.items():
            old_tf = self._tf[term]
            new_tf = old_tf + extra
            self._tf[term] = new_tf
            idf = self._ix._idf[term]
            old_w = 0.0 if old_tf == 0 else (1.0 + math.log(old_tf)) * idf
            new_w = (1.0 + math.log(new_tf)) * idf
            ords, weights = self._ix._postings[term]
            if old_tf == 0:
                self._touched[ords] = True
            delta = new_w - old_w
            if delta != 0.0:
                self._scores[ords] += delta * weights
        self._pending.clear()

    def query_weights(self) -> dict[str, float]:
        """Current ltc query weight per term (known terms only)."""
        self._flush()
        return {
            term: (1.0 + math.log(tf)) * self._ix._idf[term]
            for term, tf in self._tf.items()
        }

    def query_norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.query_weights().values()))

    def snapshot(self, k: int) -> list[Guess]:
        """Top-k candidates by cosine score, ties broken by document id.

        Candidates are the documents sharing at least one indexed query term;
        a candidate whose score is zero (all shared terms have zero idf) is
        still ranked.
        """
        self._flush()
        ix = self._ix
        cand = np.flatnonzero(self._touched)
        if cand.size == 0:
            return []
        scores = self._scores[cand] / ix.doc_norms[cand]
        order = _rank_top_k(scores, cand, ix.doc_ids, k)
        ranked_scores = [float(self._scores[o] / ix.doc_norms[o]) for o in order]
        pool = sum(ranked_scores[:CONFIDENCE_POOL])
        return [
            Guess(
                answer=ix.doc_ids[o],
                score=s,
                confidence=(s / pool) if pool > 0.0 else 0.0,
            )
            for o, s in zip(order, ranked_scores)
        ]


def _rank_top_k(
    scores: np.ndarray, ordinals: np.ndarray, doc_ids: list[str], k: int
) -> list[int]:
    """Ordinals of the top-k scores, descending, ties lexicographic by id."""
    n = scores.size
    k = min(k, n)
    if k <= 0:
        return []
    if n > 256 and k < n // 2:
        kth = np.partition(scores, n - k)[n - k]
        above = ordinals[scores > kth]
        definite = sorted(
            (int(o) for o in above),
            key=lambda o: (-float(scores[np.searchsorted(ordinals, o)]), doc_ids[o]),
        )
        border = sorted(
            (int(o) for o in ordinals[scores == kth]), key=lambda o: doc_ids[o]
        )
        return (definite + border)[:k]
    order = sorted(
        range(n), key=lambda i: (-float(scores[i]), doc_ids[int(ordinals[i])])
    )
    return [int(ordinals[i]) for i in order[:k]]


def _doc_token_counts(texts: list[str]) -> Counter[str]:
    counts: Counter[str] = Counter()
    for text in texts:
        for token in tokenize(text):
            if token.normalized:
                counts[token.normalized] += 1
    return counts


def corpus_content_hash(qs: QuestionSet) -> str:
    digest = hashlib.sha256()
    for q in qs:
        digest.update(q.id.encode())
        digest.update(b"\x00")
        digest.update(q.text.encode())
        digest.update(b"\x00")
        digest.update(q.answer.encode())
        digest.update(b"\x01")
    return digest.hexdigest()


def build_index(qs: QuestionSet, grouping: Grouping) -> TfIdfIndex:
    """Build an inverted index from a question set.

    ByAnswer concatenates all questions sharing a normalized answer into one
    document identified by the first-seen answer string; ByQuestion indexes
    each question under its id. Deterministic given input order.
    """
    if len(qs) == 0:
        raise EmptyCorpus("cannot index an empty question set")

    doc_ids: list[str] = []
    doc_texts: list[list[str]] = []
    if grouping is Grouping.BY_ANSWER:
        by_key: dict[str, int] = {}
        for q in qs:
            key = normalize_answer(q.answer)
            if key not in by_key:
                by_key[key] = len(doc_ids)
                doc_ids.append(q.answer)
                doc_texts.append([])
            doc_texts[by_key[key]].append(q.text)
    else:
        for q in qs:
            doc_ids.append(q.id)
            doc_texts.append([q.text])

    n_docs = len(doc_ids)
    postings_accum: dict[str, tuple[list[int], list[float]]] = {}
    norms = np.zeros(n_docs, dtype=np.float64)
    for ordinal, texts in enumerate(doc_texts):
        counts = _doc_token_counts(texts)
        sq = 0.0
        for term in counts:
            w = 1.0 + math.log(counts[term])
            sq += w * w
            slot = postings_accum.setdefault(term, ([], []))
            slot[0].append(ordinal)
            slot[1].append(w)
        norms[ordinal] = math.sqrt(sq)

    term_postings = {
        term: (np.asarray(ords, dtype=np.int64), np.asarray(ws, dtype=np.float64))
        for term, (ords, ws) in postings_accum.items()
    }
    return TfIdfIndex(
        doc_ids=doc_ids,
        term_postings=term_postings,
        doc_norms=norms,
        grouping=grouping,
        corpus_hash=corpus_content_hash(qs),
    )


def query(ix: TfIdfIndex, text: str, k: int) -> list[Guess]:
    """Top-k guesses for a free-text query. Empty or all-unknown text -> []."""
    if k < 1:
        raise ValueError("k must be >= 1")
    scorer = ix.scorer()
    scorer.feed_text(text)
    return scorer.snapshot(k)


def confidence(scores: list[float]) -> float:
    """Share of the top score within the top-10 score mass; 0 on zero mass."""
    if not scores:
        raise EmptyScores("confidence needs at least one score")
    pool = sum(scores[:CONFIDENCE_POOL])
    if pool <= 0.0:
        return 0.0
    return scores[0] / pool


def term_contributions(ix: TfIdfIndex, text: str, answer: str) -> dict[str, float]:
    """Per-term score contribution of a query against one document.

    Contributions over all query terms sum to that document's query score.
    """
    if answer not in ix.doc_ids:
        raise UnknownAnswer(f"unknown document id {answer!r}")
    ordinal = ix.ordinal_of(answer)
    norm = float(ix.doc_norms[ordinal])
    if norm == 0.0:
        return {}
    tf: Counter[str] = Counter(
        t.normalized for t in tokenize(text) if t.normalized
    )
    out: dict[str, float] = {}
    for term, count in tf.items():
        if ix.df.get(term, 0) == 0:
            continue
        w_d = ix.doc_weight(term, ordinal)
        if w_d == 0.0:
            continue
        w_q = (1.0 + math.log(count)) * ix.idf(term)
        out[term] = w_q * w_d / norm
    return out


def evidence(ix: TfIdfIndex, text: str, answer: str, top_n: int) -> list[EvidenceSpan]:
    """Spans of the query text that drive its score against one document.

    The top_n highest-contribution terms are mapped back to every occurrence
    in the text; flagged tokens separated by at most one unflagged token merge
    into a single phrase-level span whose contribution is the sum over its
    flagged members.
    """
    contributions = term_contributions(ix, text, answer)
    if not contributions or top_n < 1:
        return []
    chosen = sorted(contributions, key=lambda t: (-contributions[t], t))[:top_n]
    chosen_set = set(chosen)

    tokens = tokenize(text)
    flagged = [i for i, t in enumerate(tokens) if t.normalized in chosen_set]
    if not flagged:
        return []

    spans: list[EvidenceSpan] = []
    group = [flagged[0]]
    for i in flagged[1:]:
        if i - group[-1] <= 2:  # gap of at most one unflagged token
            group.append(i)
        else:
            spans.append(_merge_group(tokens, group, contributions))
            group = [i]
    spans.append(_merge_group(tokens, group, contributions))
    spans.sort(key=lambda s: (-s.contribution, s.start))
    return spans


def _merge_group(tokens, group: list[int], contributions: dict[str, float]) -> EvidenceSpan:
    members = [tokens[i] for i in group]
    return EvidenceSpan(
        start=members[0].start,
        end=members[-1].end,
        term=" ".join(t.normalized for t in members),
        contribution=sum(contributions.get(t.normalized, 0.0) for t in members),
    )


def similar_questions(ix: TfIdfIndex, text: str, k: int) -> list[tuple[str, float]]:
    """Nearest indexed questions by symmetric tf-idf cosine, in [0, 1].

    Both sides carry ltc weights and both norms divide the dot product, so an
    exact duplicate of an indexed question scores 1.0 within 1e-9.
    """
    if ix.grouping is not Grouping.BY_QUESTION:
        raise WrongGrouping("similar_questions requires a ByQuestion index")
    if k < 1:
        raise ValueError("k must be >= 1")
    tf: Counter[str] = Counter(
        t.normalized for t in tokenize(text) if t.normalized
    )
    known = [t for t in tf if t in ix._postings]
    if not known:
        return []
    q_weights = {t: (1.0 + math.log(tf[t])) * ix._idf[t] for t in known}
    q_norm = math.sqrt(sum(w * w for w in q_weights.values()))
    if q_norm == 0.0:
        return []

    scores = np.zeros(ix.n_docs, dtype=np.float64)
    touched = np.zeros(ix.n_docs, dtype=bool)
    for term in known:
        w_q = q_weights[term]
        if w_q == 0.0:
            continue
        ords, weights = ix._postings[term]
        scores[ords] += w_q * (weights * ix._idf[term])
        touched[ords] = True
    cand = np.flatnonzero(touched)
    if cand.size == 0:
        return []
    denom = ix._ltc_norms[cand] * q_norm
    sims = np.divide(
        scores[cand], denom, out=np.zeros_like(denom), where=denom > 0.0
    )
    order = _rank_top_k(sims, cand, ix.doc_ids, k)
    cand_pos = {int(o): i for i, o in enumerate(cand)}
    return [(ix.doc_ids[o], float(sims[cand_pos[o]])) for o in order]


# -- on-disk cache ---------------------------------------------------------


def save_index(ix: TfIdfIndex, path: str | Path) -> None:
    """Write a versioned, byte-reproducible index cache."""
    payload = {
        "version": _CACHE_VERSION,
        "grouping": ix.grouping.value,
        "corpus_sha256": ix.corpus_hash,
        "doc_ids": ix.doc_ids,
        "doc_norms": [float(x) for x in ix.doc_norms],
        "postings": {
            term: [[int(o), float(w)] for o, w in zip(ords, weights)]
            for term, (ords, weights) in sorted(ix._postings.items())
        },
    }
    blob = zlib.compress(
        json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8"),
        level=6,
    )
    Path(path).write_bytes(blob)


def load_index(path: str | Path) -> TfIdfIndex:
    path = Path(path)
    try:
        payload = json.loads(zlib.decompress(path.read_bytes()).decode("utf-8"))
    except (OSError, zlib.error, json.JSONDecodeError) as exc:
        raise MalformedFile(f"{path}: not a readable index cache ({exc})") from exc
    if payload.get("version") != _CACHE_VERSION:
        raise MalformedFile(f"{path}: unsupported cache version")
    term_postings = {
        term: (
            np.asarray([p[0] for p in plist], dtype=np.int64),
            np.asarray([p[1] for p in plist], dtype=np.float64),
        )
        for term, plist in payload["postings"].items()
    }
    return TfIdfIndex(
        doc_ids=list(payload["doc_ids"]),
        term_postings=term_postings,
        doc_norms=np.asarray(payload["doc_norms"], dtype=np.float64),
        grouping=Grouping(payload["grouping"]),
        corpus_hash=payload["corpus_sha256"],
    )
