"""Word-based country detection and underrepresentation recommendations.

Matching is over normalized token sequences, never raw characters, so "Oman"
cannot fire inside "Roman". Multi-word names must appear as consecutive
tokens. Recommendations surface the least-mentioned countries related (by
region) to what the draft already names.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from ..corpus import CountryLexicon, QuestionSet, tokenize


@dataclass(frozen=True)
class CountryMention:
    country: str
    start: int
    end: int
    region: str


@dataclass
class RepresentationTable:
    counts: dict[str, int]
    by_region: dict[str, list[str]] = field(default_factory=dict)
    region_of: dict[str, str] = field(default_factory=dict)

    def rank_in_region(self, region: str) -> list[tuple[str, int]]:
        return [(c, self.counts[c]) for c in self.by_region.get(region, [])]


def detect_countries(lex: CountryLexicon, text: str) -> list[CountryMention]:
    """Longest-match scan for lexicon countries at token boundaries.

    Overlaps resolve longest-first then leftmost: the scan is greedy left to
    right and consumes every token of a match.
    """
    by_first: dict[str, list] = {}
    for entry in lex.entries:
        by_first.setdefault(entry.tokens[0], []).append(entry)
    for candidates in by_first.values():
        candidates.sort(key=lambda e: (-len(e.tokens), e.name))

    tokens = tokenize(text)
    mentions: list[CountryMention] = []
    i = 0
    while i < len(tokens):
        hit = None
        for entry in by_first.get(tokens[i].normalized, ()):
            span = tokens[i : i + len(entry.tokens)]
            if len(span) == len(entry.tokens) and all(
                tok.normalized == want for tok, want in zip(span, entry.tokens)
            ):
                hit = (entry, span)
                break
        if hit is None:
            i += 1
            continue
        entry, span = hit
        mentions.append(
            CountryMention(
                country=entry.name,
                start=span[0].start,
                end=span[-1].end,
                region=entry.region,
            )
        )
        i += len(entry.tokens)
    return mentions


def build_representation_table(
    qs: QuestionSet, lex: CountryLexicon
) -> RepresentationTable:
    """Count country mentions across the whole corpus.

    Every lexicon country appears in the counts, including zero-mention ones;
    per-region orderings are ascending by count with lexicographic ties.
    """
    counts: Counter[str] = Counter({entry.name: 0 for entry in lex.entries})
    for q in qs:
        for mention in detect_countries(lex, q.text):
            counts[mention.country] += 1

    region_of = {entry.name: entry.region for entry in lex.entries}
    by_region: dict[str, list[str]] = {}
    for entry in sorted(lex.entries, key=lambda e: (counts[e.name], e.name)):
        by_region.setdefault(entry.region, []).append(entry.name)
    return RepresentationTable(
        counts=dict(counts), by_region=by_region, region_of=region_of
    )


def recommend_underrepresented(
    rt: RepresentationTable, mentions: list[CountryMention], k: int
) -> list[tuple[str, int]]:
    """Least-mentioned related countries the draft has not used yet.

    For each region the draft touches, the k lowest-count countries of that
    region outside the draft's mentions; with no mentions at all, the k
    globally lowest-count countries.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    mentioned = {m.country for m in mentions}
    out: list[tuple[str, int]] = []
    if not mentions:
        ranked = sorted(rt.counts.items(), key=lambda kv: (kv[1], kv[0]))
        return ranked[:k]
    seen_regions: list[str] = []
    for mention in mentions:
        if mention.region not in seen_regions:
            seen_regions.append(mention.region)
    for region in seen_regions:
        picked = 0
        for country in rt.by_region.get(region, []):
            if country in mentioned:
                continue
            out.append((country, rt.counts[country]))
            picked += 1
            if picked >= k:
                break
    return out
