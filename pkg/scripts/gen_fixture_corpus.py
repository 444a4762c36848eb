#!/usr/bin/env python3
"""Regenerate data/fixture_corpus.json.

The fixture corpus is the ten demo tossups plus a deterministic synthetic
distractor set: 270 high-school and 270 college questions with a controlled
spread of country mentions. The file is committed; rerun this script only
when the recipe changes.

Usage: python scripts/gen_fixture_corpus.py
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from quizwright.annotators.countries import detect_countries  # noqa: E402
from quizwright.corpus import load_country_lexicon, tokenize  # noqa: E402

SEED = 20240817

HS_TOPICS = """river mountain president battle kingdom empire planet animal
forest painter soldier teacher village harvest bridge castle library temple
market festival weather thunder valley garden captain sailor treasure wagon
farmer doctor window winter summer letter speech crown sword shield horse
song dance story poem hero journey island harbor desert jungle meadow""".split()

COLLEGE_TOPICS = """epistemology hermeneutics isomorphism stochastic paradigm
dialectic phenomenology ontological teleological positivism structuralism
covariance eigenvalue manifold homomorphism entropy enthalpy catalysis
chirality tautomer zwitterion allotrope annealing diffraction perturbation
renormalization asymptotic heuristic axiomatic combinatorial monotonic
holomorphic adjoint functor topology lattice spectral operadic cohomology
syllogism exegesis palimpsest intertextual metonymy synecdoche apophatic""".split()

SHARED_VERBS = """described examined studied painted composed defended
founded conquered measured predicted revealed discovered invented explored
recorded translated collected observed surveyed narrated chronicled""".split()

NAMES = """Alvarez Whitfield Okafor Lindqvist Barros Kovacs Ibarra Takeda
Novak Oyelaran Marchetti Sorensen Delacroix Vasquez Petrov Lindgren Moreau
Castellanos Brennan Ashworth Holloway Pemberton Winslow Fairbanks""".split()

GIVEAWAY_NOUNS = """treaty doctrine theorem compound dynasty uprising ballad
fresco symphony expedition chronicle reaction constant archive manifesto
codex pact accord formula colony observatory monument tribunal""".split()

CATEGORIES = [
    ("Science", ["Physics", "Chemistry", "Biology", None]),
    ("History", ["European History", "World History", None]),
    ("Literature", ["Poetry", "Novels", None]),
    ("Fine Arts", ["Painting", "Music", None]),
    ("Geography", [None]),
    ("Mythology", [None]),
]

# Synthetic mention counts per country; the demo questions add Japan +1,
# Paraguay +1, and Turkey +1 on top of these.
MENTION_PLAN = {
    "Paraguay": 4, "Suriname": 0, "Bolivia": 2, "Guyana": 3, "Chile": 3,
    "Peru": 4, "Ecuador": 4, "Uruguay": 5, "Venezuela": 5, "Colombia": 6,
    "Argentina": 6, "Brazil": 7,
    "Mali": 1, "Burkina Faso": 1, "Senegal": 2, "Ghana": 3, "Benin": 0,
    "Togo": 1, "Niger": 2, "Nigeria": 4, "Guinea": 2, "Ivory Coast": 1,
    "Liberia": 2, "Sierra Leone": 1, "Gambia": 0,
    "Oman": 1, "Yemen": 1, "Qatar": 2, "Bahrain": 0, "Kuwait": 1,
    "Jordan": 3, "Lebanon": 2, "Iraq": 3, "Iran": 4, "Saudi Arabia": 2,
    "United Arab Emirates": 1,
    "Japan": 3, "China": 5, "Mongolia": 1, "South Korea": 2,
    "North Korea": 1, "Taiwan": 1,
    "Turkey": 2, "Georgia": 1, "Armenia": 1, "Azerbaijan": 1, "Cyprus": 0,
    "France": 5, "Germany": 4, "Portugal": 2, "Spain": 3, "Italy": 4,
    "Austria": 2, "Hungary": 2, "Poland": 3, "Norway": 1, "Finland": 1,
    "Estonia": 0, "Latvia": 1, "Lithuania": 1,
    "Kenya": 3, "Tanzania": 2, "Uganda": 2, "Rwanda": 1, "Burundi": 0,
    "Ethiopia": 3, "Somalia": 1, "Madagascar": 2,
    "Canada": 4, "Mexico": 3, "Guatemala": 1, "Honduras": 1, "Nicaragua": 1,
    "Panama": 2, "Cuba": 2, "Haiti": 1, "Jamaica": 1, "Belize": 0,
}

N_PER_CLASS = 270
SHARED_ANSWER_PAIRS = 12


def sentence(rng: random.Random, pool: list[str], mention: str | None = None) -> str:
    name = rng.choice(NAMES)
    verb = rng.choice(SHARED_VERBS)
    a, b, c = rng.choice(pool), rng.choice(pool), rng.choice(pool)
    forms = [
        f"The scholar {name} {verb} the {a} of the {b} near the great {c}",
        f"In one account, {name} {verb} a {a} and praised the {b} of every {c}",
        f"This subject was linked to the {a} when {name} {verb} the {b} and the {c}",
        f"Historians note that the {a} and the {b} were {verb} by {name}",
    ]
    text = rng.choice(forms)
    if mention is not None:
        text += f", a journey remembered across {mention} for generations"
    return text + "."


def make_question(
    rng: random.Random,
    qid: str,
    label: str,
    answer: str,
    mentions: list[str],
) -> dict:
    pool = HS_TOPICS if label == "High School" else COLLEGE_TOPICS
    body = []
    n_sentences = rng.randint(3, 4)
    slots = list(mentions) + [None] * (n_sentences - len(mentions))
    rng.shuffle(slots)
    for slot in slots:
        body.append(sentence(rng, pool, slot))
    noun = rng.choice(GIVEAWAY_NOUNS)
    body.append(f"For ten points, name this {rng.choice(pool)} {noun} called {answer}.")
    category, subs = rng.choice(CATEGORIES)
    record = {
        "id": qid,
        "text": " ".join(body),
        "answer": answer,
        "category": category,
        "difficulty": label,
        "source": "synthetic",
    }
    sub = rng.choice(subs)
    if sub is not None:
        record["subcategory"] = sub
    return record


def main() -> None:
    rng = random.Random(SEED)
    lexicon = load_country_lexicon(ROOT / "data" / "countries.tsv")

    # Guard the templates against accidental country hits.
    template_words = " ".join(
        HS_TOPICS + COLLEGE_TOPICS + SHARED_VERBS + NAMES + GIVEAWAY_NOUNS
    )
    accidental = detect_countries(lexicon, template_words)
    assert not accidental, f"template vocabulary collides with lexicon: {accidental}"

    mention_slots: list[str] = []
    for country, count in sorted(MENTION_PLAN.items()):
        mention_slots.extend([country] * count)
    rng.shuffle(mention_slots)

    triples = [
        f"the {n1} {noun} of {n2}"
        for n1 in NAMES
        for noun in GIVEAWAY_NOUNS
        for n2 in NAMES
        if n1 != n2
    ]
    rng.shuffle(triples)
    answers = triples[: 2 * N_PER_CLASS - SHARED_ANSWER_PAIRS]
    # A dozen consecutive pairs share an answer to exercise answer grouping.
    for i in range(SHARED_ANSWER_PAIRS):
        answers.insert(3 * i + 1, answers[3 * i])

    labels = ["High School"] * N_PER_CLASS + ["college"] * N_PER_CLASS
    rng.shuffle(labels)

    questions = json.loads((ROOT / "data" / "sample_questions.json").read_text())
    pending = list(mention_slots)
    per_question_mentions: list[list[str]] = []
    for i in range(2 * N_PER_CLASS):
        grabbed: list[str] = []
        while pending and len(grabbed) < 2 and rng.random() < 0.35:
            grabbed.append(pending.pop())
        per_question_mentions.append(grabbed)
    # Anything left over lands in the final questions one at a time.
    i = 0
    while pending:
        per_question_mentions[i % (2 * N_PER_CLASS)].append(pending.pop())
        i += 1

    for i in range(2 * N_PER_CLASS):
        record = make_question(
            rng,
            qid=f"syn-{i:04d}",
            label=labels[i],
            answer=answers[i],
            mentions=per_question_mentions[i],
        )
        found = [m.country for m in detect_countries(lexicon, record["text"])]
        assert sorted(found) == sorted(per_question_mentions[i]), (
            record["id"],
            found,
            per_question_mentions[i],
        )
        questions.append(record)

    out = ROOT / "data" / "fixture_corpus.json"
    out.write_text(json.dumps(questions, ensure_ascii=False, indent=1) + "\n")
    n_hs = sum(1 for q in questions if q.get("difficulty") == "High School")
    n_col = sum(1 for q in questions if q.get("difficulty") == "college")
    total_tokens = sum(len(tokenize(q["text"])) for q in questions)
    print(f"wrote {out}: {len(questions)} questions, {n_hs} HS / {n_col} college, "
          f"{total_tokens} tokens")


if __name__ == "__main__":
    main()
