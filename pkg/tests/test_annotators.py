from __future__ import annotations

import math

import numpy as np
import pytest

from quizwright.annotators import (
    build_representation_table,
    classify_difficulty,
    detect_countries,
    flag_hard_words,
    recommend_underrepresented,
    train_difficulty,
    train_pronunciation_model,
)
from quizwright.annotators.difficulty import (
    DifficultyClassifier,
    TrainingGrain,
    classify_sentences,
    logistic_gradient,
    logistic_loss,
)
from quizwright.corpus import (
    DifficultyLabel,
    Question,
    QuestionSet,
    tokenize,
)
from quizwright.errors import EmptyCorpus, InsufficientLabels

from oracles import char_scan_countries


def qset(*texts: str, labels: list[str] | None = None) -> QuestionSet:
    questions = []
    for i, text in enumerate(texts):
        label = DifficultyLabel.UNLABELED
        if labels is not None:
            label = DifficultyLabel(labels[i])
        questions.append(
            Question(
                id=f"t{i}", text=text, answer=f"answer {i}", difficulty_label=label
            )
        )
    return QuestionSet(tuple(questions))


class TestPronunciationModel:
    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            train_pronunciation_model(qset("..."))

    def test_degenerate_corpus_prefers_seen_word(self):
        model = train_pronunciation_model(qset("aaa"))
        assert model.surprisal("aaa") < model.surprisal("xyz")
        assert model.surprisal("aaa") < model.surprisal("aab")

    def test_quantile_flag_count_matches_brute_force(self, synthetic_only):
        model = train_pronunciation_model(synthetic_only, quantile=0.95)
        vocab = list(model.vocab_freq)
        surprisals = {w: model.surprisal(w) for w in vocab}
        at_or_above = sum(
            1 for w in vocab if surprisals[w] >= model.flag_threshold
        )
        assert at_or_above == math.ceil(0.05 * len(vocab))

    def test_quantile_one_flags_no_trained_word(self, synthetic_only):
        model = train_pronunciation_model(synthetic_only, quantile=1.0)
        assert math.isfinite(model.flag_threshold)
        for word in model.vocab_freq:
            assert model.surprisal(word) < model.flag_threshold

    def test_function_words_not_flagged(self, synthetic_only):
        model = train_pronunciation_model(synthetic_only)
        assert model.vocab_freq["the"] >= model.min_freq
        assert model.vocab_freq["and"] >= model.min_freq
        assert model.vocab_freq["of"] >= model.min_freq
        assert flag_hard_words(model, "the and of") == []

    def test_rare_long_word_flagged(self, synthetic_only):
        model = train_pronunciation_model(synthetic_only)
        assert "ouagadougou" not in model.vocab_freq
        flagged = flag_hard_words(model, "the capital is Ouagadougou")
        assert any(tok.surface == "Ouagadougou" for tok, _ in flagged)

    def test_empty_text(self, synthetic_only):
        model = train_pronunciation_model(synthetic_only)
        assert flag_hard_words(model, "") == []

    def test_short_alphabetic_words_exempt(self, synthetic_only):
        model = train_pronunciation_model(synthetic_only, quantile=0.0)
        # quantile 0 puts the threshold at the minimum surprisal, so every
        # long word flags; three-letter alphabetic words still never do.
        flagged = flag_hard_words(model, "foe par qux")
        assert flagged == []

    def test_threshold_monotonicity(self, synthetic_only):
        low = train_pronunciation_model(synthetic_only, quantile=0.80)
        high = train_pronunciation_model(synthetic_only, quantile=0.95)
        assert high.flag_threshold >= low.flag_threshold
        probe = "This cruor sphinx word zyzzyva parade"
        low_hits = {
            t.surface
            for t, s in flag_hard_words(low, probe)
            if s >= low.flag_threshold
        }
        high_hits = {
            t.surface
            for t, s in flag_hard_words(high, probe)
            if s >= high.flag_threshold
        }
        assert high_hits <= low_hits

    def test_context_probabilities_sum_to_one(self, synthetic_only):
        model = train_pronunciation_model(synthetic_only)
        contexts = list(model.context_counts)[:20] + ["@#"]  # unseen context too
        for ctx in contexts:
            total = sum(
                math.exp(model.logprob(ctx, ch)) for ch in model.alphabet
            )
            assert total == pytest.approx(1.0, abs=1e-6)

    def test_deterministic(self, synthetic_only):
        a = train_pronunciation_model(synthetic_only)
        b = train_pronunciation_model(synthetic_only)
        assert a.flag_threshold == b.flag_threshold
        assert a.trigram_counts == b.trigram_counts


class TestDetectCountries:
    def test_roman_is_not_oman(self, country_lexicon):
        assert detect_countries(country_lexicon, "name this Roman historian") == []

    def test_paraguay_true_positive(self, country_lexicon):
        hits = detect_countries(country_lexicon, "received by Jesuits in Paraguay")
        assert [m.country for m in hits] == ["Paraguay"]

    def test_formalized_is_not_mali(self, country_lexicon):
        assert detect_countries(country_lexicon, "formalized the 'Siete Leyes'") == []

    def test_multiword_match(self, country_lexicon):
        text = "name this West African country, Burkina Faso, on the map"
        hits = detect_countries(country_lexicon, text)
        assert [m.country for m in hits] == ["Burkina Faso"]
        m = hits[0]
        assert text[m.start : m.end] == "Burkina Faso"

    def test_mention_offsets_normalize_back(self, country_lexicon, fixture_corpus):
        by_name = {e.name: e for e in country_lexicon.entries}
        for q in fixture_corpus.questions[:120]:
            for m in detect_countries(country_lexicon, q.text):
                matched = tuple(
                    t.normalized for t in tokenize(q.text[m.start : m.end])
                )
                assert matched == by_name[m.country].tokens

    def test_match_requires_token_boundaries(self, country_lexicon):
        assert detect_countries(country_lexicon, "a womanly Omanite") == []
        hits = detect_countries(country_lexicon, "a woman in Oman")
        assert [m.country for m in hits] == ["Oman"]

    def test_longest_match_wins(self, tmp_path):
        from quizwright.corpus import load_country_lexicon

        path = tmp_path / "lex.tsv"
        path.write_text("Guinea\tWest Africa\nGuinea Bissau\tWest Africa\n")
        lex = load_country_lexicon(path)
        hits = detect_countries(lex, "sailed from Guinea Bissau at dawn")
        assert [m.country for m in hits] == ["Guinea Bissau"]

    def test_legacy_char_scan_reproduces_old_false_positives(self, country_lexicon):
        names = [e.name for e in country_lexicon.entries]
        assert "Oman" in char_scan_countries(names, "name this Roman historian")
        assert "Mali" in char_scan_countries(names, "formalized the 'Siete Leyes'")
        assert "Oman" in char_scan_countries(names, "a woman recognizes the song")


class TestRepresentationTable:
    def test_counts_match_brute_force(self, fixture_corpus, country_lexicon):
        table = build_representation_table(fixture_corpus, country_lexicon)
        recount: dict[str, int] = {e.name: 0 for e in country_lexicon.entries}
        for q in fixture_corpus:
            for m in detect_countries(country_lexicon, q.text):
                recount[m.country] += 1
        assert table.counts == recount

    def test_zero_mention_corpus(self, country_lexicon):
        table = build_representation_table(qset("nothing here"), country_lexicon)
        assert all(count == 0 for count in table.counts.values())

    def test_single_mention(self, country_lexicon):
        table = build_representation_table(
            qset("Jesuits in Paraguay speak"), country_lexicon
        )
        assert table.counts["Paraguay"] == 1

    def test_region_orderings_ascending(self, fixture_corpus, country_lexicon):
        table = build_representation_table(fixture_corpus, country_lexicon)
        for region, countries in table.by_region.items():
            counts = [table.counts[c] for c in countries]
            assert counts == sorted(counts)
            assert all(table.region_of[c] == region for c in countries)


class TestRecommend:
    def test_region_of_mention(self, fixture_corpus, country_lexicon):
        table = build_representation_table(fixture_corpus, country_lexicon)
        mentions = detect_countries(country_lexicon, "Jesuits in Paraguay")
        got = recommend_underrepresented(table, mentions, 2)
        # fixture construction pins the two lowest South American counts
        assert got == [("Suriname", 0), ("Bolivia", 2)]

    def test_empty_mentions_globally_rarest(self, fixture_corpus, country_lexicon):
        table = build_representation_table(fixture_corpus, country_lexicon)
        got = recommend_underrepresented(table, [], 1)
        expected = min(table.counts.items(), key=lambda kv: (kv[1], kv[0]))
        assert got == [expected]

    def test_k_larger_than_region(self, fixture_corpus, country_lexicon):
        table = build_representation_table(fixture_corpus, country_lexicon)
        mentions = detect_countries(country_lexicon, "a trip through Oman")
        got = recommend_underrepresented(table, mentions, 999)
        region_size = len(table.by_region["Middle East"])
        assert len(got) == region_size - 1
        assert all(country != "Oman" for country, _ in got)

    def test_output_disjoint_from_mentions_and_sorted(
        self, fixture_corpus, country_lexicon
    ):
        table = build_representation_table(fixture_corpus, country_lexicon)
        text = "From Paraguay to Japan and back to Chile"
        mentions = detect_countries(country_lexicon, text)
        got = recommend_underrepresented(table, mentions, 3)
        mentioned = {m.country for m in mentions}
        assert mentioned.isdisjoint({c for c, _ in got})
        # ascending within each mentioned region's block of three
        for i in range(0, len(got), 3):
            chunk = [count for _, count in got[i : i + 3]]
            assert chunk == sorted(chunk)


SEPARABLE = {
    "texts": [
        "volcano erupts near the village school",
        "the village school studies the volcano",
        "volcano ash falls on the village",
        "epistemology of the manifold branch cohomology",
        "cohomology lectures on manifold epistemology",
        "the manifold seminar covers cohomology",
    ],
    "labels": [
        "high_school",
        "high_school",
        "high_school",
        "college",
        "college",
        "college",
    ],
}


class TestDifficulty:
    def test_separable_toy_reaches_perfect_training_accuracy(self):
        qs = qset(*SEPARABLE["texts"], labels=SEPARABLE["labels"])
        clf = train_difficulty(qs, epochs=600)
        for q in qs:
            label, _ = classify_difficulty(clf, q.text)
            assert label is q.difficulty_label

    def test_single_class_rejected(self):
        qs = qset("a b", "c d", "e f", labels=["college"] * 3)
        with pytest.raises(InsufficientLabels):
            train_difficulty(qs)

    def test_unlabeled_excluded(self):
        qs = qset("a b", "c d", labels=["unlabeled", "unlabeled"])
        with pytest.raises(InsufficientLabels):
            train_difficulty(qs)

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(7)
        X = rng.normal(size=(12, 5))
        y = (rng.random(12) > 0.5).astype(float)
        w = rng.normal(size=5) * 0.3
        b = 0.1
        grad_w, grad_b = logistic_gradient(w, b, X, y)
        eps = 1e-6
        for j in range(5):
            bump = np.zeros(5)
            bump[j] = eps
            numeric = (
                logistic_loss(w + bump, b, X, y) - logistic_loss(w - bump, b, X, y)
            ) / (2 * eps)
            assert abs(numeric - grad_w[j]) <= 1e-5 * max(1.0, abs(numeric))
        numeric_b = (
            logistic_loss(w, b + eps, X, y) - logistic_loss(w, b - eps, X, y)
        ) / (2 * eps)
        assert abs(numeric_b - grad_b) <= 1e-5 * max(1.0, abs(numeric_b))

    def test_fixed_seed_is_byte_identical(self, tmp_path):
        qs = qset(*SEPARABLE["texts"], labels=SEPARABLE["labels"])
        a = train_difficulty(qs, seed=42, epochs=200)
        b = train_difficulty(qs, seed=42, epochs=200)
        pa, pb = tmp_path / "a.json", tmp_path / "b.json"
        a.save(pa)
        b.save(pb)
        assert pa.read_bytes() == pb.read_bytes()

    def test_model_roundtrip(self, tmp_path):
        qs = qset(*SEPARABLE["texts"], labels=SEPARABLE["labels"])
        clf = train_difficulty(qs, epochs=200)
        path = tmp_path / "model.json"
        clf.save(path)
        loaded = DifficultyClassifier.load(path)
        probe = "manifold cohomology epistemology"
        assert classify_difficulty(loaded, probe) == classify_difficulty(clf, probe)

    def test_empty_text_uses_bias(self):
        qs = qset(*SEPARABLE["texts"], labels=SEPARABLE["labels"])
        clf = train_difficulty(qs, epochs=200)
        label, p = classify_difficulty(clf, "")
        assert p == pytest.approx(1.0 / (1.0 + math.exp(-clf.bias)))
        expected = (
            DifficultyLabel.COLLEGE if p >= 0.5 else DifficultyLabel.HIGH_SCHOOL
        )
        assert label is expected

    def test_probabilities_complementary(self):
        qs = qset(*SEPARABLE["texts"], labels=SEPARABLE["labels"])
        clf = train_difficulty(qs, epochs=200)
        _, p = classify_difficulty(clf, "volcano village epistemology")
        assert 0.0 <= p <= 1.0
        assert p + (1.0 - p) == 1.0

    def test_sentence_grain_votes(self):
        texts = [t + "." for t in SEPARABLE["texts"]]
        qs = qset(*texts, labels=SEPARABLE["labels"])
        clf = train_difficulty(qs, grain=TrainingGrain.PER_SENTENCE, epochs=600)
        mixed = "The volcano erupts near the village. Epistemology of the manifold cohomology. Cohomology covers manifold epistemology."
        details = classify_sentences(clf, mixed)
        assert len(details) == 3
        label, _ = classify_difficulty(clf, mixed)
        assert label is DifficultyLabel.COLLEGE  # two college sentences outvote one
