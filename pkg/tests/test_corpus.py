from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from quizwright.corpus import (
    AliasTable,
    DifficultyLabel,
    load_alias_table,
    load_country_lexicon,
    load_question_set,
    normalize_answer,
    normalize_text,
    split_sentences,
    tokenize,
)
from quizwright.errors import CycleDetected, DuplicateId, MalformedFile


class TestTokenize:
    def test_apostrophe_token(self):
        tokens = tokenize("Saturn's rings.")
        assert [(t.surface, t.start, t.end) for t in tokens] == [
            ("Saturn's", 0, 8),
            ("rings", 9, 14),
        ]

    def test_empty(self):
        assert tokenize("") == []

    def test_internal_hyphens_stay_one_token(self):
        tokens = tokenize("Thunder-ten-Tronckh")
        assert len(tokens) == 1
        assert tokens[0].start == 0 and tokens[0].end == 19

    def test_surface_matches_slice(self):
        text = "Carlos Chávez, 1Q84 and the 2014 uprising"
        for tok in tokenize(text):
            assert text[tok.start : tok.end] == tok.surface

    @given(st.text(max_size=200))
    def test_roundtrip_with_gaps(self, text):
        tokens = tokenize(text)
        rebuilt = []
        cursor = 0
        for tok in tokens:
            assert 0 <= tok.start < tok.end <= len(text)
            assert tok.start >= cursor
            rebuilt.append(text[cursor : tok.start])
            rebuilt.append(tok.surface)
            cursor = tok.end
        rebuilt.append(text[cursor:])
        assert "".join(rebuilt) == text

    @given(st.text(max_size=200))
    def test_pure_function(self, text):
        first = tokenize(text)
        second = tokenize(text)
        assert first == second


class TestNormalization:
    def test_diacritic_folding(self):
        assert normalize_text("Chávez") == "chavez"

    def test_phrase(self):
        assert normalize_text("Saturn's rings") == "saturns rings"

    def test_answer_drops_leading_article(self):
        assert normalize_answer("The Tender Land") == "tender land"

    def test_answer_folds_accents(self):
        assert (
            normalize_answer("Antonio López de Santa Anna")
            == "antonio lopez de santa anna"
        )

    def test_answer_identity(self):
        assert normalize_answer("torque") == "torque"

    def test_bare_article_survives(self):
        assert normalize_answer("The") == "the"


class TestSplitSentences:
    def test_lowercase_single_letters_still_split(self):
        spans = split_sentences("A b. C d.")
        assert [(s.start, s.end) for s in spans] == [(0, 4), (5, 9)]

    def test_empty(self):
        assert split_sentences("") == []

    def test_initials_do_not_split(self):
        spans = split_sentences("J. K. Rowling wrote it. Nobody else did.")
        assert len(spans) == 2
        assert spans[0].start == 0

    def test_question_mark_and_bang(self):
        spans = split_sentences("Really? Yes! Fine.")
        assert len(spans) == 3

    def test_sample_question_one_has_five_sentences(self, sample_questions):
        # Hand count: four internal terminator+capital boundaries plus the
        # giveaway sentence.
        q1 = sample_questions.questions[0]
        assert len(split_sentences(q1.text)) == 5

    def test_spans_cover_non_whitespace(self, sample_questions):
        for q in sample_questions:
            spans = split_sentences(q.text)
            covered = set()
            for s in spans:
                covered.update(range(s.start, s.end))
            for i, ch in enumerate(q.text):
                if not ch.isspace():
                    assert i in covered
            assert [s.index for s in spans] == list(range(len(spans)))

    @given(st.text(max_size=300))
    def test_spans_ordered_and_disjoint(self, text):
        spans = split_sentences(text)
        for a, b in zip(spans, spans[1:]):
            assert a.end <= b.start
        for s in spans:
            assert 0 <= s.start < s.end <= len(text)


class TestQuestionSet:
    def test_demo_file_counts(self, sample_questions):
        assert len(sample_questions) == 10
        assert sample_questions.category_counts == {
            "Fine Arts": 1,
            "Geography": 1,
            "Literature": 2,
            "Science": 3,
            "History": 3,
        }

    def test_empty_list(self, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text("[]")
        qs = load_question_set(path)
        assert len(qs) == 0
        assert qs.category_counts == {}

    def test_missing_answer_names_record(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps([
            {"id": "a", "text": "x", "answer": "y"},
            {"id": "b", "text": "x"},
        ]))
        with pytest.raises(MalformedFile) as err:
            load_question_set(path)
        assert "record 1" in str(err.value)

    def test_duplicate_id(self, tmp_path):
        path = tmp_path / "dup.json"
        path.write_text(json.dumps([
            {"id": "a", "text": "x", "answer": "y"},
            {"id": "a", "text": "x2", "answer": "y2"},
        ]))
        with pytest.raises(DuplicateId):
            load_question_set(path)

    def test_not_json(self, tmp_path):
        path = tmp_path / "garbage.json"
        path.write_text("{nope")
        with pytest.raises(MalformedFile):
            load_question_set(path)

    def test_difficulty_parsing(self, tmp_path):
        path = tmp_path / "labels.json"
        path.write_text(json.dumps([
            {"id": "1", "text": "x", "answer": "y", "difficulty": "High School"},
            {"id": "2", "text": "x", "answer": "y", "difficulty": "COLLEGE"},
            {"id": "3", "text": "x", "answer": "y", "difficulty": "varsity"},
            {"id": "4", "text": "x", "answer": "y"},
        ]))
        qs = load_question_set(path)
        labels = [q.difficulty_label for q in qs]
        assert labels == [
            DifficultyLabel.HIGH_SCHOOL,
            DifficultyLabel.COLLEGE,
            DifficultyLabel.UNLABELED,
            DifficultyLabel.UNLABELED,
        ]

    def test_category_counts_sum(self, fixture_corpus):
        with_category = sum(1 for q in fixture_corpus if q.category)
        assert sum(fixture_corpus.category_counts.values()) == with_category


class TestAliasTable:
    def test_redirect_lookup(self, alias_table):
        assert alias_table.resolve("saturns rings") == "Rings of Saturn"
        assert alias_table.resolve("Saturn's rings") == "Rings of Saturn"

    def test_canonical_self_map(self, alias_table):
        assert alias_table.resolve("Rings of Saturn") == "Rings of Saturn"
        for name in alias_table.canonical:
            assert alias_table.resolve(name) == name

    def test_chain_collapses(self, tmp_path):
        path = tmp_path / "chain.tsv"
        path.write_text("A thing\tB thing\nB thing\tC thing\n")
        table = load_alias_table(path)
        assert table.resolve("A thing") == "C thing"
        assert table.resolve("B thing") == "C thing"

    def test_cycle_rejected(self, tmp_path):
        path = tmp_path / "cycle.tsv"
        path.write_text("Aa\tBb\nBb\tAa\n")
        with pytest.raises(CycleDetected):
            load_alias_table(path)

    def test_self_loop_is_fine(self, tmp_path):
        path = tmp_path / "self.tsv"
        path.write_text("Torque\tTorque\n")
        table = load_alias_table(path)
        assert table.resolve("torque") == "Torque"

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("only one column\n")
        with pytest.raises(MalformedFile):
            load_alias_table(path)

    def test_idempotent_reload(self, alias_table, tmp_path):
        out = tmp_path / "closure.tsv"
        alias_table.dump_tsv(out)
        reloaded = load_alias_table(out)
        assert reloaded.alias_to_canonical == alias_table.alias_to_canonical
        assert reloaded.canonical == alias_table.canonical

    def test_no_dangling_aliases(self, alias_table):
        for canonical in alias_table.alias_to_canonical.values():
            assert canonical in alias_table.canonical

    def test_comments_skipped(self, tmp_path):
        path = tmp_path / "c.tsv"
        path.write_text("# header\nX name\tY name\n\n")
        table = load_alias_table(path)
        assert table.resolve("X name") == "Y name"


class TestCountryLexicon:
    def test_multiword_entry(self, country_lexicon):
        entry = next(e for e in country_lexicon.entries if e.name == "Burkina Faso")
        assert entry.tokens == ("burkina", "faso")
        assert entry.region == "West Africa"

    def test_single_word_entry(self, country_lexicon):
        entry = next(e for e in country_lexicon.entries if e.name == "Oman")
        assert entry.tokens == ("oman",)
        assert entry.region == "Middle East"

    def test_empty_file(self, tmp_path):
        path = tmp_path / "none.tsv"
        path.write_text("# nothing here\n")
        lex = load_country_lexicon(path)
        assert len(lex) == 0
        assert lex.regions == set()

    def test_malformed(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("Oman\n")
        with pytest.raises(MalformedFile):
            load_country_lexicon(path)
