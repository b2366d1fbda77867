import csv
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kpgen import textproc
from kpgen.textproc import (
    STOPWORDS,
    analyze,
    block_candidates,
    ngram_candidates,
    normalize_phrase,
    split_sentences,
    stem,
    tokenize,
)

VECTORS_PATH = Path(__file__).resolve().parent.parent / "src/kpgen/data/porter_vectors.tsv"


def surfaces(tokens):
    return [t.surface for t in tokens]


class TestTokenize:
    def test_hyphen_and_period_split(self):
        assert surfaces(tokenize("Graph-based methods.")) == ["Graph", "-", "based", "methods", "."]

    def test_empty(self):
        assert tokenize("") == []

    def test_hyphen_comma_rule(self):
        assert surfaces(tokenize("e-books, library")) == ["e", "-", "books", ",", "library"]

    def test_offsets_point_into_source(self):
        text = "Graph-based  methods."
        for tok in tokenize(text):
            assert text[tok.char_offset : tok.char_offset + len(tok.surface)] == tok.surface

    def test_punct_tokens_are_not_stopwords(self):
        for tok in tokenize("the , a ."):
            if tok.is_punct:
                assert not tok.is_stopword

    def test_stopword_flag(self):
        toks = {t.surface: t for t in tokenize("the cat")}
        assert toks["the"].is_stopword and not toks["cat"].is_stopword

    @given(st.text(max_size=200))
    @settings(max_examples=200)
    def test_reconstruction(self, text):
        tokens = tokenize(text)
        rebuilt = []
        pos = 0
        for tok in tokens:
            rebuilt.append(text[pos : tok.char_offset])
            rebuilt.append(tok.surface)
            pos = tok.char_offset + len(tok.surface)
        rebuilt.append(text[pos:])
        assert "".join(rebuilt) == text
        offsets = [t.char_offset for t in tokens]
        assert offsets == sorted(offsets) and len(set(offsets)) == len(offsets)

    @given(st.text(max_size=200))
    @settings(max_examples=100)
    def test_stem_matches_surface(self, text):
        for tok in tokenize(text):
            assert tok.stem == stem(tok.surface.lower())


class TestSentences:
    def test_two_sentences(self):
        toks = analyze("A b. C d.")
        assert [t.sentence_idx for t in toks] == [0, 0, 0, 1, 1, 1]

    def test_no_terminal(self):
        toks = analyze("one two three")
        assert {t.sentence_idx for t in toks} == {0}

    def test_abbreviation_exceptions(self):
        assert {t.sentence_idx for t in analyze("Dr. Smith runs.")} == {0}
        assert {t.sentence_idx for t in analyze("See Fig. Three here.")} == {0}
        assert {t.sentence_idx for t in analyze("Smith et al. Agree.")} == {0}

    def test_lowercase_continuation(self):
        toks = analyze("approx. values differ")
        assert {t.sentence_idx for t in toks} == {0}

    def test_exclamation_and_question(self):
        toks = analyze("Really! Yes? Sure.")
        assert [t.sentence_idx for t in toks] == [0, 0, 1, 1, 2, 2]


def load_vectors():
    with open(VECTORS_PATH, encoding="utf-8") as f:
        return [r for r in csv.reader(f, delimiter="\t") if not r[0].startswith("#")]


class TestStem:
    def test_reference_vectors(self):
        rows = load_vectors()
        assert len(rows) > 2000
        bad = [(w, expected, stem(w)) for w, expected in rows if stem(w) != expected]
        assert bad == []

    def test_spec_words(self):
        assert stem("networks") == "network"
        assert stem("a") == "a"
        assert stem("summarization") == "summar"

    def test_idempotent_on_test_vocabulary(self):
        for word, _ in load_vectors():
            once = stem(word)
            assert stem(once) == once

    def test_lowercases(self):
        assert stem("Networks") == "network"


class TestNormalizePhrase:
    def test_examples(self):
        assert normalize_phrase("Neural Networks") == "neural network"
        assert normalize_phrase("e-books") == "e book"
        assert normalize_phrase("graph") == "graph"

    def test_possessive_s_drops_out(self):
        assert normalize_phrase("Earth's field") == "earth field"

    @given(
        st.lists(
            st.sampled_from([w for w, _ in load_vectors()[::40]] + ["-", ",", "the"]),
            min_size=1,
            max_size=5,
        )
    )
    @settings(max_examples=300)
    def test_idempotent_on_vocabulary_phrases(self, words):
        phrase = " ".join(words)
        once = normalize_phrase(phrase)
        assert normalize_phrase(once) == once

    @given(st.text(max_size=60))
    @settings(max_examples=200)
    def test_empty_stems_never_emitted(self, phrase):
        assert "  " not in normalize_phrase(phrase)
        assert not normalize_phrase(phrase).endswith(" ")


class TestNgramCandidates:
    def test_enumeration(self):
        cands = ngram_candidates(analyze("keyphrase extraction"), 3)
        assert sorted(c.surface for c in cands) == [
            "extraction",
            "keyphrase",
            "keyphrase extraction",
        ]

    def test_boundary_stopword(self):
        cands = ngram_candidates(analyze("the cat"), 3)
        assert [c.surface for c in cands] == ["cat"]

    def test_interior_stopword_allowed(self):
        cands = ngram_candidates(analyze("state of art"), 3)
        assert "state of art" in {c.surface for c in cands}

    def test_stem_merge(self):
        toks = analyze("topic model here, then topic models")
        cands = {c.normalized: c for c in ngram_candidates(toks, 3)}
        merged = cands["topic model"]
        assert merged.frequency == 2
        assert merged.surface == "topic model"
        assert merged.first_offset == 0
        assert len(merged.offsets) == 2

    def test_does_not_cross_punctuation(self):
        cands = ngram_candidates(analyze("alpha, beta"), 3)
        assert "alpha beta" not in {c.surface for c in cands}

    def test_does_not_cross_sentences(self):
        cands = ngram_candidates(analyze("alpha red. Blue beta"), 3)
        normalized = {c.normalized for c in cands}
        assert "red blue" not in normalized
        assert "alpha red" in normalized and "blue beta" in normalized

    def test_n_max_one_equals_content_stems(self):
        toks = analyze("the quick brown fox jumps over lazy dogs")
        cands = {c.normalized for c in ngram_candidates(toks, 1)}
        expected = {
            t.stem for t in toks if not t.is_punct and not t.is_stopword
        }
        assert cands == expected

    @given(st.text(alphabet=st.sampled_from("abc xyzw. Netwk"), max_size=120))
    @settings(max_examples=100)
    def test_candidates_occur_in_source(self, text):
        toks = analyze(text)
        content = [t.stem for t in toks if not t.is_punct]
        for cand in ngram_candidates(toks, 3):
            n = len(cand.stems)
            assert any(
                tuple(content[i : i + n]) == cand.stems
                for i in range(len(content) - n + 1)
            )


class TestBlockCandidates:
    def test_run_splitting(self):
        cands = block_candidates(analyze("fast graph coloring of large networks"))
        assert sorted(c.surface for c in cands) == ["fast graph coloring", "large networks"]

    def test_all_stopwords(self):
        assert block_candidates(analyze("the of and")) == []

    def test_truncation_to_three(self):
        cands = block_candidates(analyze("alpha beta gamma delta epsilon"))
        assert [c.surface for c in cands] == ["alpha beta gamma"]

    def test_breaks_on_punctuation(self):
        cands = block_candidates(analyze("alpha beta, gamma"))
        assert sorted(c.surface for c in cands) == ["alpha beta", "gamma"]


def test_stopword_list_shape():
    # the classic list has 571 lines, one of which ("would") is a duplicate
    lines = [
        w.strip()
        for w in (VECTORS_PATH.parent / "stopwords_smart.txt").read_text().splitlines()
        if w.strip()
    ]
    assert len(lines) == 571
    assert len(STOPWORDS) == 570
    assert "the" in STOPWORDS and "network" not in STOPWORDS
