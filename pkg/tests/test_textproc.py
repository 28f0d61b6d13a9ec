from __future__ import annotations

import json
import math
import os
import re

import pytest
from hypothesis import given, strategies as st

from scisumm.textproc import (
    NGramBag,
    bag_of_ngrams,
    load_stopwords,
    make_sentence,
    normalize,
    segment_sentences,
    sentences_from_text,
)

DATA = os.path.join(os.path.dirname(__file__), "data")


class TestSegmentSentences:
    def test_empty(self):
        assert segment_sentences("") == []

    def test_two_plain_sentences(self):
        assert segment_sentences("We train a model. It works well.") == [
            "We train a model.",
            "It works well.",
        ]

    def test_abbreviation_guard(self):
        assert len(segment_sentences("See Fig. 3 for results. We conclude.")) == 2

    def test_hand_labeled_fixture(self):
        with open(os.path.join(DATA, "segmentation_fixture.json")) as f:
            cases = json.load(f)
        total = sum(len(c["sentences"]) for c in cases)
        assert total >= 50
        for case in cases:
            assert segment_sentences(case["text"]) == case["sentences"], case["text"]

    def test_reconstruction_modulo_whitespace(self):
        with open(os.path.join(DATA, "segmentation_fixture.json")) as f:
            cases = json.load(f)
        for case in cases:
            joined = " ".join(segment_sentences(case["text"]))
            assert re.sub(r"\s+", " ", joined) == re.sub(r"\s+", " ", case["text"]).strip()

    @given(st.text(max_size=300))
    def test_never_empty_sentence(self, text):
        assert all(s.strip() for s in segment_sentences(text))


class TestNormalize:
    def test_stopword_removal(self):
        assert normalize("The cat sat", {"the"}) == ["cat", "sat"]

    def test_lowercasing(self):
        assert normalize("BERT improves F1", set()) == ["bert", "improves", "f1"]

    def test_empty(self):
        assert normalize("", {"the"}) == []

    def test_hyphen_and_punct_split(self, stopwords):
        assert normalize("state-of-the-art", stopwords) == ["state", "art"]

    @given(st.text(max_size=200))
    def test_idempotent(self, text):
        sw = load_stopwords()
        once = normalize(text, sw)
        assert normalize(" ".join(once), sw) == once

    def test_no_uppercase_no_stopwords(self, stopwords):
        toks = normalize("The QUICK Brown-Fox, obviously, JUMPED over it!", stopwords)
        for t in toks:
            assert t == t.lower()
            assert t not in stopwords


class TestBagOfNgrams:
    def test_unigrams_two_tokens(self):
        assert bag_of_ngrams(["cat", "sat"], 1).entries == {"cat": 0.5, "sat": 0.5}

    def test_single_bigram(self):
        assert bag_of_ngrams(["cat", "sat"], 2).entries == {"cat sat": 1.0}

    def test_relative_frequency(self):
        bag = bag_of_ngrams(["a", "a", "b"], 1)
        assert bag.entries["a"] == pytest.approx(2 / 3)
        assert bag.entries["b"] == pytest.approx(1 / 3)

    def test_too_few_tokens(self):
        assert bag_of_ngrams([], 1).entries == {}
        assert bag_of_ngrams(["one"], 2).entries == {}

    def test_bad_n(self):
        with pytest.raises(ValueError):
            bag_of_ngrams(["a"], 3)

    @given(st.lists(st.sampled_from(["a", "b", "c", "dd"]), max_size=30), st.sampled_from([1, 2]))
    def test_frequencies_sum_to_one_or_empty(self, tokens, n):
        bag = bag_of_ngrams(tokens, n)
        if bag.entries:
            assert math.isclose(sum(bag.entries.values()), 1.0, abs_tol=1e-9)
        for key in bag.entries:
            assert len(key.split(" ")) == n


class TestSentenceUnit:
    def test_make_sentence_fields(self, stopwords):
        s = make_sentence(3, "The encoder attends to the decoder output.", stopwords)
        assert s.id == 3
        assert s.tokens == ["encoder", "attends", "decoder", "output"]
        assert s.token_count == 4
        assert math.isclose(sum(s.unigrams.entries.values()), 1.0, abs_tol=1e-9)

    def test_sentences_from_text_ids(self, stopwords):
        units = sentences_from_text("One sentence here. Another sentence there.", stopwords)
        assert [u.id for u in units] == [0, 1]
