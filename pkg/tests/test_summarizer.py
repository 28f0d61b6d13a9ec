from __future__ import annotations

import math
import random

import numpy as np
import pytest

from scisumm.errors import EmptySection
from scisumm.ingest import SectionDoc, parse_paper
from scisumm.query import QueryProfile
from scisumm.summarizer import (
    CEConfig,
    SectionScorer,
    ce_optimize,
    diversity,
    entity_coverage,
    length_objective,
    query_saliency,
    score_summary,
    summarize_flat,
    summarize_paper,
    text_coverage,
)
from scisumm.textproc import make_sentence

from conftest import make_synthetic_section
from oracle import brute_force_best, ref_breakdown


def _sents(*token_lists):
    return [make_sentence(i, " ".join(toks), frozenset()) for i, toks in enumerate(token_lists)]


def _section(*token_lists):
    return SectionDoc(section_id=0, title="s", text="", sentences=_sents(*token_lists))


def _profile(terms, entities=frozenset()):
    return QueryProfile(terms=terms, entities=frozenset(entities))


class TestQuerySaliency:
    def test_identical_vectors(self):
        sents = _sents(["a", "b"])
        assert query_saliency(sents, _profile({"a": 0.5, "b": 0.5})) == pytest.approx(1.0)

    def test_disjoint(self):
        assert query_saliency(_sents(["a"]), _profile({"z": 1.0})) == 0.0

    def test_hand_cosine(self):
        # summary bag {a: .5, b: .5} vs profile {a: 1.0} -> 1/sqrt(2)
        val = query_saliency(_sents(["a", "b"]), _profile({"a": 1.0}))
        assert val == pytest.approx(0.7071, abs=1e-4)

    def test_empty_cases(self):
        assert query_saliency([], _profile({"a": 1.0})) == 0.0
        assert query_saliency(_sents(["a"]), _profile({})) == 0.0


class TestEntityCoverage:
    def test_identical(self):
        assert entity_coverage({("Dataset", "SQuAD")}, {("Dataset", "SQuAD")}) == 1.0

    def test_jaccard_half(self):
        a = {("Task", "QA"), ("Dataset", "SQuAD")}
        b = {("Dataset", "SQuAD")}
        assert entity_coverage(a, b) == 0.5

    def test_both_empty(self):
        assert entity_coverage(set(), set()) == 1.0

    def test_empty_query_entities_inert(self):
        assert entity_coverage({("Task", "QA")}, set()) == 1.0

    def test_empty_summary_nonempty_query(self):
        assert entity_coverage(set(), {("Task", "QA")}) == 0.0


class TestDiversity:
    def test_uniform_is_one(self):
        assert diversity(_sents(["a", "b", "c", "d"])) == pytest.approx(1.0)

    def test_degenerate_is_zero(self):
        assert diversity(_sents(["a", "a", "a"])) == 0.0
        assert diversity([]) == 0.0

    def test_hand_entropy(self):
        # bag {a: .75, b: .25}: H = 0.8113 bits
        assert diversity(_sents(["a", "a", "a", "b"])) == pytest.approx(0.8113, abs=1e-4)


class TestTextCoverage:
    def test_whole_section(self):
        sec = _section(["a", "b", "c"], ["c", "d"])
        assert text_coverage(sec.sentences, sec) == pytest.approx(1.0)

    def test_disjoint_bigrams(self):
        sec = _section(["a", "b"], ["x", "y"])
        assert text_coverage([sec.sentences[0]], _section(["p", "q"])) == 0.0

    def test_half_section_matches_oracle(self):
        lists = [["a", "b", "c"], ["b", "c", "d"], ["a", "b", "a"], ["d", "e", "f"]]
        sec = _section(*lists)
        chosen = [sec.sentences[0], sec.sentences[2]]
        from oracle import ref_text_coverage

        expected = ref_text_coverage([lists[0], lists[2]], lists)
        got = text_coverage(chosen, sec)
        assert 0.0 < got < 1.0
        assert got == pytest.approx(expected, abs=1e-9)


class TestLengthObjective:
    def test_equal_lengths(self):
        sec = _section(["a", "b"], ["c", "d"])
        assert length_objective(sec.sentences, sec) == 1.0

    def test_longest_only(self):
        sec = _section(["a", "b", "c", "d"], ["e"])
        assert length_objective([sec.sentences[0]], sec) == 1.0

    def test_mean_over_max(self):
        sec = _section(["w"] * 10, ["w"] * 5)
        assert length_objective(sec.sentences, sec) == pytest.approx(0.75)


class TestScoreSummary:
    def test_one_sentence_section(self):
        sec = _section(["a", "b", "c"])
        bd = score_summary([0], sec, _profile({}))
        assert bd.product > 0
        assert bd.product == pytest.approx(
            bd.query_saliency * bd.entity_coverage * bd.diversity * bd.text_coverage * bd.length
        )

    def test_product_leq_min_component(self):
        sec = _section(["a", "b"], ["b", "c"], ["c", "d"])
        bd = score_summary([0, 2], sec, _profile({"a": 1.0}))
        comps = [bd.query_saliency, bd.entity_coverage, bd.diversity, bd.text_coverage, bd.length]
        assert bd.product <= min(comps) + 1e-12

    def test_fixture_matches_independent_recomputation(self):
        lists = [
            ["ranking", "model", "signal"],
            ["model", "signal", "feature", "feature"],
            ["graph", "node", "edge"],
            ["ranking", "signal", "graph", "model"],
            ["edge", "node"],
            ["feature", "ranking", "feature"],
        ]
        sec = _section(*lists)
        ents = [set(), {("Metric", "F1")}, set(), {("Task", "QA")}, set(), set()]
        profile = _profile({"ranking": 0.6, "signal": 0.4}, {("Task", "QA")})
        selected = [1, 3, 5]
        bd = score_summary(selected, sec, profile, sentence_entities=ents)
        ref = ref_breakdown(selected, lists, profile.terms, ents, set(profile.entities))
        assert bd.query_saliency == pytest.approx(ref["query_saliency"], abs=1e-9)
        assert bd.entity_coverage == pytest.approx(ref["entity_coverage"], abs=1e-9)
        assert bd.diversity == pytest.approx(ref["diversity"], abs=1e-9)
        assert bd.text_coverage == pytest.approx(ref["text_coverage"], abs=1e-9)
        assert bd.length == pytest.approx(ref["length"], abs=1e-9)
        assert bd.product == pytest.approx(ref["product"], abs=1e-9)

    def test_invalid_id(self):
        with pytest.raises(IndexError):
            score_summary([5], _section(["a"]), _profile({}))


class TestSectionScorer:
    def test_batch_agrees_with_score_summary(self):
        rng = random.Random(4)
        for trial in range(10):
            sec = make_synthetic_section(rng, rng.randint(4, 10), rng.randint(6, 20))
            n = len(sec.sentences)
            terms = {f"w{j}": rng.random() for j in range(0, 5)}
            z = sum(terms.values())
            profile = _profile({t: v / z for t, v in terms.items()})
            ents = [set() if rng.random() < 0.6 else {("Task", "QA")} for _ in range(n)]
            if rng.random() < 0.5:
                profile = _profile(profile.terms, {("Task", "QA")})
            scorer = SectionScorer(sec, profile, ents)
            sel = np.zeros((8, n), dtype=bool)
            subsets = []
            for r in range(8):
                ids = sorted(rng.sample(range(n), rng.randint(1, n)))
                subsets.append(ids)
                sel[r, ids] = True
            batch = scorer.score_batch(sel)
            for r, ids in enumerate(subsets):
                expected = score_summary(ids, sec, profile, ents).product
                assert batch[r] == pytest.approx(expected, abs=1e-9)

    def test_workers_do_not_change_scores(self):
        rng = random.Random(9)
        sec = make_synthetic_section(rng, 12, 30)
        profile = _profile({"w0": 0.5, "w1": 0.5})
        scorer = SectionScorer(sec, profile)
        sel = np.zeros((50, 12), dtype=bool)
        for r in range(50):
            sel[r, rng.sample(range(12), 4)] = True
        a = scorer.score_batch(sel, workers=1)
        b = scorer.score_batch(sel, workers=4)
        assert np.array_equal(a, b)


def _random_profile(rng, vocab_size):
    k = rng.randint(1, 6)
    terms = {f"w{rng.randrange(vocab_size)}": rng.random() + 0.05 for _ in range(k)}
    z = sum(terms.values())
    return QueryProfile(terms={t: v / z for t, v in terms.items()})


class TestCeOptimize:
    def test_small_section_returned_whole(self):
        sec = _section(*[["a", "b"]] * 5)
        out = ce_optimize(sec, _profile({"a": 1.0}), CEConfig(summary_length=10, seed=1))
        assert out.selected == [0, 1, 2, 3, 4]
        assert out.iterations_used == 0

    def test_empty_section(self):
        with pytest.raises(EmptySection):
            ce_optimize(SectionDoc(0, "s", "", sentences=[]), _profile({}), CEConfig(seed=1))

    def test_fixed_seed_determinism(self):
        rng = random.Random(17)
        sec = make_synthetic_section(rng, 14, 40)
        profile = _random_profile(rng, 40)
        cfg = CEConfig(summary_length=4, seed=123, sample_size=200, max_iterations=20)
        a = ce_optimize(sec, profile, cfg)
        b = ce_optimize(sec, profile, cfg)
        assert a.selected == b.selected
        assert a.breakdown == b.breakdown
        assert a.iterations_used == b.iterations_used

    def test_selected_ids_document_order_and_size(self):
        rng = random.Random(3)
        sec = make_synthetic_section(rng, 12, 30)
        out = ce_optimize(sec, _random_profile(rng, 30), CEConfig(summary_length=3, seed=5))
        assert out.selected == sorted(out.selected)
        assert len(out.selected) == 3

    def test_brute_force_agreement_12_choose_3(self):
        rng = random.Random(77)
        sec = make_synthetic_section(rng, 12, 25)
        profile = _random_profile(rng, 25)
        lists = [s.tokens for s in sec.sentences]
        _, best = brute_force_best(lists, profile.terms, [set()] * 12, set(), 3)
        out = ce_optimize(sec, profile, CEConfig(summary_length=3, seed=11))
        assert out.breakdown.product >= 0.99 * best

    def test_monotone_sanity_single_sentence_optimum(self):
        # one sentence holds every profile term, the others hold none
        lists = [["x1", "x2"], ["target", "term", "hit"], ["x3", "x4"], ["x5", "x6"], ["x7", "x8"]] + [
            [f"y{i}", f"z{i}"] for i in range(5)
        ]
        sec = _section(*lists)
        profile = _profile({"target": 0.4, "term": 0.3, "hit": 0.3})
        oracle_ids, _ = brute_force_best(lists, profile.terms, [set()] * len(lists), set(), 1)
        assert oracle_ids == [1]
        out = ce_optimize(sec, profile, CEConfig(summary_length=1, seed=2))
        assert out.selected == [1]

    def test_components_in_unit_interval_property(self):
        rng = random.Random(31)
        for _ in range(15):
            sec = make_synthetic_section(rng, rng.randint(2, 10), rng.randint(5, 30))
            profile = _random_profile(rng, 30)
            n = len(sec.sentences)
            ids = sorted(rng.sample(range(n), rng.randint(1, n)))
            bd = score_summary(ids, sec, profile)
            for v in (bd.query_saliency, bd.entity_coverage, bd.diversity, bd.text_coverage, bd.length, bd.product):
                assert 0.0 <= v <= 1.0


class TestPaperLevel:
    @pytest.fixture()
    def paper(self, stopwords):
        rec = {
            "id": "pp",
            "title": "paper title",
            "sections": [
                {"title": "Intro", "depth": 1, "text": "Alpha beta gamma. Delta epsilon zeta. Eta theta iota. Kappa lam mu."},
                {"title": "Method", "depth": 1, "text": "Nu xi omicron. Pi rho sigma. Tau upsilon phi."},
                {"title": "Results", "depth": 1, "text": "Chi psi omega. Alpha gamma epsilon."},
            ],
        }
        return parse_paper(rec, stopwords)

    def test_one_summary_per_section_in_order(self, paper):
        out = summarize_paper(paper, _profile({"alpha": 1.0}), CEConfig(summary_length=2, seed=1))
        assert [s.section_id for s in out.per_section] == [0, 1, 2]
        for ss in out.per_section:
            assert len(ss.selected) == min(2, len(paper.sections[ss.section_id].sentences))

    def test_length_cap_min_rule(self, paper):
        out = summarize_paper(paper, _profile({"alpha": 1.0}), CEConfig(summary_length=10, seed=1))
        for ss in out.per_section:
            assert len(ss.selected) == min(10, len(paper.sections[ss.section_id].sentences))

    def test_flat_summary_length_and_subset(self, paper):
        out = summarize_flat(paper, _profile({"alpha": 1.0}), 4, CEConfig(seed=3, summary_length=10))
        total = sum(len(sec.sentences) for sec in paper.sections)
        assert len(out.selected) == 4
        assert all(0 <= i < total for i in out.selected)

    def test_flat_rejects_bad_length(self, paper):
        with pytest.raises(ValueError):
            summarize_flat(paper, _profile({}), 0, CEConfig(seed=1))

    def test_empty_section_skipped(self, stopwords):
        rec = {
            "id": "pe",
            "title": "t",
            "sections": [
                {"title": "A", "depth": 1, "text": "Real sentence here."},
                {"title": "B", "depth": 1, "text": ""},
            ],
        }
        paper = parse_paper(rec, stopwords)
        out = summarize_paper(paper, _profile({}), CEConfig(summary_length=2, seed=1))
        assert out.per_section[1].selected == []
        assert out.per_section[1].breakdown.product == 0.0
