from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from scisumm.config import AppConfig
from scisumm.entities import tag
from scisumm.service import create_app


@pytest.fixture(scope="module")
def client(corpus10):
    from scisumm.summarizer import CEConfig

    cfg = AppConfig(summarizer=CEConfig(summary_length=3, sample_size=120, max_iterations=15))
    return TestClient(create_app(corpus10, cfg))


class TestSearchEndpoint:
    def test_query_returns_ranked_hits(self, client):
        r = client.post("/api/search", json={"query": "model training"})
        assert r.status_code == 200
        body = r.json()
        assert body["results"]
        scores = [h["score"] for h in body["results"]]
        assert scores == sorted(scores, reverse=True)
        assert body["profile_origin"] in ("expanded", "verbose_weighted")

    def test_empty_request_400(self, client):
        assert client.post("/api/search", json={}).status_code == 400

    def test_malformed_filter_422(self, client):
        r = client.post("/api/search", json={"query": "model", "filters": {"year_range": [2000]}})
        assert r.status_code == 422

    def test_entity_filter_without_query(self, client, corpus10):
        r = client.post(
            "/api/search",
            json={"filters": {"entities": [["Metric", "F1"]]}, "k": 100},
        )
        assert r.status_code == 200
        ids = [h["paper_id"] for h in r.json()["results"]]
        expected = sorted(
            pid for pid in corpus10.papers
            if ("Metric", "F1") in {m.entity for m in corpus10.mentions[pid]}
        )
        assert ids == expected

    def test_facets_present(self, client):
        r = client.post("/api/search", json={"query": "model"})
        facets = r.json()["facets"]
        for f in facets:
            assert set(f) == {"kind", "canonical", "count"}


class TestSummarizeEndpoint:
    def test_no_query_uses_keyphrase_surrogate(self, client, corpus10):
        pid = sorted(corpus10.papers)[0]
        r = client.post("/api/summarize", json={"paper_id": pid})
        assert r.status_code == 200
        body = r.json()
        assert body["profile_origin"] == "keyphrase_surrogate"
        assert body["paper_id"] == pid
        assert body["sections"]
        for sec in body["sections"]:
            assert set(sec) >= {"section_id", "title", "sentences", "objective", "entities"}
            assert set(sec["objective"]) == {
                "query_saliency", "entity_coverage", "diversity", "text_coverage", "length", "product",
            }

    def test_unknown_paper_404(self, client):
        assert client.post("/api/summarize", json={"paper_id": "nope"}).status_code == 404

    def test_bad_length_422(self, client, corpus10):
        pid = sorted(corpus10.papers)[0]
        r = client.post("/api/summarize", json={"paper_id": pid, "length": 0})
        assert r.status_code == 422

    def test_repeated_request_byte_identical(self, client, corpus10):
        pid = sorted(corpus10.papers)[1]
        req = {"paper_id": pid, "query": "attention encoder"}
        a = client.post("/api/summarize", json=req).content
        b = client.post("/api/summarize", json=req).content
        assert a == b

    def test_summary_sentences_come_from_paper(self, client, corpus10):
        pid = sorted(corpus10.papers)[2]
        body = client.post("/api/summarize", json={"paper_id": pid}).json()
        paper = corpus10.papers[pid]
        by_id = {sec.section_id: sec for sec in paper.sections}
        for sec in body["sections"]:
            raws = {s.raw for s in by_id[sec["section_id"]].sentences}
            for sent in sec["sentences"]:
                assert sent in raws


class TestPaperEndpoint:
    def test_round_trip(self, client, corpus10):
        pid = sorted(corpus10.papers)[0]
        r = client.get(f"/api/papers/{pid}")
        assert r.status_code == 200
        body = r.json()
        paper = corpus10.papers[pid]
        assert body["title"] == paper.title
        assert len(body["sections"]) == len(paper.sections)
        assert body["figures"] == [{"ref_id": r, "caption": c} for r, c in paper.figures]

    def test_404(self, client):
        assert client.get("/api/papers/absent").status_code == 404

    def test_entities_match_direct_tagger_output(self, client, corpus10, dictionary):
        pid = sorted(corpus10.papers)[3]
        body = client.get(f"/api/papers/{pid}").json()
        paper = corpus10.papers[pid]
        direct = []
        for sec in paper.sections:
            for sent in sec.sentences:
                direct.extend(tag(sent, dictionary, section_id=sec.section_id))
        got = {(e["kind"], e["canonical"], e["section_id"], e["sentence_id"]) for e in body["entities"]}
        expected = {(m.entity[0], m.entity[1], m.section_id, m.sentence_id) for m in direct}
        assert got == expected


class TestReplayability:
    def test_request_sequence_replays_identically(self, client, corpus10):
        pid = sorted(corpus10.papers)[0]
        seq = [
            ("post", "/api/search", {"query": "model"}),
            ("post", "/api/summarize", {"paper_id": pid}),
            ("get", f"/api/papers/{pid}", None),
        ]

        def run():
            out = []
            for method, url, payload in seq:
                if method == "post":
                    out.append(client.post(url, json=payload).content)
                else:
                    out.append(client.get(url).content)
            return out

        assert run() == run()
