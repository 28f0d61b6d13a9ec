"""HTTP API over a frozen index snapshot: search, papers, summarization.

All endpoints are reads; any request sequence replays to identical
responses. Summaries are seeded from (paper_id, query) so repeated calls
are byte-identical, with a small in-process LRU cache in front.
"""
from __future__ import annotations

import hashlib
from collections import OrderedDict
from dataclasses import replace
from threading import Lock

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .config import AppConfig
from .errors import EmptyRequest
from .index import InvertedIndex, SearchFilter
from .query import build_profile, keyphrase_surrogate
from .summarizer import PaperSummary, summarize_paper
from .textproc import normalize


def derive_seed(paper_id: str, query: str) -> int:
    digest = hashlib.sha256(f"{paper_id}\x00{query}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


class SearchRequest(BaseModel):
    query: str | None = None
    filters: dict | None = None
    k: int = Field(default=10, ge=0)


class SummarizeRequest(BaseModel):
    paper_id: str
    query: str | None = None
    length: int | None = None


def _parse_filter(raw: dict | None) -> SearchFilter:
    if not raw:
        return SearchFilter()
    year_range = None
    if raw.get("year_range") is not None:
        yr = raw["year_range"]
        if not (isinstance(yr, (list, tuple)) and len(yr) == 2):
            raise HTTPException(status_code=422, detail="year_range must be [min, max]")
        year_range = (int(yr[0]), int(yr[1]))
    entities = set()
    for ent in raw.get("entities", []) or []:
        if not (isinstance(ent, (list, tuple)) and len(ent) == 2):
            raise HTTPException(status_code=422, detail="entities must be [kind, canonical] pairs")
        entities.add((str(ent[0]), str(ent[1])))
    return SearchFilter(
        venue=raw.get("venue"),
        year_range=year_range,
        author=raw.get("author"),
        entities=frozenset(entities),
    )


class _LruCache:
    def __init__(self, capacity: int):
        self.capacity = max(capacity, 0)
        self._data: OrderedDict = OrderedDict()
        self._lock = Lock()

    def get(self, key):
        with self._lock:
            if key in self._data:
                self._data.move_to_end(key)
                return self._data[key]
        return None

    def put(self, key, value):
        if self.capacity == 0:
            return
        with self._lock:
            self._data[key] = value
            self._data.move_to_end(key)
            while len(self._data) > self.capacity:
                self._data.popitem(last=False)


def summary_payload(index: InvertedIndex, summary: PaperSummary) -> dict:
    paper = index.papers[summary.paper_id]
    by_id = {sec.section_id: sec for sec in paper.sections}
    mentions = index.mentions.get(summary.paper_id, [])
    sections = []
    for ss in summary.per_section:
        sec = by_id[ss.section_id]
        selected_set = set(ss.selected)
        ents = sorted(
            {m.entity for m in mentions if m.section_id == ss.section_id and m.sentence_id in selected_set}
        )
        sections.append(
            {
                "section_id": ss.section_id,
                "title": sec.title,
                "sentences": [sec.sentences[i].raw for i in ss.selected],
                "objective": ss.breakdown.as_dict(),
                "entities": [{"kind": k, "canonical": c} for k, c in ents],
                "iterations_used": ss.iterations_used,
            }
        )
    return {"paper_id": summary.paper_id, "sections": sections}


def create_app(index: InvertedIndex, config: AppConfig | None = None) -> FastAPI:
    config = config or AppConfig()
    app = FastAPI(title="scisumm", version="0.1.0")
    cache = _LruCache(config.cache_size)

    @app.post("/api/search")
    def search(req: SearchRequest):
        flt = _parse_filter(req.filters)
        query = (req.query or "").strip()
        tokens = normalize(query, index.stopwords)
        if not tokens and flt.is_empty():
            raise HTTPException(status_code=400, detail="empty request: need a query or a filter")
        profile_origin = None
        if tokens:
            profile = build_profile(
                query,
                index,
                entities=flt.entities,
                verbosity_threshold=config.verbosity_threshold,
                top_docs=config.expansion_top_docs,
                profile_size=config.expansion_profile_size,
                fixedpoint_tol=config.fixedpoint_tol,
                fixedpoint_max_iters=config.fixedpoint_max_iters,
            )
            profile_origin = profile.origin
        try:
            results = index.search(tokens, flt, k=req.k)
        except EmptyRequest:
            raise HTTPException(status_code=400, detail="empty request")
        facets = index.facet_counts(flt)
        return {
            "results": [
                {
                    "paper_id": r.paper_id,
                    "score": r.score,
                    "matched_fields": sorted(r.matched_fields),
                    "snippet": r.snippet,
                    "title": index.papers[r.paper_id].title,
                    "venue": index.papers[r.paper_id].venue,
                    "year": index.papers[r.paper_id].year,
                }
                for r in results
            ],
            "facets": [
                {"kind": k, "canonical": c, "count": n} for (k, c), n in sorted(facets.items())
            ],
            "profile_origin": profile_origin,
        }

    @app.post("/api/summarize")
    def summarize(req: SummarizeRequest):
        if req.paper_id not in index.papers:
            raise HTTPException(status_code=404, detail=f"unknown paper '{req.paper_id}'")
        length = req.length if req.length is not None else config.summarizer.summary_length
        if length < 1:
            raise HTTPException(status_code=422, detail="length must be >= 1")
        query = (req.query or "").strip()
        key = (req.paper_id, query, length)
        cached = cache.get(key)
        if cached is not None:
            return cached
        paper = index.papers[req.paper_id]
        if query:
            profile = build_profile(
                query,
                index,
                verbosity_threshold=config.verbosity_threshold,
                top_docs=config.expansion_top_docs,
                profile_size=config.expansion_profile_size,
                fixedpoint_tol=config.fixedpoint_tol,
                fixedpoint_max_iters=config.fixedpoint_max_iters,
            )
        else:
            profile = keyphrase_surrogate(paper, index, count=config.keyphrase_count)
        cfg = replace(
            config.summarizer, summary_length=length, seed=derive_seed(req.paper_id, query)
        )
        summary = summarize_paper(paper, profile, cfg, mentions=index.mentions.get(req.paper_id, []))
        payload = summary_payload(index, summary)
        payload["profile_origin"] = profile.origin
        cache.put(key, payload)
        return payload

    @app.get("/api/papers/{paper_id}")
    def get_paper(paper_id: str):
        paper = index.papers.get(paper_id)
        if paper is None:
            raise HTTPException(status_code=404, detail=f"unknown paper '{paper_id}'")
        mentions = index.mentions.get(paper_id, [])
        return {
            "id": paper.paper_id,
            "title": paper.title,
            "abstract": paper.abstract,
            "authors": paper.authors,
            "venue": paper.venue,
            "year": paper.year,
            "source": paper.source,
            "sections": [
                {
                    "section_id": sec.section_id,
                    "title": sec.title,
                    "text": sec.text,
                    "sentences": [s.raw for s in sec.sentences],
                    "ref_mentions": [{"position": p, "ref_id": r} for p, r in sec.ref_mentions],
                }
                for sec in paper.sections
            ],
            "figures": [{"ref_id": r, "caption": c} for r, c in paper.figures],
            "entities": [
                {
                    "kind": m.entity[0],
                    "canonical": m.entity[1],
                    "section_id": m.section_id,
                    "sentence_id": m.sentence_id,
                    "surface": m.surface,
                }
                for m in mentions
            ],
        }

    return app
