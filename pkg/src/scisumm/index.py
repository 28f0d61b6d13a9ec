"""In-process inverted index with BM25 ranking and metadata/entity facets.

The index owns the ingested corpus: papers, their entity mentions, and the
field-level postings. Build is exclusive; after ``freeze()`` the structure
is read-only and safe for concurrent readers. Snapshots are line-oriented
(JSON header + one record per paper) and round-trip stable.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from typing import Iterable

from .entities import EntityKey, EntityMention
from .errors import DuplicateId, EmptyRequest
from .ingest import PaperRecord, paper_to_schema, parse_paper
from .textproc import normalize

FIELDS = ("title", "abstract", "section")
SNAPSHOT_FORMAT = "scisumm-index"
SNAPSHOT_VERSION = 1


@dataclass(frozen=True)
class SearchFilter:
    venue: str | None = None
    year_range: tuple[int, int] | None = None
    author: str | None = None
    entities: frozenset[EntityKey] = frozenset()

    def is_empty(self) -> bool:
        return (
            self.venue is None
            and self.year_range is None
            and self.author is None
            and not self.entities
        )


@dataclass(frozen=True)
class SearchResult:
    paper_id: str
    score: float
    matched_fields: frozenset[str]
    snippet: str


class InvertedIndex:
    """BM25-scored inverted index with per-field postings and facets."""

    def __init__(
        self,
        stopwords: Iterable[str] = frozenset(),
        k1: float = 1.2,
        b: float = 0.75,
        field_weights: dict[str, float] | None = None,
    ):
        self.stopwords = frozenset(stopwords)
        self.k1 = k1
        self.b = b
        self.field_weights = dict(field_weights or {"title": 3.0, "abstract": 2.0, "section": 1.0})
        self.papers: dict[str, PaperRecord] = {}
        self.mentions: dict[str, list[EntityMention]] = {}
        # postings[field][term] -> {paper_id: tf}
        self._postings: dict[str, dict[str, dict[str, int]]] = {f: {} for f in FIELDS}
        self._field_len: dict[str, dict[str, int]] = {f: {} for f in FIELDS}
        self._frozen = False

    # -- build ----------------------------------------------------------------

    def _field_tokens(self, record: PaperRecord) -> dict[str, list[str]]:
        section_tokens: list[str] = []
        for sec in record.sections:
            for sent in sec.sentences:
                section_tokens.extend(sent.tokens)
        return {
            "title": normalize(record.title, self.stopwords),
            "abstract": normalize(record.abstract, self.stopwords),
            "section": section_tokens,
        }

    def index_paper(self, record: PaperRecord, mentions: list[EntityMention] | None = None) -> None:
        if self._frozen:
            raise RuntimeError("index is frozen; build a new snapshot for updates")
        if record.paper_id in self.papers:
            raise DuplicateId(record.paper_id)
        self.papers[record.paper_id] = record
        self.mentions[record.paper_id] = list(mentions or [])
        for fname, tokens in self._field_tokens(record).items():
            self._field_len[fname][record.paper_id] = len(tokens)
            postings = self._postings[fname]
            for tok in tokens:
                bucket = postings.setdefault(tok, {})
                bucket[record.paper_id] = bucket.get(record.paper_id, 0) + 1

    def freeze(self) -> None:
        self._frozen = True

    # -- retrieval ------------------------------------------------------------

    def _entity_keys(self, paper_id: str) -> set[EntityKey]:
        return {m.entity for m in self.mentions.get(paper_id, ())}

    def _matches_filter(self, paper_id: str, flt: SearchFilter) -> bool:
        paper = self.papers[paper_id]
        if flt.venue is not None and paper.venue.lower() != flt.venue.lower():
            return False
        if flt.year_range is not None:
            lo, hi = flt.year_range
            if not (lo <= paper.year <= hi):
                return False
        if flt.author is not None:
            wanted = flt.author.lower()
            if all(a.lower() != wanted for a in paper.authors):
                return False
        if flt.entities and not flt.entities <= self._entity_keys(paper_id):
            return False
        return True

    def _bm25_scores(self, query_tokens: list[str]) -> tuple[dict[str, float], dict[str, set[str]]]:
        n_docs = len(self.papers)
        scores: dict[str, float] = {}
        matched: dict[str, set[str]] = {}
        if n_docs == 0:
            return scores, matched
        terms = [t for t in (tok.lower() for tok in query_tokens) if t not in self.stopwords]
        for fname in FIELDS:
            weight = self.field_weights.get(fname, 1.0)
            lengths = self._field_len[fname]
            total_len = sum(lengths.values())
            avg_len = total_len / n_docs if n_docs else 0.0
            postings = self._postings[fname]
            for term in terms:
                bucket = postings.get(term)
                if not bucket:
                    continue
                df = len(bucket)
                idf = math.log((n_docs - df + 0.5) / (df + 0.5) + 1.0)
                for pid, tf in bucket.items():
                    denom = tf + self.k1 * (
                        1.0 - self.b + self.b * (lengths.get(pid, 0) / avg_len if avg_len else 0.0)
                    )
                    scores[pid] = scores.get(pid, 0.0) + weight * idf * tf * (self.k1 + 1.0) / denom
                    matched.setdefault(pid, set()).add(fname)
        return scores, matched

    def _snippet(self, paper_id: str, terms: set[str]) -> str:
        paper = self.papers[paper_id]
        for sec in paper.sections:
            for sent in sec.sentences:
                if terms & set(sent.tokens):
                    raw = sent.raw
                    return raw if len(raw) <= 200 else raw[:197] + "..."
        return paper.title

    def search(self, query_tokens: list[str], flt: SearchFilter | None = None, k: int = 10) -> list[SearchResult]:
        flt = flt or SearchFilter()
        tokens = [t for t in (tok.lower() for tok in query_tokens) if t not in self.stopwords]
        if not tokens and flt.is_empty():
            raise EmptyRequest("search needs query terms or a non-empty filter")
        if k <= 0:
            return []
        if not tokens:
            # Filter-only request: facet-matching papers ordered by paper_id.
            hits = sorted(pid for pid in self.papers if self._matches_filter(pid, flt))
            return [
                SearchResult(paper_id=pid, score=0.0, matched_fields=frozenset(), snippet=self.papers[pid].title)
                for pid in hits[:k]
            ]
        scores, matched = self._bm25_scores(tokens)
        ranked = sorted(
            (pid for pid in scores if self._matches_filter(pid, flt)),
            key=lambda pid: (-scores[pid], pid),
        )
        term_set = set(tokens)
        return [
            SearchResult(
                paper_id=pid,
                score=scores[pid],
                matched_fields=frozenset(matched.get(pid, ())),
                snippet=self._snippet(pid, term_set),
            )
            for pid in ranked[:k]
        ]

    def top_docs(self, query_tokens: list[str], k: int = 10) -> list[tuple[str, float]]:
        return [(r.paper_id, r.score) for r in self.search(query_tokens, SearchFilter(), k)]

    def facet_counts(self, flt: SearchFilter | None = None) -> dict[EntityKey, int]:
        flt = flt or SearchFilter()
        counts: dict[EntityKey, int] = {}
        for pid in self.papers:
            if not self._matches_filter(pid, flt):
                continue
            for key in self._entity_keys(pid):
                counts[key] = counts.get(key, 0) + 1
        return counts

    # -- term statistics (used by query expansion / keyphrases) ---------------

    def doc_term_counts(self, paper_id: str) -> dict[str, int]:
        """Combined token counts across all fields of one paper."""
        out: dict[str, int] = {}
        for fname in FIELDS:
            for term, bucket in self._postings[fname].items():
                tf = bucket.get(paper_id)
                if tf:
                    out[term] = out.get(term, 0) + tf
        return out

    def document_frequency(self, term: str) -> int:
        pids: set[str] = set()
        for fname in FIELDS:
            pids.update(self._postings[fname].get(term, ()))
        return len(pids)

    @property
    def paper_count(self) -> int:
        return len(self.papers)

    @property
    def term_count(self) -> int:
        terms: set[str] = set()
        for fname in FIELDS:
            terms.update(self._postings[fname])
        return len(terms)

    # -- snapshot -------------------------------------------------------------

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as f:
            header = {
                "format": SNAPSHOT_FORMAT,
                "version": SNAPSHOT_VERSION,
                "paper_count": self.paper_count,
                "term_count": self.term_count,
            }
            f.write(json.dumps(header, sort_keys=True) + "\n")
            for pid in sorted(self.papers):
                row = {
                    "paper": paper_to_schema(self.papers[pid]),
                    "mentions": [
                        {
                            "kind": m.entity[0],
                            "canonical": m.entity[1],
                            "section_id": m.section_id,
                            "sentence_id": m.sentence_id,
                            "surface": m.surface,
                        }
                        for m in self.mentions[pid]
                    ],
                }
                f.write(json.dumps(row, sort_keys=True) + "\n")

    @classmethod
    def load(
        cls,
        path: str,
        stopwords: Iterable[str] = frozenset(),
        k1: float = 1.2,
        b: float = 0.75,
        field_weights: dict[str, float] | None = None,
    ) -> "InvertedIndex":
        idx = cls(stopwords=stopwords, k1=k1, b=b, field_weights=field_weights)
        with open(path, encoding="utf-8") as f:
            header_line = f.readline()
            header = json.loads(header_line)
            if header.get("format") != SNAPSHOT_FORMAT:
                raise ValueError(f"not a {SNAPSHOT_FORMAT} snapshot: {path}")
            if header.get("version") != SNAPSHOT_VERSION:
                raise ValueError(f"unsupported snapshot version {header.get('version')}")
            for line in f:
                if not line.strip():
                    continue
                row = json.loads(line)
                paper = parse_paper(row["paper"], idx.stopwords)
                mentions = [
                    EntityMention(
                        entity=(m["kind"], m["canonical"]),
                        section_id=m["section_id"],
                        sentence_id=m["sentence_id"],
                        surface=m["surface"],
                    )
                    for m in row.get("mentions", [])
                ]
                idx.index_paper(paper, mentions)
        idx.freeze()
        return idx
