"""Paper record parsing, subsection merging, reference detection, dedup.

Input is a newline-delimited file of structured paper objects (one JSON
object per line); PDF extraction happens upstream and is out of scope.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable

from .errors import EmptyPaper, MalformedRecord
from .textproc import SentenceUnit, sentences_from_text

SOURCES = ("arxiv", "acl", "other")

# Figure/table references: "Figure 2", "Fig. 3", "Tables 1 and 2", ...
_REF_RE = re.compile(
    r"\b(figures?|figs?\.?|tables?|tab\.?)\s+(\d+(?:\s*(?:,|and|&)\s*\d+)*)",
    re.IGNORECASE,
)
_NUM_RE = re.compile(r"\d+")


@dataclass
class SectionDoc:
    """One merged top-level section of a paper."""

    section_id: int
    title: str
    text: str
    sentences: list[SentenceUnit] = field(default_factory=list)
    ref_mentions: list[tuple[int, str]] = field(default_factory=list)


@dataclass
class PaperRecord:
    paper_id: str
    title: str
    abstract: str = ""
    authors: list[str] = field(default_factory=list)
    venue: str = ""
    year: int = 0
    source: str = "other"
    sections: list[SectionDoc] = field(default_factory=list)
    figures: list[tuple[str, str]] = field(default_factory=list)
    # Raw (title, depth, text) triples kept so snapshots round-trip the input schema.
    raw_sections: list[tuple[str, int, str]] = field(default_factory=list)


def detect_refs(section_text: str) -> list[tuple[int, str]]:
    """Find figure/table references; ref ids normalized to figure-N / table-N."""
    out: list[tuple[int, str]] = []
    for m in _REF_RE.finditer(section_text):
        kind = "figure" if m.group(1).lower().startswith("f") else "table"
        for num in _NUM_RE.findall(m.group(2)):
            out.append((m.start(), f"{kind}-{int(num)}"))
    return out


def merge_subsections(raw_sections: list[tuple[str, int, str]]) -> list[SectionDoc]:
    """Fold depth>1 sections into the nearest preceding depth-1 section.

    Subsection titles survive as inline paragraph prefixes. A leading
    orphan subsection becomes its own top-level section.
    """
    merged: list[SectionDoc] = []
    for title, depth, text in raw_sections:
        if depth <= 1 or not merged:
            merged.append(SectionDoc(section_id=len(merged), title=title, text=text))
        else:
            parent = merged[-1]
            prefix = f"{title}\n" if title else ""
            joiner = "\n\n" if parent.text else ""
            parent.text = f"{parent.text}{joiner}{prefix}{text}"
    return merged


def _expect(value, types, path: str):
    if not isinstance(value, types):
        raise MalformedRecord(path, f"expected {types}, got {type(value).__name__}")
    return value


def parse_paper(record: dict | str | bytes, stopwords: Iterable[str] = frozenset()) -> PaperRecord:
    """Map one input-schema object onto a PaperRecord.

    Subsections are merged, references detected, and sentences segmented.
    When no section parses, the abstract stands in as the only section.
    """
    if isinstance(record, (str, bytes)):
        try:
            record = json.loads(record)
        except json.JSONDecodeError as e:
            raise MalformedRecord("<line>", str(e)) from e
    if not isinstance(record, dict):
        raise MalformedRecord("<record>", "not an object")

    paper_id = record.get("id")
    if not isinstance(paper_id, str) or not paper_id:
        raise MalformedRecord("id", "required non-empty string")

    title = record.get("title", "")
    raw_secs = record.get("sections", [])
    _expect(raw_secs, list, "sections")
    if not title and not raw_secs:
        raise EmptyPaper(f"record '{paper_id}' has no title and no sections")
    _expect(title, str, "title")

    abstract = _expect(record.get("abstract", ""), str, "abstract")
    authors = _expect(record.get("authors", []), list, "authors")
    for i, a in enumerate(authors):
        _expect(a, str, f"authors[{i}]")
    venue = _expect(record.get("venue", ""), str, "venue")
    year = _expect(record.get("year", 0), int, "year")
    source = _expect(record.get("source", "other"), str, "source")
    if source not in SOURCES:
        raise MalformedRecord("source", f"must be one of {SOURCES}")

    triples: list[tuple[str, int, str]] = []
    for i, sec in enumerate(raw_secs):
        _expect(sec, dict, f"sections[{i}]")
        s_title = _expect(sec.get("title", ""), str, f"sections[{i}].title")
        s_depth = _expect(sec.get("depth", 1), int, f"sections[{i}].depth")
        s_text = _expect(sec.get("text", ""), str, f"sections[{i}].text")
        triples.append((s_title, s_depth, s_text))

    figures: list[tuple[str, str]] = []
    raw_figs = _expect(record.get("figures", []), list, "figures")
    for i, fig in enumerate(raw_figs):
        _expect(fig, dict, f"figures[{i}]")
        figures.append(
            (
                _expect(fig.get("ref_id", ""), str, f"figures[{i}].ref_id"),
                _expect(fig.get("caption", ""), str, f"figures[{i}].caption"),
            )
        )

    sections = merge_subsections(triples)
    if not sections:
        sections = [SectionDoc(section_id=0, title="Abstract", text=abstract)]
    for sec in sections:
        sec.ref_mentions = detect_refs(sec.text)
        sec.sentences = sentences_from_text(sec.text, stopwords)

    return PaperRecord(
        paper_id=paper_id,
        title=title,
        abstract=abstract,
        authors=list(authors),
        venue=venue,
        year=year,
        source=source,
        sections=sections,
        figures=figures,
        raw_sections=triples,
    )


def paper_to_schema(paper: PaperRecord) -> dict:
    """Serialize back to the input schema (round-trips parse_paper)."""
    return {
        "id": paper.paper_id,
        "title": paper.title,
        "abstract": paper.abstract,
        "authors": list(paper.authors),
        "venue": paper.venue,
        "year": paper.year,
        "source": paper.source,
        "sections": [{"title": t, "depth": d, "text": x} for t, d, x in paper.raw_sections],
        "figures": [{"ref_id": r, "caption": c} for r, c in paper.figures],
    }


def _jaccard(a: set, b: set) -> float:
    if not a and not b:
        return 1.0
    union = len(a | b)
    return len(a & b) / union if union else 0.0


def _title_tokens(paper: PaperRecord) -> set[str]:
    return set(t.lower() for t in re.findall(r"[^\W_]+", paper.title))


def _author_names(paper: PaperRecord) -> set[str]:
    return set(a.strip().lower() for a in paper.authors if a.strip())


def dedupe(
    corpus: list[PaperRecord],
    title_threshold: float = 0.9,
    author_threshold: float = 0.5,
) -> list[PaperRecord]:
    """Collapse near-duplicate papers (title/author Jaccard over thresholds).

    Within a duplicate cluster the ACL-sourced copy wins; ties go to the
    lexicographically smallest paper_id. Input order of survivors is kept.
    """
    n = len(corpus)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    titles = [_title_tokens(p) for p in corpus]
    authors = [_author_names(p) for p in corpus]
    for i in range(n):
        for j in range(i + 1, n):
            if (
                _jaccard(titles[i], titles[j]) >= title_threshold
                and _jaccard(authors[i], authors[j]) >= author_threshold
            ):
                parent[find(i)] = find(j)

    clusters: dict[int, list[int]] = {}
    for i in range(n):
        clusters.setdefault(find(i), []).append(i)

    keep: set[int] = set()
    for members in clusters.values():
        winner = min(
            members,
            key=lambda i: (0 if corpus[i].source == "acl" else 1, corpus[i].paper_id),
        )
        keep.add(winner)
    return [p for i, p in enumerate(corpus) if i in keep]
