"""Deterministic text normalization pipeline.

Sentence segmentation (rule-based, abbreviation-guarded), tokenization,
lowercasing, stopword removal, and n-gram bag-of-words construction.
All functions are pure; safe to call concurrently.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable

# Alphanumeric runs only: punctuation and hyphens split tokens,
# digits stay attached ("F1" -> "f1", "SQuAD2.0" -> "squad2", "0").
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

# Candidate sentence boundary: terminal punctuation then whitespace.
_BOUNDARY_RE = re.compile(r"([.!?]+)(\s+)")

# Guard list: a period after these never ends a sentence.
# Stored without the trailing period, lowercase.
ABBREVIATIONS = frozenset(
    ["fig", "figs", "eq", "eqs", "tab", "sec", "no", "vs", "et", "al",
     "e.g", "i.e", "cf", "etc", "resp", "approx", "dr", "mr", "ms", "prof"]
)


def load_stopwords(path: str | None = None) -> frozenset[str]:
    """Load the stopword set, one lowercase word per line, '#' comments ignored."""
    if path is None:
        text = resources.files("scisumm.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


def _ends_with_abbreviation(chunk: str) -> bool:
    """True when the last whitespace-token of ``chunk`` is a guarded abbreviation."""
    parts = chunk.split()
    if not parts:
        return True  # boundary with no preceding word: never split
    last = parts[-1].lstrip("([{\"'")
    bare = last.rstrip(".").lower()
    if bare in ABBREVIATIONS:
        return True
    # Single-letter initials ("J. Smith")
    if len(bare) == 1 and bare.isalpha():
        return True
    return False


def segment_sentences(text: str) -> list[str]:
    """Split ``text`` into raw sentence strings.

    Boundaries sit at terminal punctuation followed by whitespace, unless the
    preceding word is on the abbreviation guard list. Joining the result with
    single spaces reconstructs the input modulo whitespace.
    """
    sentences: list[str] = []
    start = 0
    for m in _BOUNDARY_RE.finditer(text):
        if m.group(1).endswith(".") and _ends_with_abbreviation(text[start:m.start(1)]):
            continue
        seg = text[start:m.end(1)].strip()
        if seg:
            sentences.append(seg)
        start = m.end()
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def normalize(raw_sentence: str, stopwords: Iterable[str] = frozenset()) -> list[str]:
    """Lowercase, strip punctuation, and drop stopwords, preserving order."""
    sw = stopwords if isinstance(stopwords, (set, frozenset)) else frozenset(stopwords)
    return [t for t in (m.group(0).lower() for m in _TOKEN_RE.finditer(raw_sentence)) if t not in sw]


@dataclass(frozen=True)
class NGramBag:
    """Map from n-gram (space-joined tokens) to relative frequency in [0, 1]."""

    entries: dict[str, float] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return bool(self.entries)


def bag_of_ngrams(tokens: list[str], n: int) -> NGramBag:
    """Relative-frequency bag of n-grams; fewer than ``n`` tokens yields an empty bag."""
    if n not in (1, 2):
        raise ValueError(f"n must be 1 or 2, got {n}")
    total = len(tokens) - n + 1
    if total <= 0:
        return NGramBag({})
    counts: dict[str, int] = {}
    for i in range(total):
        key = tokens[i] if n == 1 else f"{tokens[i]} {tokens[i + 1]}"
        counts[key] = counts.get(key, 0) + 1
    return NGramBag({k: c / total for k, c in counts.items()})


@dataclass(frozen=True)
class SentenceUnit:
    """One sentence: raw form plus its normalized token views."""

    id: int
    raw: str
    tokens: list[str]
    unigrams: NGramBag
    bigrams: NGramBag
    token_count: int


def make_sentence(idx: int, raw: str, stopwords: Iterable[str]) -> SentenceUnit:
    tokens = normalize(raw, stopwords)
    return SentenceUnit(
        id=idx,
        raw=raw,
        tokens=tokens,
        unigrams=bag_of_ngrams(tokens, 1),
        bigrams=bag_of_ngrams(tokens, 2),
        token_count=len(tokens),
    )


def sentences_from_text(text: str, stopwords: Iterable[str]) -> list[SentenceUnit]:
    """Segment ``text`` and build SentenceUnits with ids 0..n-1 in document order."""
    return [make_sentence(i, raw, stopwords) for i, raw in enumerate(segment_sentences(text))]
