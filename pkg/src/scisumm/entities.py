"""Dictionary-based Task/Dataset/Metric tagging.

Aliases are compiled into a lowercase character trie; tagging is a single
left-to-right scan with longest-match-wins and word-boundary anchoring.
The dictionary is immutable after load; ``tag`` is pure and thread-safe.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MalformedDictionary
from .textproc import SentenceUnit

KINDS = ("Task", "Dataset", "Metric")

EntityKey = tuple[str, str]  # (kind, canonical)


@dataclass(frozen=True)
class Entity:
    kind: str
    canonical: str
    aliases: frozenset[str]


@dataclass(frozen=True)
class EntityMention:
    entity: EntityKey
    section_id: int
    sentence_id: int
    surface: str


class EntityDictionary:
    """Immutable alias store with a trie for longest-match scanning."""

    def __init__(self, entities: dict[EntityKey, Entity]):
        self._entities = entities
        self._trie: dict = {}
        for key, ent in sorted(entities.items()):
            for alias in sorted(ent.aliases):
                node = self._trie
                for ch in alias.lower():
                    node = node.setdefault(ch, {})
                # First writer wins on alias collisions: deterministic via sort.
                node.setdefault("$", key)

    @property
    def entities(self) -> dict[EntityKey, Entity]:
        return dict(self._entities)

    def counts(self) -> dict[str, int]:
        out = {k: 0 for k in KINDS}
        for kind, _ in self._entities:
            out[kind] += 1
        return out

    def longest_match(self, low_text: str, start: int) -> tuple[int, EntityKey] | None:
        """Longest boundary-respecting alias match starting at ``start``; returns (end, key)."""
        node = self._trie
        best: tuple[int, EntityKey] | None = None
        i = start
        n = len(low_text)
        while i < n:
            ch = low_text[i]
            if ch not in node:
                break
            node = node[ch]
            i += 1
            if "$" in node:
                # End boundary: next char must not continue an alphanumeric run.
                if i == n or not low_text[i].isalnum() or not low_text[i - 1].isalnum():
                    best = (i, node["$"])
        return best


def load_dictionaries(paths: list[str]) -> EntityDictionary:
    """Load TSV dictionaries: kind<TAB>canonical<TAB>alias1|alias2|...

    Duplicate (kind, canonical) entries merge with alias union.
    """
    merged: dict[EntityKey, set[str]] = {}
    for path in paths:
        with open(path, encoding="utf-8") as f:
            for line_no, line in enumerate(f, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) < 2:
                    raise MalformedDictionary(path, line_no, "expected kind<TAB>canonical")
                kind = parts[0].strip()
                if kind not in KINDS:
                    raise MalformedDictionary(path, line_no, f"unknown kind '{kind}'")
                canonical = parts[1].strip()
                if not canonical:
                    raise MalformedDictionary(path, line_no, "empty canonical name")
                aliases = {canonical}
                if len(parts) >= 3 and parts[2].strip():
                    aliases.update(a.strip() for a in parts[2].split("|") if a.strip())
                merged.setdefault((kind, canonical), set()).update(aliases)

    entities = {
        key: Entity(kind=key[0], canonical=key[1], aliases=frozenset(aliases))
        for key, aliases in merged.items()
    }
    return EntityDictionary(entities)


def tag(sentence: SentenceUnit, dictionary: EntityDictionary, section_id: int = 0) -> list[EntityMention]:
    """Scan the raw sentence for alias matches; mention spans never overlap."""
    text = sentence.raw
    low = text.lower()
    out: list[EntityMention] = []
    i = 0
    n = len(low)
    while i < n:
        # Start boundary: do not begin inside an alphanumeric run.
        if low[i].isalnum() and i > 0 and low[i - 1].isalnum():
            i += 1
            continue
        hit = dictionary.longest_match(low, i)
        if hit is None:
            i += 1
            continue
        end, key = hit
        out.append(
            EntityMention(entity=key, section_id=section_id, sentence_id=sentence.id, surface=text[i:end])
        )
        i = end
    return out


def tag_paper(paper, dictionary: EntityDictionary) -> list[EntityMention]:
    """Tag every sentence of every section of a PaperRecord."""
    mentions: list[EntityMention] = []
    for sec in paper.sections:
        for sent in sec.sentences:
            mentions.extend(tag(sent, dictionary, section_id=sec.section_id))
    return mentions
