"""Faceted search and query-focused per-section extractive summarization."""

__version__ = "0.1.0"

from .entities import Entity, EntityDictionary, EntityMention, load_dictionaries, tag
from .index import InvertedIndex, SearchFilter, SearchResult
from .ingest import PaperRecord, SectionDoc, dedupe, parse_paper
from .query import QueryProfile, expand_query, keyphrase_surrogate, weight_verbose
from .summarizer import (
    CEConfig,
    ObjectiveBreakdown,
    PaperSummary,
    SectionSummary,
    ce_optimize,
    score_summary,
    summarize_flat,
    summarize_paper,
)
from .textproc import (
    NGramBag,
    SentenceUnit,
    bag_of_ngrams,
    load_stopwords,
    normalize,
    segment_sentences,
)

__all__ = [
    "Entity",
    "EntityDictionary",
    "EntityMention",
    "load_dictionaries",
    "tag",
    "InvertedIndex",
    "SearchFilter",
    "SearchResult",
    "PaperRecord",
    "SectionDoc",
    "dedupe",
    "parse_paper",
    "QueryProfile",
    "expand_query",
    "keyphrase_surrogate",
    "weight_verbose",
    "CEConfig",
    "ObjectiveBreakdown",
    "PaperSummary",
    "SectionSummary",
    "ce_optimize",
    "score_summary",
    "summarize_flat",
    "summarize_paper",
    "NGramBag",
    "SentenceUnit",
    "bag_of_ngrams",
    "load_stopwords",
    "normalize",
    "segment_sentences",
]
