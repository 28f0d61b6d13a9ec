"""Query profiling: pseudo-relevance-feedback expansion of short queries,
fixed-point weighting of verbose queries, and keyphrase surrogates for
filter-only requests. All operations are pure given a frozen index."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .entities import EntityKey
from .index import InvertedIndex
from .ingest import PaperRecord
from .textproc import normalize, segment_sentences


@dataclass(frozen=True)
class QueryProfile:
    """Weighted unigram terms plus the entity set driving summarization."""

    terms: dict[str, float]
    entities: frozenset[EntityKey] = frozenset()
    origin: str = "expanded"  # expanded | verbose_weighted | keyphrase_surrogate


def _l1_normalize(weights: dict[str, float]) -> dict[str, float]:
    total = sum(weights.values())
    if total <= 0:
        n = len(weights)
        return {t: 1.0 / n for t in weights} if n else {}
    return {t: w / total for t, w in weights.items()}


def expand_query(
    short_query_tokens: list[str],
    index: InvertedIndex,
    entities: frozenset[EntityKey] = frozenset(),
    top_docs: int = 10,
    profile_size: int = 100,
) -> QueryProfile:
    """Pseudo-relevance feedback: mine expansion terms from the top hits.

    Candidate terms are scored by sum over feedback docs of
    relfreq(term, doc) * retrieval_score(doc). Original content tokens are
    always retained and weighted at least as high as any expansion term.
    """
    originals = [t for t in dict.fromkeys(tok.lower() for tok in short_query_tokens) if t not in index.stopwords]
    hits = index.top_docs(originals, k=top_docs) if originals else []
    if not hits:
        return QueryProfile(terms=_l1_normalize({t: 1.0 for t in originals}), entities=entities, origin="expanded")

    candidate: dict[str, float] = {}
    for pid, score in hits:
        counts = index.doc_term_counts(pid)
        total = sum(counts.values())
        if not total:
            continue
        for term, tf in counts.items():
            candidate[term] = candidate.get(term, 0.0) + (tf / total) * score

    top_weight = max(candidate.values(), default=1.0)
    weights: dict[str, float] = {t: top_weight for t in originals}
    budget = max(profile_size - len(weights), 0)
    expansion = sorted(
        ((t, w) for t, w in candidate.items() if t not in weights),
        key=lambda kv: (-kv[1], kv[0]),
    )
    for term, w in expansion[:budget]:
        weights[term] = w
    return QueryProfile(terms=_l1_normalize(weights), entities=entities, origin="expanded")


def weight_verbose(
    sentence_token_lists: list[list[str]],
    entities: frozenset[EntityKey] = frozenset(),
    tol: float = 1e-6,
    max_iters: int = 50,
    start_value: float = 1.0,
) -> QueryProfile:
    """Fixed-point term weighting over the sentences of a verbose query.

    Term weights and sentence importances reinforce each other:
    importance(s) = sum_t w(t) * relfreq(t, s) and
    w'(t) = sum_s importance(s) * relfreq(t, s), both L1-renormalized each
    round, starting from uniform weights.
    """
    sentences = [s for s in sentence_token_lists if s]
    relfreq = []
    vocab: list[str] = []
    seen: set[str] = set()
    for toks in sentences:
        counts: dict[str, float] = {}
        for t in toks:
            counts[t] = counts.get(t, 0.0) + 1.0
        total = len(toks)
        rf = {t: c / total for t, c in counts.items()}
        relfreq.append(rf)
        for t in toks:
            if t not in seen:
                seen.add(t)
                vocab.append(t)
    if not vocab:
        return QueryProfile(terms={}, entities=entities, origin="verbose_weighted")

    if start_value <= 0:
        raise ValueError("start_value must be positive")
    w = {t: start_value for t in vocab}
    for _ in range(max_iters):
        importance = [sum(w[t] * rf for t, rf in sent.items()) for sent in relfreq]
        importance = _normalize_list(importance)
        new_w = {t: 0.0 for t in vocab}
        for imp, sent in zip(importance, relfreq):
            for t, rf in sent.items():
                new_w[t] += imp * rf
        new_w = _l1_normalize(new_w)
        delta = max(abs(new_w[t] - w[t]) for t in vocab)
        w = new_w
        if delta < tol:
            break
    return QueryProfile(terms=w, entities=entities, origin="verbose_weighted")


def _normalize_list(values: list[float]) -> list[float]:
    total = sum(values)
    if total <= 0:
        n = len(values)
        return [1.0 / n] * n if n else []
    return [v / total for v in values]


def keyphrase_surrogate(
    paper: PaperRecord,
    index: InvertedIndex,
    entities: frozenset[EntityKey] = frozenset(),
    count: int = 15,
) -> QueryProfile:
    """Filter-only fallback: top tf-idf unigrams of the paper, uniform weights."""
    counts = index.doc_term_counts(paper.paper_id)
    total = sum(counts.values())
    n_docs = max(index.paper_count, 1)
    scored: list[tuple[float, str]] = []
    for term, tf in counts.items():
        idf = math.log((n_docs + 1) / (index.document_frequency(term) + 1)) + 1.0
        scored.append((-(tf / total) * idf, term))
    scored.sort()
    chosen = [term for _, term in scored[:count]]
    weight = 1.0 / len(chosen) if chosen else 0.0
    return QueryProfile(
        terms={t: weight for t in chosen}, entities=entities, origin="keyphrase_surrogate"
    )


def build_profile(
    raw_query: str,
    index: InvertedIndex,
    entities: frozenset[EntityKey] = frozenset(),
    verbosity_threshold: int = 5,
    top_docs: int = 10,
    profile_size: int = 100,
    fixedpoint_tol: float = 1e-6,
    fixedpoint_max_iters: int = 50,
) -> QueryProfile:
    """Dispatch a raw query string to the expansion or fixed-point path."""
    sentences = segment_sentences(raw_query)
    token_lists = [normalize(s, index.stopwords) for s in sentences]
    all_tokens = [t for toks in token_lists for t in toks]
    if len(all_tokens) > verbosity_threshold:
        return weight_verbose(token_lists, entities, tol=fixedpoint_tol, max_iters=fixedpoint_max_iters)
    return expand_query(all_tokens, index, entities, top_docs=top_docs, profile_size=profile_size)
