"""Query-focused extractive summarization via Cross-Entropy subset search.

A summary is a fixed-size subset of a section's sentences. Candidate
subsets are sampled from per-sentence inclusion probabilities, scored by
the product of five quality objectives (query saliency, entity coverage,
diversity, text coverage, sentence length), and the distribution is
re-fitted toward the elite candidates each iteration.

Candidate subsets are always drawn sequentially from the seeded RNG before
any (possibly multi-threaded) scoring, so results are reproducible and
independent of the worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .entities import EntityKey, EntityMention
from .errors import EmptySection
from .ingest import PaperRecord, SectionDoc
from .query import QueryProfile
from .textproc import SentenceUnit

# Floor applied to each objective before multiplication, so no single zero
# component flattens the search landscape.
OBJECTIVE_EPS = 1e-4

FLAT_SECTION_ID = -1


@dataclass(frozen=True)
class CEConfig:
    sample_size: int = 500
    elite_fraction: float = 0.1
    smoothing_alpha: float = 0.7
    max_iterations: int = 60
    stop_tol: float = 1e-3
    summary_length: int = 10
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.elite_fraction < 1.0):
            raise ValueError("elite_fraction must be in (0, 1)")
        if not (0.0 < self.smoothing_alpha <= 1.0):
            raise ValueError("smoothing_alpha must be in (0, 1]")
        if self.summary_length < 1:
            raise ValueError("summary_length must be >= 1")


@dataclass(frozen=True)
class ObjectiveBreakdown:
    query_saliency: float
    entity_coverage: float
    diversity: float
    text_coverage: float
    length: float
    product: float

    def as_dict(self) -> dict[str, float]:
        return {
            "query_saliency": self.query_saliency,
            "entity_coverage": self.entity_coverage,
            "diversity": self.diversity,
            "text_coverage": self.text_coverage,
            "length": self.length,
            "product": self.product,
        }


ZERO_BREAKDOWN = ObjectiveBreakdown(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class SectionSummary:
    section_id: int
    selected: list[int]
    breakdown: ObjectiveBreakdown
    iterations_used: int


@dataclass(frozen=True)
class PaperSummary:
    paper_id: str
    per_section: list[SectionSummary]


# -- standalone objective functions -------------------------------------------


def _pooled_counts(sentences: list[SentenceUnit], n: int) -> dict[str, int]:
    counts: dict[str, int] = {}
    for s in sentences:
        toks = s.tokens
        for i in range(len(toks) - n + 1):
            key = toks[i] if n == 1 else f"{toks[i]} {toks[i + 1]}"
            counts[key] = counts.get(key, 0) + 1
    return counts


def _cosine(a: dict[str, float], b: dict[str, float]) -> float:
    na = math.sqrt(sum(v * v for v in a.values()))
    nb = math.sqrt(sum(v * v for v in b.values()))
    if na == 0.0 or nb == 0.0:
        return 0.0
    dot = sum(v * b[k] for k, v in a.items() if k in b)
    return dot / (na * nb)


def query_saliency(summary_sentences: list[SentenceUnit], profile: QueryProfile) -> float:
    """Cosine between the summary's pooled unigram bag and the query term vector."""
    counts = _pooled_counts(summary_sentences, 1)
    return _cosine({k: float(v) for k, v in counts.items()}, profile.terms)


def entity_coverage(summary_entities: set[EntityKey], e_q: set[EntityKey]) -> float:
    """Jaccard similarity of the summary's entity set against the query's.

    An empty query entity set imposes no constraint and scores 1.0.
    """
    if not e_q:
        return 1.0
    if not summary_entities:
        return 0.0
    inter = len(summary_entities & e_q)
    union = len(summary_entities | e_q)
    return inter / union


def diversity(summary_sentences: list[SentenceUnit]) -> float:
    """Entropy of the pooled unigram bag, normalized by log(vocabulary size)."""
    counts = _pooled_counts(summary_sentences, 1)
    if len(counts) < 2:
        return 0.0
    total = sum(counts.values())
    ent = -sum((c / total) * math.log(c / total) for c in counts.values())
    return ent / math.log(len(counts))


def text_coverage(summary_sentences: list[SentenceUnit], section: SectionDoc) -> float:
    """Cosine between the summary's pooled bigram bag and the section's."""
    s_bag = _pooled_counts(summary_sentences, 2)
    d_bag = _pooled_counts(section.sentences, 2)
    return _cosine(
        {k: float(v) for k, v in s_bag.items()}, {k: float(v) for k, v in d_bag.items()}
    )


def length_objective(summary_sentences: list[SentenceUnit], section: SectionDoc) -> float:
    """Mean selected sentence length over the longest sentence in the section."""
    if not summary_sentences:
        return 0.0
    max_len = max((s.token_count for s in section.sentences), default=0)
    if max_len == 0:
        return 0.0
    mean_len = sum(s.token_count for s in summary_sentences) / len(summary_sentences)
    return mean_len / max_len


def _clamp(x: float) -> float:
    return min(max(x, OBJECTIVE_EPS), 1.0)


def sentence_entity_sets(section: SectionDoc, mentions: list[EntityMention]) -> list[set[EntityKey]]:
    """Per-sentence entity sets for one section, from precomputed mentions."""
    sets: list[set[EntityKey]] = [set() for _ in section.sentences]
    for m in mentions:
        if m.section_id == section.section_id and 0 <= m.sentence_id < len(sets):
            sets[m.sentence_id].add(m.entity)
    return sets


def score_summary(
    selected: list[int],
    section: SectionDoc,
    profile: QueryProfile,
    sentence_entities: list[set[EntityKey]] | None = None,
) -> ObjectiveBreakdown:
    """Five-component quality breakdown of one candidate subset.

    Every component is clamped to [OBJECTIVE_EPS, 1] and the product of the
    clamped values is returned.
    """
    for sid in selected:
        if not (0 <= sid < len(section.sentences)):
            raise IndexError(f"sentence id {sid} out of range for section {section.section_id}")
    chosen = [section.sentences[i] for i in selected]
    if sentence_entities is None:
        sentence_entities = [set() for _ in section.sentences]
    summary_entities: set[EntityKey] = set()
    for i in selected:
        summary_entities |= sentence_entities[i]
    comps = (
        _clamp(query_saliency(chosen, profile)),
        _clamp(entity_coverage(summary_entities, set(profile.entities))),
        _clamp(diversity(chosen)),
        _clamp(text_coverage(chosen, section)),
        _clamp(length_objective(chosen, section)),
    )
    prod = 1.0
    for c in comps:
        prod *= c
    return ObjectiveBreakdown(*comps, product=prod)


# -- vectorized batch scorer ---------------------------------------------------


class SectionScorer:
    """Precomputes sentence-level count matrices for fast batch scoring.

    Scores agree with ``score_summary`` on any subset.
    """

    def __init__(
        self,
        section: SectionDoc,
        profile: QueryProfile,
        sentence_entities: list[set[EntityKey]] | None = None,
    ):
        self.section = section
        self.profile = profile
        sentences = section.sentences
        n = len(sentences)

        uni_vocab: dict[str, int] = {}
        bi_vocab: dict[str, int] = {}
        for s in sentences:
            for t in s.tokens:
                uni_vocab.setdefault(t, len(uni_vocab))
            for i in range(len(s.tokens) - 1):
                bi_vocab.setdefault(f"{s.tokens[i]} {s.tokens[i + 1]}", len(bi_vocab))
        for t in profile.terms:
            uni_vocab.setdefault(t, len(uni_vocab))

        self.U = np.zeros((n, len(uni_vocab)), dtype=np.float64)
        self.B = np.zeros((n, max(len(bi_vocab), 1)), dtype=np.float64)
        for si, s in enumerate(sentences):
            for t in s.tokens:
                self.U[si, uni_vocab[t]] += 1.0
            for i in range(len(s.tokens) - 1):
                self.B[si, bi_vocab[f"{s.tokens[i]} {s.tokens[i + 1]}"]] += 1.0

        self.q = np.zeros(len(uni_vocab), dtype=np.float64)
        for t, w in profile.terms.items():
            self.q[uni_vocab[t]] = w
        q_norm = np.linalg.norm(self.q)
        self.q_unit = self.q / q_norm if q_norm > 0 else self.q

        d_vec = self.B.sum(axis=0)
        d_norm = np.linalg.norm(d_vec)
        self.d_unit = d_vec / d_norm if d_norm > 0 else d_vec

        self.lengths = np.array([s.token_count for s in sentences], dtype=np.float64)
        self.max_len = float(self.lengths.max()) if n else 0.0

        ents = sentence_entities if sentence_entities is not None else [set() for _ in sentences]
        universe: dict[EntityKey, int] = {}
        for es in ents:
            for e in sorted(es):
                universe.setdefault(e, len(universe))
        for e in sorted(profile.entities):
            universe.setdefault(e, len(universe))
        self._ent_masks = [
            sum(1 << universe[e] for e in es) for es in ents
        ]
        self._eq_mask = sum(1 << universe[e] for e in profile.entities)
        self._eq_bits = bin(self._eq_mask).count("1")

    def _entity_scores(self, sel: np.ndarray) -> np.ndarray:
        if self._eq_mask == 0:
            return np.ones(sel.shape[0])
        out = np.empty(sel.shape[0])
        masks = self._ent_masks
        eq = self._eq_mask
        for r in range(sel.shape[0]):
            m = 0
            for i in np.flatnonzero(sel[r]):
                m |= masks[i]
            if m == 0:
                out[r] = 0.0
            else:
                inter = bin(m & eq).count("1")
                union = bin(m | eq).count("1")
                out[r] = inter / union
        return out

    def score_batch(self, sel: np.ndarray, workers: int = 1) -> np.ndarray:
        """Product objective for each row of boolean selection matrix ``sel``."""
        if workers > 1 and sel.shape[0] >= workers:
            chunks = np.array_split(np.arange(sel.shape[0]), workers)
            with ThreadPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(lambda idx: self._score_rows(sel[idx]), chunks))
            return np.concatenate(parts)
        return self._score_rows(sel)

    def _score_rows(self, sel: np.ndarray) -> np.ndarray:
        self_f = sel.astype(np.float64)
        uc = self_f @ self.U  # (m, Vu) pooled unigram counts

        # query saliency: cosine against the profile vector
        u_norms = np.linalg.norm(uc, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            sal = np.where(u_norms > 0, (uc @ self.q_unit) / np.where(u_norms > 0, u_norms, 1.0), 0.0)

        # diversity: normalized entropy of pooled unigram distribution
        totals = uc.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            p = uc / np.where(totals > 0, totals, 1.0)[:, None]
            logp = np.where(p > 0, np.log(np.where(p > 0, p, 1.0)), 0.0)
        ent = -(p * logp).sum(axis=1)
        vocab_sizes = (uc > 0).sum(axis=1)
        div = np.where(vocab_sizes >= 2, ent / np.log(np.maximum(vocab_sizes, 2)), 0.0)

        # text coverage: cosine of pooled bigram counts against the section's
        bc = self_f @ self.B
        b_norms = np.linalg.norm(bc, axis=1)
        cov = np.where(b_norms > 0, (bc @ self.d_unit) / np.where(b_norms > 0, b_norms, 1.0), 0.0)

        # length: mean selected length over the section max
        counts = self_f.sum(axis=1)
        if self.max_len > 0:
            lng = np.where(counts > 0, (self_f @ self.lengths) / np.where(counts > 0, counts, 1.0) / self.max_len, 0.0)
        else:
            lng = np.zeros(sel.shape[0])

        ent_cov = self._entity_scores(sel)

        eps = OBJECTIVE_EPS
        prod = np.ones(sel.shape[0])
        for comp in (sal, ent_cov, div, cov, lng):
            prod = prod * np.clip(comp, eps, 1.0)
        return prod


# -- Cross-Entropy optimizer ---------------------------------------------------


def ce_optimize(
    section: SectionDoc,
    profile: QueryProfile,
    cfg: CEConfig,
    sentence_entities: list[set[EntityKey]] | None = None,
    workers: int = 1,
) -> SectionSummary:
    """Select a summary subset of ``cfg.summary_length`` sentences by CE search.

    Sections with at most ``summary_length`` sentences are returned whole
    without optimization.
    """
    n = len(section.sentences)
    if n == 0:
        raise EmptySection(f"section {section.section_id} has no sentences")
    L = cfg.summary_length
    if n <= L:
        selected = list(range(n))
        return SectionSummary(
            section_id=section.section_id,
            selected=selected,
            breakdown=score_summary(selected, section, profile, sentence_entities),
            iterations_used=0,
        )

    scorer = SectionScorer(section, profile, sentence_entities)
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed & 0xFFFFFFFFFFFFFFFF))
    m = cfg.sample_size
    elite_k = max(1, math.ceil(cfg.elite_fraction * m))
    p = np.full(n, L / n, dtype=np.float64)

    best_subset: np.ndarray | None = None
    best_score = -1.0
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        # Gumbel top-L keys == sequential weighted sampling without replacement.
        gumbel = rng.gumbel(size=(m, n))
        keys = np.log(np.maximum(p, 1e-12))[None, :] + gumbel
        top = np.argpartition(-keys, L - 1, axis=1)[:, :L]
        sel = np.zeros((m, n), dtype=bool)
        np.put_along_axis(sel, top, True, axis=1)

        scores = scorer.score_batch(sel, workers=workers)
        order = np.argsort(-scores, kind="stable")
        if scores[order[0]] > best_score:
            best_score = float(scores[order[0]])
            best_subset = sel[order[0]].copy()

        freq = sel[order[:elite_k]].mean(axis=0)
        new_p = cfg.smoothing_alpha * freq + (1.0 - cfg.smoothing_alpha) * p
        delta = float(np.abs(new_p - p).max())
        p = new_p
        if delta < cfg.stop_tol:
            break

    assert best_subset is not None
    selected = [int(i) for i in np.flatnonzero(best_subset)]
    return SectionSummary(
        section_id=section.section_id,
        selected=selected,
        breakdown=score_summary(selected, section, profile, sentence_entities),
        iterations_used=iterations,
    )


def _section_seed(base_seed: int, section_id: int) -> int:
    ss = np.random.SeedSequence([base_seed & 0xFFFFFFFFFFFFFFFF, section_id & 0xFFFFFFFF])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def summarize_paper(
    paper: PaperRecord,
    profile: QueryProfile,
    cfg: CEConfig,
    mentions: list[EntityMention] | None = None,
    workers: int = 1,
) -> PaperSummary:
    """Summarize every section independently; compose in document order.

    Sections without sentences yield an empty SectionSummary rather than
    failing the whole paper.
    """
    mentions = mentions or []
    per_section: list[SectionSummary] = []
    for sec in paper.sections:
        if not sec.sentences:
            per_section.append(
                SectionSummary(section_id=sec.section_id, selected=[], breakdown=ZERO_BREAKDOWN, iterations_used=0)
            )
            continue
        sec_cfg = replace(cfg, seed=_section_seed(cfg.seed, sec.section_id))
        ents = sentence_entity_sets(sec, mentions)
        per_section.append(ce_optimize(sec, profile, sec_cfg, sentence_entities=ents, workers=workers))
    return PaperSummary(paper_id=paper.paper_id, per_section=per_section)


def flatten_sections(paper: PaperRecord, mentions: list[EntityMention] | None = None):
    """Pool all sentences into one pseudo-section, renumbering ids.

    Returns (section, sentence_entities, origin) where origin[i] is the
    (section_id, sentence_id) the i-th pooled sentence came from.
    """
    mentions = mentions or []
    pooled: list[SentenceUnit] = []
    ent_sets: list[set[EntityKey]] = []
    origin: list[tuple[int, int]] = []
    by_loc: dict[tuple[int, int], set[EntityKey]] = {}
    for m in mentions:
        by_loc.setdefault((m.section_id, m.sentence_id), set()).add(m.entity)
    for sec in paper.sections:
        for sent in sec.sentences:
            pooled.append(replace(sent, id=len(pooled)))
            ent_sets.append(by_loc.get((sec.section_id, sent.id), set()))
            origin.append((sec.section_id, sent.id))
    text = " ".join(s.raw for s in pooled)
    flat = SectionDoc(section_id=FLAT_SECTION_ID, title="(flat)", text=text, sentences=pooled)
    return flat, ent_sets, origin


def summarize_flat(
    paper: PaperRecord,
    profile: QueryProfile,
    target_length: int,
    cfg: CEConfig,
    mentions: list[EntityMention] | None = None,
    workers: int = 1,
) -> SectionSummary:
    """Section-agnostic summary: the whole paper treated as flat text."""
    if target_length < 1:
        raise ValueError("target_length must be >= 1")
    flat, ent_sets, _ = flatten_sections(paper, mentions)
    if not flat.sentences:
        raise EmptySection(f"paper {paper.paper_id} has no sentences")
    flat_cfg = replace(cfg, summary_length=target_length, seed=_section_seed(cfg.seed, 0x7F17))
    return ce_optimize(flat, profile, flat_cfg, sentence_entities=ent_sets, workers=workers)
