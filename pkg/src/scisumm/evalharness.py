"""Section-based vs. section-agnostic summary comparison harness.

For each paper we build the two summary types at equal total length and
compare them with objective metrics (text coverage, query saliency,
diversity). The batch report aggregates % wins and mean (std) per type,
written as CSV with matplotlib figures rendered alongside.
"""
from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass

from .entities import EntityMention
from .ingest import PaperRecord
from .query import QueryProfile
from .summarizer import (
    CEConfig,
    PaperSummary,
    SectionSummary,
    diversity,
    flatten_sections,
    query_saliency,
    summarize_flat,
    summarize_paper,
    text_coverage,
)

METRICS = ("text_coverage", "query_saliency", "diversity")
DEFAULT_BATCH_SIZE = 24  # matches the scale of the original study


@dataclass(frozen=True)
class ComparisonRow:
    paper_id: str
    metric: str
    section_based: float
    flat: float
    winner: str  # section_based | flat | tie


@dataclass(frozen=True)
class MetricAggregate:
    metric: str
    section_based_wins_pct: float
    flat_wins_pct: float
    tie_pct: float
    section_based_mean: float
    section_based_std: float
    flat_mean: float
    flat_std: float


def build_pair(
    paper: PaperRecord,
    profile: QueryProfile,
    cfg: CEConfig,
    mentions: list[EntityMention] | None = None,
    workers: int = 1,
) -> tuple[PaperSummary, SectionSummary]:
    """Section-based summary plus a flat summary of equal total length."""
    section_based = summarize_paper(paper, profile, cfg, mentions=mentions, workers=workers)
    total = sum(len(s.selected) for s in section_based.per_section)
    flat = summarize_flat(paper, profile, max(total, 1), cfg, mentions=mentions, workers=workers)
    return section_based, flat


def _selected_sentences(paper: PaperRecord, summary: PaperSummary):
    by_id = {sec.section_id: sec for sec in paper.sections}
    out = []
    for ss in summary.per_section:
        sec = by_id[ss.section_id]
        out.extend(sec.sentences[i] for i in ss.selected)
    return out


def compare(
    pair: tuple[PaperSummary, SectionSummary],
    paper: PaperRecord,
    profile: QueryProfile,
    mentions: list[EntityMention] | None = None,
) -> list[ComparisonRow]:
    """Per-paper metric rows: one ComparisonRow per metric."""
    section_based, flat_summary = pair
    flat_section, _, _ = flatten_sections(paper, mentions)
    flat_sentences = [flat_section.sentences[i] for i in flat_summary.selected]
    sb_sentences = _selected_sentences(paper, section_based)

    # text coverage: mean across sections vs. flat against the whole paper
    sec_covs = [ss.breakdown.text_coverage for ss in section_based.per_section if ss.selected]
    sb_cov = sum(sec_covs) / len(sec_covs) if sec_covs else 0.0
    flat_cov = text_coverage(flat_sentences, flat_section)

    values = {
        "text_coverage": (sb_cov, flat_cov),
        "query_saliency": (
            query_saliency(sb_sentences, profile),
            query_saliency(flat_sentences, profile),
        ),
        "diversity": (diversity(sb_sentences), diversity(flat_sentences)),
    }
    rows = []
    for metric in METRICS:
        sb, fl = values[metric]
        if math.isclose(sb, fl, abs_tol=1e-12):
            winner = "tie"
        else:
            winner = "section_based" if sb > fl else "flat"
        rows.append(ComparisonRow(paper.paper_id, metric, sb, fl, winner))
    return rows


def aggregate(rows: list[ComparisonRow]) -> list[MetricAggregate]:
    """Batch report: % wins and mean (std) per summary type, per metric."""
    out = []
    for metric in METRICS:
        mrows = [r for r in rows if r.metric == metric]
        if not mrows:
            continue
        n = len(mrows)
        sb_vals = [r.section_based for r in mrows]
        fl_vals = [r.flat for r in mrows]
        out.append(
            MetricAggregate(
                metric=metric,
                section_based_wins_pct=100.0 * sum(r.winner == "section_based" for r in mrows) / n,
                flat_wins_pct=100.0 * sum(r.winner == "flat" for r in mrows) / n,
                tie_pct=100.0 * sum(r.winner == "tie" for r in mrows) / n,
                section_based_mean=statistics.fmean(sb_vals),
                section_based_std=statistics.pstdev(sb_vals) if n > 1 else 0.0,
                flat_mean=statistics.fmean(fl_vals),
                flat_std=statistics.pstdev(fl_vals) if n > 1 else 0.0,
            )
        )
    return out


def run_batch(
    papers: list[PaperRecord],
    profiles: dict[str, QueryProfile],
    cfg: CEConfig,
    mentions_by_paper: dict[str, list[EntityMention]] | None = None,
    workers: int = 1,
) -> tuple[list[ComparisonRow], list[MetricAggregate]]:
    mentions_by_paper = mentions_by_paper or {}
    rows: list[ComparisonRow] = []
    for paper in papers:
        profile = profiles[paper.paper_id]
        mentions = mentions_by_paper.get(paper.paper_id, [])
        pair = build_pair(paper, profile, cfg, mentions=mentions, workers=workers)
        rows.extend(compare(pair, paper, profile, mentions))
    return rows, aggregate(rows)


def write_report(
    rows: list[ComparisonRow],
    aggregates: list[MetricAggregate],
    csv_path: str,
    fig_dir: str | None = None,
) -> list[str]:
    """Write the CSV report; render figures next to it. Returns figure paths."""
    with open(csv_path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["paper_id", "metric", "section_based_value", "flat_value", "winner"])
        for r in rows:
            w.writerow([r.paper_id, r.metric, f"{r.section_based:.6f}", f"{r.flat:.6f}", r.winner])
        w.writerow([])
        w.writerow(
            [
                "metric",
                "section_based_wins_pct",
                "flat_wins_pct",
                "tie_pct",
                "section_based_mean",
                "section_based_std",
                "flat_mean",
                "flat_std",
            ]
        )
        for a in aggregates:
            w.writerow(
                [
                    a.metric,
                    f"{a.section_based_wins_pct:.1f}",
                    f"{a.flat_wins_pct:.1f}",
                    f"{a.tie_pct:.1f}",
                    f"{a.section_based_mean:.4f}",
                    f"{a.section_based_std:.4f}",
                    f"{a.flat_mean:.4f}",
                    f"{a.flat_std:.4f}",
                ]
            )
    if fig_dir is None:
        import os

        fig_dir = os.path.dirname(os.path.abspath(csv_path))
    return render_figures(aggregates, fig_dir)


def render_figures(aggregates: list[MetricAggregate], out_dir: str) -> list[str]:
    """Bar charts of % wins and mean scores (with std error bars) per metric."""
    import os

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(out_dir, exist_ok=True)
    paths = []
    metrics = [a.metric for a in aggregates]
    x = range(len(metrics))
    width = 0.35

    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar([i - width / 2 for i in x], [a.section_based_wins_pct for a in aggregates], width, label="section-based")
    ax.bar([i + width / 2 for i in x], [a.flat_wins_pct for a in aggregates], width, label="section-agnostic")
    ax.set_xticks(list(x))
    ax.set_xticklabels(metrics)
    ax.set_ylabel("% wins")
    ax.set_title("Summary type wins per metric")
    ax.legend()
    fig.tight_layout()
    wins_path = os.path.join(out_dir, "eval_wins.png")
    fig.savefig(wins_path, dpi=120)
    plt.close(fig)
    paths.append(wins_path)

    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(
        [i - width / 2 for i in x],
        [a.section_based_mean for a in aggregates],
        width,
        yerr=[a.section_based_std for a in aggregates],
        capsize=3,
        label="section-based",
    )
    ax.bar(
        [i + width / 2 for i in x],
        [a.flat_mean for a in aggregates],
        width,
        yerr=[a.flat_std for a in aggregates],
        capsize=3,
        label="section-agnostic",
    )
    ax.set_xticks(list(x))
    ax.set_xticklabels(metrics)
    ax.set_ylabel("mean score")
    ax.set_title("Mean objective score per summary type")
    ax.legend()
    fig.tight_layout()
    scores_path = os.path.join(out_dir, "eval_scores.png")
    fig.savefig(scores_path, dpi=120)
    plt.close(fig)
    paths.append(scores_path)
    return paths
