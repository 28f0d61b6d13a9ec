"""Operator CLI: ingest corpora, query snapshots, run summaries and evals.

Exit codes: 0 ok, 1 internal error, 2 usage/contract error. Commands with
identical inputs and --seed produce byte-identical stdout.
"""
from __future__ import annotations

import json
import sys
from collections import Counter
from dataclasses import replace

import click

from . import evalharness
from .config import AppConfig, load_config
from .entities import load_dictionaries, tag_paper
from .errors import EmptyRequest, MalformedDictionary, MalformedRecord, ScisummError
from .index import InvertedIndex, SearchFilter
from .ingest import dedupe, parse_paper
from .query import build_profile, keyphrase_surrogate
from .service import derive_seed, summary_payload
from .summarizer import summarize_paper
from .textproc import load_stopwords, normalize


def _load_index(snapshot: str, cfg: AppConfig) -> InvertedIndex:
    stopwords = load_stopwords()
    return InvertedIndex.load(
        snapshot, stopwords=stopwords, k1=cfg.bm25_k1, b=cfg.bm25_b, field_weights=cfg.field_weights
    )


def _parse_entity_flag(values: tuple[str, ...]) -> frozenset[tuple[str, str]]:
    out = set()
    for v in values:
        if ":" not in v:
            raise click.UsageError(f"--entity expects Kind:Name, got '{v}'")
        kind, name = v.split(":", 1)
        out.add((kind, name))
    return frozenset(out)


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None, help="TOML config file.")
@click.pass_context
def main(ctx, config_path):
    """Faceted search and per-section extractive summarization of papers."""
    ctx.obj = load_config(config_path)


@main.command("ingest")
@click.argument("input_path", type=click.Path(exists=True))
@click.option("--dict", "dict_paths", multiple=True, type=click.Path(exists=True), help="Entity dictionary TSV (repeatable).")
@click.option("--out", "snapshot_out", required=True, type=click.Path(), help="Snapshot file to write.")
@click.pass_obj
def cmd_ingest(cfg: AppConfig, input_path, dict_paths, snapshot_out):
    """Parse a newline-delimited corpus file, dedupe, tag, and index it."""
    stopwords = load_stopwords()
    try:
        dictionary = load_dictionaries(list(dict_paths)) if dict_paths else None
    except MalformedDictionary as e:
        raise click.ClickException(str(e))
    papers = []
    with open(input_path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                papers.append(parse_paper(line, stopwords))
            except (MalformedRecord, ScisummError) as e:
                click.echo(f"error: line {line_no}: {e}", err=True)
                sys.exit(2)
    kept = dedupe(papers, cfg.dedupe_title_threshold, cfg.dedupe_author_threshold)
    removed = len(papers) - len(kept)

    index = InvertedIndex(stopwords=stopwords, k1=cfg.bm25_k1, b=cfg.bm25_b, field_weights=cfg.field_weights)
    entity_counts = Counter()
    section_hist = Counter()
    for paper in kept:
        mentions = tag_paper(paper, dictionary) if dictionary else []
        for m in mentions:
            entity_counts[m.entity[0]] += 1
        section_hist[len(paper.sections)] += 1
        index.index_paper(paper, mentions)
    index.freeze()
    index.save(snapshot_out)

    click.echo(f"papers: {len(kept)}")
    click.echo(f"duplicates_removed: {removed}")
    for kind in ("Task", "Dataset", "Metric"):
        click.echo(f"entity_mentions_{kind.lower()}: {entity_counts.get(kind, 0)}")
    for n_sections in sorted(section_hist):
        click.echo(f"papers_with_{n_sections}_sections: {section_hist[n_sections]}")
    click.echo(f"snapshot: {snapshot_out}")


@main.command("search")
@click.argument("snapshot", type=click.Path(exists=True))
@click.option("--query", default="", help="Free-text query.")
@click.option("--venue", default=None)
@click.option("--year-from", type=int, default=None)
@click.option("--year-to", type=int, default=None)
@click.option("--author", default=None)
@click.option("--entity", "entity_flags", multiple=True, help="Entity filter, Kind:Name (repeatable).")
@click.option("--k", type=int, default=10, show_default=True)
@click.pass_obj
def cmd_search(cfg: AppConfig, snapshot, query, venue, year_from, year_to, author, entity_flags, k):
    """Ranked search over a snapshot."""
    index = _load_index(snapshot, cfg)
    year_range = None
    if year_from is not None or year_to is not None:
        year_range = (year_from if year_from is not None else -(10**9), year_to if year_to is not None else 10**9)
    flt = SearchFilter(
        venue=venue, year_range=year_range, author=author, entities=_parse_entity_flag(entity_flags)
    )
    tokens = normalize(query, index.stopwords)
    try:
        results = index.search(tokens, flt, k=k)
    except EmptyRequest:
        click.echo("error: empty request: provide --query or a filter", err=True)
        sys.exit(2)
    click.echo(f"{'rank':<5} {'score':<10} {'paper_id':<24} title")
    for rank, r in enumerate(results, start=1):
        title = index.papers[r.paper_id].title
        click.echo(f"{rank:<5} {r.score:<10.4f} {r.paper_id:<24} {title}")


@main.command("summarize")
@click.argument("snapshot", type=click.Path(exists=True))
@click.option("--paper-id", required=True)
@click.option("--query", default="")
@click.option("--length", type=int, default=None)
@click.option("--seed", type=int, default=None, help="Override the (paper_id, query)-derived seed.")
@click.option("--threads", type=int, default=1, show_default=True, help="Scoring worker threads.")
@click.pass_obj
def cmd_summarize(cfg: AppConfig, snapshot, paper_id, query, length, seed, threads):
    """Emit a per-section summary as JSON on stdout."""
    index = _load_index(snapshot, cfg)
    if paper_id not in index.papers:
        click.echo(f"error: unknown paper '{paper_id}'", err=True)
        sys.exit(2)
    length = length if length is not None else cfg.summarizer.summary_length
    if length < 1:
        click.echo("error: --length must be >= 1", err=True)
        sys.exit(2)
    paper = index.papers[paper_id]
    query = query.strip()
    if query:
        profile = build_profile(
            query,
            index,
            verbosity_threshold=cfg.verbosity_threshold,
            top_docs=cfg.expansion_top_docs,
            profile_size=cfg.expansion_profile_size,
            fixedpoint_tol=cfg.fixedpoint_tol,
            fixedpoint_max_iters=cfg.fixedpoint_max_iters,
        )
    else:
        profile = keyphrase_surrogate(paper, index, count=cfg.keyphrase_count)
    ce_cfg = replace(
        cfg.summarizer,
        summary_length=length,
        seed=seed if seed is not None else derive_seed(paper_id, query),
    )
    summary = summarize_paper(
        paper, profile, ce_cfg, mentions=index.mentions.get(paper_id, []), workers=threads
    )
    payload = summary_payload(index, summary)
    payload["profile_origin"] = profile.origin
    click.echo(json.dumps(payload, sort_keys=True, separators=(",", ":")))


@main.command("eval")
@click.argument("snapshot", type=click.Path(exists=True))
@click.option("--papers", "papers_file", type=click.Path(exists=True), default=None, help="File of paper ids, one per line.")
@click.option("--out", "out_csv", required=True, type=click.Path(), help="CSV report path.")
@click.option("--fig-dir", type=click.Path(), default=None, help="Figure output directory (defaults beside the CSV).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_obj
def cmd_eval(cfg: AppConfig, snapshot, papers_file, out_csv, fig_dir, seed):
    """Compare section-based vs. section-agnostic summaries over a batch."""
    index = _load_index(snapshot, cfg)
    if papers_file:
        with open(papers_file, encoding="utf-8") as f:
            ids = [line.strip() for line in f if line.strip()]
        missing = [pid for pid in ids if pid not in index.papers]
        if missing:
            click.echo(f"error: unknown paper ids: {', '.join(missing)}", err=True)
            sys.exit(2)
    else:
        ids = sorted(index.papers)[: evalharness.DEFAULT_BATCH_SIZE]
    papers = [index.papers[pid] for pid in ids]
    profiles = {pid: keyphrase_surrogate(index.papers[pid], index, count=cfg.keyphrase_count) for pid in ids}
    ce_cfg = replace(cfg.summarizer, seed=seed)
    rows, aggs = evalharness.run_batch(
        papers, profiles, ce_cfg, mentions_by_paper={pid: index.mentions.get(pid, []) for pid in ids}
    )
    fig_paths = evalharness.write_report(rows, aggs, out_csv, fig_dir)
    click.echo(f"papers_evaluated: {len(papers)}")
    click.echo(f"report: {out_csv}")
    for p in fig_paths:
        click.echo(f"figure: {p}")


@main.command("serve")
@click.argument("snapshot", type=click.Path(exists=True))
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.pass_obj
def cmd_serve(cfg: AppConfig, snapshot, host, port):
    """Run the HTTP API over a snapshot."""
    import uvicorn

    from .service import create_app

    index = _load_index(snapshot, cfg)
    app = create_app(index, cfg)
    uvicorn.run(app, host=host or cfg.host, port=port or cfg.port)


if __name__ == "__main__":
    main()
