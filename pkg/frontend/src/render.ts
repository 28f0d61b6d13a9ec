/**
 * Pure view functions: state + API payloads in, HTML strings out.
 *
 * No DOM access here — the bootstrap (app.ts) owns mounting and events —
 * so every view is unit-testable as a plain string transformation.
 *
 * Provenance marking: everything the system computed (summary sentences,
 * entity chips, objective scores, result ranking) carries
 * data-provenance="computed"; everything copied verbatim from the source
 * record (titles, abstract, figure captions, full section text) carries
 * data-provenance="extracted".
 */

import type {
  FacetCount,
  PaperResponse,
  SearchResponse,
  SummarizeResponse,
} from "./types.js";
import {
  entitySearchHref,
  encodeEntity,
  isEmptyRequest,
  paperHref,
  type AppState,
} from "./state.js";

export function escapeHtml(raw: string): string {
  return raw
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

function attr(raw: string): string {
  return escapeHtml(raw);
}

function entityChip(kind: string, canonical: string): string {
  const key = { kind, canonical };
  return (
    `<a class="entity-chip kind-${attr(kind.toLowerCase())}" data-provenance="computed"` +
    ` data-entity="${attr(encodeEntity(key))}" href="${attr(entitySearchHref(key))}">` +
    `<span class="chip-kind">${escapeHtml(kind)}</span> ${escapeHtml(canonical)}</a>`
  );
}

export function renderSearchForm(state: AppState): string {
  const disabled = isEmptyRequest(state) ? " disabled" : "";
  return [
    `<form id="search-form" class="search-form" action="" method="get">`,
    `<input id="search-input" name="q" type="search" autocomplete="off"`,
    ` placeholder="Search papers" value="${attr(state.query)}">`,
    `<button id="search-button" type="submit"${disabled}>Search</button>`,
    `</form>`,
  ].join("");
}

export function renderFacetPanel(facets: FacetCount[], state: AppState): string {
  const byKind = new Map<string, FacetCount[]>();
  for (const f of facets) {
    const group = byKind.get(f.kind) ?? [];
    group.push(f);
    byKind.set(f.kind, group);
  }
  const active = new Set(state.filters.entities.map(encodeEntity));
  const groups: string[] = [];
  for (const [kind, group] of [...byKind.entries()].sort((a, b) => a[0].localeCompare(b[0]))) {
    const items = group
      .map((f) => {
        const key = encodeEntity({ kind: f.kind, canonical: f.canonical });
        const selected = active.has(key) ? " selected" : "";
        return (
          `<li><button type="button" class="facet-option${selected}"` +
          ` data-entity="${attr(key)}">` +
          `${escapeHtml(f.canonical)} <span class="facet-count">${f.count}</span>` +
          `</button></li>`
        );
      })
      .join("");
    groups.push(
      `<section class="facet-group"><h3>${escapeHtml(kind)}</h3><ul>${items}</ul></section>`,
    );
  }
  return `<aside id="facet-panel" class="facet-panel" data-provenance="computed">${groups.join("")}</aside>`;
}

export function renderActiveFilters(state: AppState): string {
  const parts: string[] = [];
  const f = state.filters;
  if (f.venue) parts.push(`<span class="filter-tag">venue: ${escapeHtml(f.venue)}</span>`);
  if (f.yearFrom !== null || f.yearTo !== null) {
    parts.push(
      `<span class="filter-tag">years: ${f.yearFrom ?? "…"}–${f.yearTo ?? "…"}</span>`,
    );
  }
  if (f.author) parts.push(`<span class="filter-tag">author: ${escapeHtml(f.author)}</span>`);
  for (const e of f.entities) {
    parts.push(
      `<button type="button" class="filter-tag entity-filter" data-entity="${attr(encodeEntity(e))}">` +
        `${escapeHtml(e.kind)}: ${escapeHtml(e.canonical)} ✕</button>`,
    );
  }
  if (parts.length === 0) return "";
  return `<div class="active-filters">${parts.join("")}</div>`;
}

export function renderResults(response: SearchResponse, state: AppState): string {
  if (response.results.length === 0) {
    return `<p class="no-results">No papers matched.</p>`;
  }
  const rows = response.results
    .map((hit, i) => {
      const meta = [hit.venue ?? "", hit.year !== null && hit.year !== undefined ? String(hit.year) : ""]
        .filter((s) => s !== "")
        .join(", ");
      return (
        `<li class="result" data-paper-id="${attr(hit.paper_id)}">` +
        `<span class="result-rank" data-provenance="computed">${i + 1}</span>` +
        `<a class="result-title" data-provenance="extracted" href="${attr(paperHref(state, hit.paper_id))}">` +
        `${escapeHtml(hit.title)}</a>` +
        (meta ? ` <span class="result-meta" data-provenance="extracted">(${escapeHtml(meta)})</span>` : "") +
        ` <span class="result-score" data-provenance="computed">${hit.score.toFixed(3)}</span>` +
        `</li>`
      );
    })
    .join("");
  const origin = response.profile_origin
    ? `<p class="profile-origin" data-provenance="computed">query profile: ${escapeHtml(response.profile_origin)}</p>`
    : "";
  return `${origin}<ol id="result-list" class="result-list">${rows}</ol>`;
}

export function renderError(status: number, detail: string): string {
  return `<p class="api-error" role="alert">Error ${status}: ${escapeHtml(detail)}</p>`;
}

export function renderSearchView(
  state: AppState,
  response: SearchResponse | null,
  error: { status: number; detail: string } | null = null,
): string {
  const body =
    error !== null
      ? renderError(error.status, error.detail)
      : response !== null
        ? renderResults(response, state)
        : `<p class="hint">Enter a query or pick a facet to explore the corpus.</p>`;
  const facets = response !== null ? renderFacetPanel(response.facets, state) : "";
  return [
    `<div id="search-view" class="view">`,
    renderSearchForm(state),
    renderActiveFilters(state),
    `<div class="columns">${facets}<main class="results-main">${body}</main></div>`,
    `</div>`,
  ].join("");
}

function objectiveTable(objective: SummarizeResponse["sections"][number]["objective"]): string {
  const rows = (Object.entries(objective) as [string, number][])
    .map(
      ([name, value]) =>
        `<tr><th>${escapeHtml(name)}</th><td>${value.toFixed(4)}</td></tr>`,
    )
    .join("");
  return `<table class="objective" data-provenance="computed"><tbody>${rows}</tbody></table>`;
}

export function renderSectionPanel(
  section: SummarizeResponse["sections"][number],
  open: boolean,
): string {
  const sentences = section.sentences
    .map(
      (s) =>
        `<li class="summary-sentence" data-provenance="computed">${escapeHtml(s)}</li>`,
    )
    .join("");
  const chips = section.entities.map((e) => entityChip(e.kind, e.canonical)).join("");
  return [
    `<details class="section-panel" data-section-id="${section.section_id}"${open ? " open" : ""}>`,
    `<summary class="section-title" data-provenance="extracted">${escapeHtml(section.title)}</summary>`,
    `<ul class="section-summary">${sentences}</ul>`,
    chips ? `<div class="section-entities">${chips}</div>` : "",
    objectiveTable(section.objective),
    `</details>`,
  ].join("");
}

export function renderPaperView(
  paper: PaperResponse,
  summary: SummarizeResponse,
  state: AppState,
): string {
  const meta = [
    paper.authors.join(", "),
    paper.venue ?? "",
    paper.year !== null && paper.year !== undefined ? String(paper.year) : "",
  ]
    .filter((s) => s !== "")
    .join(" · ");
  const panels = summary.sections
    .map((sec, i) => renderSectionPanel(sec, i === 0))
    .join("");
  const figures = paper.figures
    .map(
      (fig) =>
        `<figure class="figure-ref" data-provenance="extracted">` +
        `<figcaption><strong>${escapeHtml(fig.ref_id)}</strong> ${escapeHtml(fig.caption)}</figcaption></figure>`,
    )
    .join("");
  const back = `?${encodeStateForBack(state)}`;
  return [
    `<div id="paper-view" class="view" data-paper-id="${attr(paper.id)}">`,
    `<nav><a id="back-link" href="${attr(back)}">← back to results</a></nav>`,
    `<h1 class="paper-title" data-provenance="extracted">${escapeHtml(paper.title)}</h1>`,
    meta ? `<p class="paper-meta" data-provenance="extracted">${escapeHtml(meta)}</p>` : "",
    paper.abstract
      ? `<p class="paper-abstract" data-provenance="extracted">${escapeHtml(paper.abstract)}</p>`
      : "",
    `<p class="profile-origin" data-provenance="computed">summary profile: ${escapeHtml(summary.profile_origin)}</p>`,
    `<div class="section-panels">${panels}</div>`,
    figures ? `<div class="figures">${figures}</div>` : "",
    `</div>`,
  ].join("");
}

function encodeStateForBack(state: AppState): string {
  const params = new URLSearchParams();
  if (state.query) params.set("q", state.query);
  if (state.filters.venue) params.set("venue", state.filters.venue);
  if (state.filters.yearFrom !== null) params.set("year_from", String(state.filters.yearFrom));
  if (state.filters.yearTo !== null) params.set("year_to", String(state.filters.yearTo));
  if (state.filters.author) params.set("author", state.filters.author);
  for (const e of state.filters.entities) params.append("entity", encodeEntity(e));
  return params.toString();
}

export function renderNotFound(paperId: string): string {
  return (
    `<div id="paper-view" class="view">` +
    `<p class="api-error" role="alert">Paper not found: ${escapeHtml(paperId)}</p>` +
    `<nav><a id="back-link" href="?">← back to search</a></nav></div>`
  );
}
