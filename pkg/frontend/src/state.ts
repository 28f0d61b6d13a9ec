/**
 * URL-encoded application state.
 *
 * Every view is reconstructible from its query string, so exploration
 * state (query, filters, open paper) is shareable as a plain link.
 */

import type { EntityKey } from "./types.js";

export interface Filters {
  venue: string | null;
  yearFrom: number | null;
  yearTo: number | null;
  author: string | null;
  entities: EntityKey[];
}

export interface AppState {
  /** "search" renders the result list; "paper" renders one paper page. */
  view: "search" | "paper";
  query: string;
  filters: Filters;
  paperId: string | null;
}

export function emptyFilters(): Filters {
  return { venue: null, yearFrom: null, yearTo: null, author: null, entities: [] };
}

export function emptyState(): AppState {
  return { view: "search", query: "", filters: emptyFilters(), paperId: null };
}

export function hasFilters(f: Filters): boolean {
  return (
    f.venue !== null ||
    f.yearFrom !== null ||
    f.yearTo !== null ||
    f.author !== null ||
    f.entities.length > 0
  );
}

/** True when a search request would be rejected as empty by the API. */
export function isEmptyRequest(state: AppState): boolean {
  return state.query.trim() === "" && !hasFilters(state.filters);
}

/** Entity encoding used inside the URL: "Kind:Canonical". */
export function encodeEntity(e: EntityKey): string {
  return `${e.kind}:${e.canonical}`;
}

export function decodeEntity(raw: string): EntityKey | null {
  const i = raw.indexOf(":");
  if (i <= 0 || i === raw.length - 1) return null;
  return { kind: raw.slice(0, i), canonical: raw.slice(i + 1) };
}

/** Serialize state to a query string (no leading "?"); stable key order. */
export function encodeState(state: AppState): string {
  const params = new URLSearchParams();
  if (state.view === "paper" && state.paperId) params.set("paper", state.paperId);
  if (state.query) params.set("q", state.query);
  const f = state.filters;
  if (f.venue) params.set("venue", f.venue);
  if (f.yearFrom !== null) params.set("year_from", String(f.yearFrom));
  if (f.yearTo !== null) params.set("year_to", String(f.yearTo));
  if (f.author) params.set("author", f.author);
  for (const e of f.entities) params.append("entity", encodeEntity(e));
  return params.toString();
}

/** Parse a query string (with or without leading "?") back into state. */
export function parseState(search: string): AppState {
  const params = new URLSearchParams(search.startsWith("?") ? search.slice(1) : search);
  const state = emptyState();
  state.query = params.get("q") ?? "";
  state.filters.venue = params.get("venue");
  state.filters.author = params.get("author");
  const yearFrom = params.get("year_from");
  const yearTo = params.get("year_to");
  state.filters.yearFrom = yearFrom !== null && /^-?\d+$/.test(yearFrom) ? Number(yearFrom) : null;
  state.filters.yearTo = yearTo !== null && /^-?\d+$/.test(yearTo) ? Number(yearTo) : null;
  for (const raw of params.getAll("entity")) {
    const e = decodeEntity(raw);
    if (e) state.filters.entities.push(e);
  }
  const paper = params.get("paper");
  if (paper) {
    state.view = "paper";
    state.paperId = paper;
  }
  return state;
}

/** State with one entity filter toggled on/off (used by facet clicks and chips). */
export function toggleEntity(state: AppState, e: EntityKey): AppState {
  const present = state.filters.entities.some(
    (x) => x.kind === e.kind && x.canonical === e.canonical,
  );
  const entities = present
    ? state.filters.entities.filter((x) => !(x.kind === e.kind && x.canonical === e.canonical))
    : [...state.filters.entities, e];
  return {
    ...state,
    view: "search",
    paperId: null,
    filters: { ...state.filters, entities },
  };
}

/** Href for a search view filtered to exactly one entity (entity-chip target). */
export function entitySearchHref(e: EntityKey): string {
  const params = new URLSearchParams();
  params.append("entity", encodeEntity(e));
  return `?${params.toString()}`;
}

/** Href that opens a paper while preserving the current search context. */
export function paperHref(state: AppState, paperId: string): string {
  const next: AppState = { ...state, view: "paper", paperId };
  return `?${encodeState(next)}`;
}

/** Build the /api/search request body for the current state. */
export function toSearchRequest(state: AppState, k = 20): Record<string, unknown> {
  const filters: Record<string, unknown> = {};
  const f = state.filters;
  if (f.venue) filters.venue = f.venue;
  if (f.yearFrom !== null || f.yearTo !== null) {
    filters.year_range = [f.yearFrom ?? -1000000, f.yearTo ?? 1000000];
  }
  if (f.author) filters.author = f.author;
  if (f.entities.length > 0) filters.entities = f.entities.map((e) => [e.kind, e.canonical]);
  const body: Record<string, unknown> = { k };
  if (state.query.trim()) body.query = state.query.trim();
  if (Object.keys(filters).length > 0) body.filters = filters;
  return body;
}
