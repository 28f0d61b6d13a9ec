/**
 * DOM bootstrap: reads state from the URL, fetches from the API, and mounts
 * the rendered views. All rendering lives in render.ts; this file only owns
 * events, navigation, and the latest-wins request guard.
 */

import { ApiClient, ApiError } from "./api.js";
import {
  renderNotFound,
  renderPaperView,
  renderSearchView,
} from "./render.js";
import {
  decodeEntity,
  encodeState,
  isEmptyRequest,
  parseState,
  toggleEntity,
  toSearchRequest,
  type AppState,
} from "./state.js";

const api = new ApiClient("");
const root = document.getElementById("app") as HTMLElement;

// Monotonic ticket so a slow response never overwrites a newer view.
let requestSeq = 0;

function navigate(state: AppState): void {
  const qs = encodeState(state);
  history.pushState(null, "", qs ? `?${qs}` : location.pathname);
  void render(state);
}

async function render(state: AppState): Promise<void> {
  const ticket = ++requestSeq;
  if (state.view === "paper" && state.paperId) {
    try {
      const [paper, summary] = await Promise.all([
        api.getPaper(state.paperId),
        api.summarize(state.paperId, state.query),
      ]);
      if (ticket !== requestSeq) return;
      root.innerHTML = renderPaperView(paper, summary, state);
    } catch (err) {
      if (ticket !== requestSeq) return;
      if (err instanceof ApiError && err.status === 404) {
        root.innerHTML = renderNotFound(state.paperId);
      } else {
        throw err;
      }
    }
    return;
  }

  if (isEmptyRequest(state)) {
    root.innerHTML = renderSearchView(state, null);
    return;
  }
  try {
    const response = await api.search(toSearchRequest(state));
    if (ticket !== requestSeq) return;
    root.innerHTML = renderSearchView(state, response);
  } catch (err) {
    if (ticket !== requestSeq) return;
    if (err instanceof ApiError) {
      root.innerHTML = renderSearchView(state, null, { status: err.status, detail: err.detail });
    } else {
      throw err;
    }
  }
}

function currentState(): AppState {
  return parseState(location.search);
}

root.addEventListener("submit", (ev) => {
  const form = ev.target as HTMLElement;
  if (form.id !== "search-form") return;
  ev.preventDefault();
  const input = document.getElementById("search-input") as HTMLInputElement;
  const state = currentState();
  navigate({ ...state, view: "search", paperId: null, query: input.value });
});

root.addEventListener("click", (ev) => {
  const target = (ev.target as HTMLElement).closest<HTMLElement>("[data-entity], a[href^='?']");
  if (!target) return;
  const encoded = target.dataset.entity;
  if (encoded !== undefined && target.tagName === "BUTTON") {
    // Facet option or active-filter tag: toggle the entity in place.
    const entity = decodeEntity(encoded);
    if (entity) navigate(toggleEntity(currentState(), entity));
    return;
  }
  if (target.tagName === "A") {
    // Internal links (results, entity chips, back link) stay in the SPA.
    ev.preventDefault();
    navigate(parseState(target.getAttribute("href") ?? ""));
  }
});

window.addEventListener("popstate", () => void render(currentState()));

void render(currentState());
