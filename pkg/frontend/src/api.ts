/**
 * Thin typed client for the scisumm JSON API.
 *
 * Responses are validated with zod before they reach any view code; HTTP
 * error statuses become ApiError so views can render inline messages.
 */

import {
  PaperResponseSchema,
  SearchResponseSchema,
  SummarizeResponseSchema,
  type PaperResponse,
  type SearchResponse,
  type SummarizeResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

async function readDetail(res: Response): Promise<string> {
  try {
    const body = (await res.json()) as { detail?: unknown };
    if (typeof body.detail === "string") return body.detail;
    return JSON.stringify(body.detail ?? body);
  } catch {
    return res.statusText || "request failed";
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async post(path: string, body: unknown): Promise<unknown> {
    const res = await this.fetchFn(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!res.ok) throw new ApiError(res.status, await readDetail(res));
    return res.json();
  }

  private async get(path: string): Promise<unknown> {
    const res = await this.fetchFn(`${this.baseUrl}${path}`);
    if (!res.ok) throw new ApiError(res.status, await readDetail(res));
    return res.json();
  }

  async search(body: Record<string, unknown>): Promise<SearchResponse> {
    return SearchResponseSchema.parse(await this.post("/api/search", body));
  }

  async summarize(paperId: string, query: string, length?: number): Promise<SummarizeResponse> {
    const body: Record<string, unknown> = { paper_id: paperId };
    if (query.trim()) body.query = query.trim();
    if (length !== undefined) body.length = length;
    return SummarizeResponseSchema.parse(await this.post("/api/summarize", body));
  }

  async getPaper(paperId: string): Promise<PaperResponse> {
    return PaperResponseSchema.parse(await this.get(`/api/papers/${encodeURIComponent(paperId)}`));
  }
}
