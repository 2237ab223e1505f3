import type { MemoryEntry, MovieSummary, RateResponse, Recommendation } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** What the UI needs from the service; ApiClient is the HTTP implementation. */
export interface RecommenderApi {
  createAgent(overrides?: Record<string, unknown>): Promise<{ agent_id: string }>;
  searchMovies(query: string, limit?: number): Promise<MovieSummary[]>;
  rate(agentId: string, movieId: number, rating: number): Promise<RateResponse>;
  prediction(agentId: string, movieId: number): Promise<{ rating: number }>;
  recommendations(agentId: string, n?: number): Promise<Recommendation[]>;
  memory(agentId: string): Promise<MemoryEntry[]>;
  deletePair(agentId: string, pairId: number): Promise<{ deleted: number }>;
}

/** Thin typed client over the service's JSON routes. */
export class ApiClient implements RecommenderApi {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    } catch (err) {
      throw new ApiError(0, "unreachable", `service unreachable: ${String(err)}`);
    }
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      throw new ApiError(response.status, body.error ?? "error", body.message ?? response.statusText);
    }
    return body as T;
  }

  createAgent(overrides?: Record<string, unknown>): Promise<{ agent_id: string }> {
    return this.request("/agents", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(overrides ?? {}),
    });
  }

  searchMovies(query: string, limit = 20): Promise<MovieSummary[]> {
    const params = new URLSearchParams({ q: query, limit: String(limit) });
    return this.request(`/movies?${params}`);
  }

  rate(agentId: string, movieId: number, rating: number): Promise<RateResponse> {
    return this.request(`/agents/${agentId}/ratings`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ movie_id: movieId, rating }),
    });
  }

  prediction(agentId: string, movieId: number): Promise<{ rating: number }> {
    return this.request(`/agents/${agentId}/predictions/${movieId}`);
  }

  recommendations(agentId: string, n = 10): Promise<Recommendation[]> {
    return this.request(`/agents/${agentId}/recommendations?n=${n}`);
  }

  memory(agentId: string): Promise<MemoryEntry[]> {
    return this.request(`/agents/${agentId}/memory`);
  }

  deletePair(agentId: string, pairId: number): Promise<{ deleted: number }> {
    return this.request(`/agents/${agentId}/memory/${pairId}`, { method: "DELETE" });
  }
}
