import { ApiError, type RecommenderApi } from "./api.js";
import type { SessionView } from "./types.js";

export type SessionListener = (session: SessionStore) => void;

/**
 * The single source of screen state. It owns no model state: everything
 * in `view` is refetched from the service after every mutation, so a
 * hard refresh rebuilds the identical screen. At most one mutation is in
 * flight; callers should disable inputs while `busy` is true.
 */
export class SessionStore {
  view: SessionView | null = null;
  busy = false;
  error: string | null = null;

  private listeners: SessionListener[] = [];

  constructor(
    private readonly api: RecommenderApi,
    private readonly recommendationCount = 10,
  ) {}

  onChange(listener: SessionListener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this);
  }

  /** Create a fresh agent and pull its (empty) state. */
  async start(): Promise<void> {
    const { agent_id } = await this.api.createAgent();
    this.view = { agentId: agent_id, recommendations: [], memory: [], predictions: new Map() };
    await this.refresh();
  }

  /** Attach to an existing agent (e.g. after a page reload). */
  async resume(agentId: string): Promise<void> {
    this.view = { agentId, recommendations: [], memory: [], predictions: new Map() };
    await this.refresh();
  }

  /** Rebuild the whole view from service GETs. */
  async refresh(extraMovieIds: number[] = []): Promise<void> {
    const view = this.requireView();
    const [recommendations, memory] = await Promise.all([
      this.api.recommendations(view.agentId, this.recommendationCount),
      this.api.memory(view.agentId),
    ]);
    const watched = new Set<number>([...view.predictions.keys(), ...extraMovieIds]);
    const predictions = new Map<number, number>();
    await Promise.all(
      [...watched].map(async (movieId) => {
        const { rating } = await this.api.prediction(view.agentId, movieId);
        predictions.set(movieId, rating);
      }),
    );
    view.recommendations = recommendations;
    view.memory = memory;
    view.predictions = predictions;
    this.error = null;
    this.emit();
  }

  /** POST a rating, then refetch; the screen never shows optimistic values. */
  async rate(movieId: number, rating: number): Promise<void> {
    const view = this.requireView();
    await this.mutate(async () => {
      await this.api.rate(view.agentId, movieId, rating);
      await this.refresh([movieId]);
    });
  }

  /** DELETE one memory pair, then refetch; the movie's prediction reverts. */
  async forget(pairId: number): Promise<void> {
    const view = this.requireView();
    const entry = view.memory.find((m) => m.pair_id === pairId);
    await this.mutate(async () => {
      try {
        await this.api.deletePair(view.agentId, pairId);
      } catch (err) {
        if (err instanceof ApiError && err.status === 404) {
          await this.refresh(); // stale mirror: resync instead of failing
          return;
        }
        throw err;
      }
      await this.refresh(entry?.movie_id != null ? [entry.movie_id] : []);
    });
  }

  private async mutate(action: () => Promise<void>): Promise<void> {
    if (this.busy) {
      throw new Error("another change is still in flight");
    }
    this.busy = true;
    this.emit();
    try {
      await action();
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
      throw err;
    } finally {
      this.busy = false;
      this.emit();
    }
  }

  private requireView(): SessionView {
    if (!this.view) {
      throw new Error("session not started");
    }
    return this.view;
  }
}
