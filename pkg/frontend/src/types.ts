/** Wire types of the recommender service's JSON API. */

export interface MovieSummary {
  movie_id: number;
  title: string;
  genres: string[];
  vote_average: number;
}

export interface Recommendation {
  movie_id: number;
  title: string;
  predicted_rating: number;
}

export interface MemoryEntry {
  pair_id: number;
  movie_id: number | null;
  title: string;
  rating: number;
  timestamp: number;
}

export interface RateResponse {
  pair_id: number;
  predicted_rating: number;
}

export interface ServiceError {
  error: string;
  message: string;
}

/** Everything the screen shows; rebuilt entirely from service GETs. */
export interface SessionView {
  agentId: string;
  recommendations: Recommendation[];
  memory: MemoryEntry[];
  /** Per-movie predictions the user has asked about (movie_id -> rating). */
  predictions: Map<number, number>;
}
