"""Synthetic stand-in for "The Movies Dataset" files.

Writes ratings.csv, movies_metadata.csv and links.csv in the real files'
schema, with seeded users whose ratings follow latent genre preferences,
so the whole pipeline (ingestion, encoding, training, benchmarking, the
service) can run end-to-end without the real download. It is NOT the real
dataset and benchmark numbers on it do not reproduce the reference table.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

GENRES = [
    "Drama", "Comedy", "Action", "Thriller", "Romance", "Horror",
    "Adventure", "Crime", "Science Fiction", "Family", "Documentary", "War",
]
LANGUAGES = ["en", "fr", "es", "de", "it", "ja", "ko", "pt", "ru"]
LANGUAGE_WEIGHTS = [0.55, 0.09, 0.08, 0.07, 0.06, 0.05, 0.04, 0.03, 0.03]

_SNAP = np.arange(0.5, 5.01, 0.5)


def _snap_rating(x: float) -> float:
    return float(_SNAP[np.argmin(np.abs(_SNAP - x))])


def write_synthetic_dataset(
    out_dir: str | Path,
    n_movies: int = 400,
    n_users: int = 60,
    events_per_user: tuple[int, int] = (40, 90),
    seed: int = 7,
) -> Path:
    """Generate the three CSVs under `out_dir` and return that directory.

    Each user carries a latent affinity per genre; their rating of a movie
    is a noisy affine function of the movie's genres, snapped to the
    half-star grid, emitted with increasing timestamps.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    genre_sets = []
    languages = []
    vote_counts = []
    vote_averages = []
    for _ in range(n_movies):
        k = int(rng.integers(1, 4))
        genre_sets.append(sorted(rng.choice(GENRES, size=k, replace=False)))
        languages.append(str(rng.choice(LANGUAGES, p=LANGUAGE_WEIGHTS)))
        vote_counts.append(int(rng.lognormal(mean=4.0, sigma=1.4)))
        vote_averages.append(float(np.clip(rng.normal(6.0, 1.4), 0.5, 9.5)))

    with open(out / "movies_metadata.csv", "w", encoding="utf-8") as fh:
        fh.write("adult,genres,id,original_language,original_title,title,vote_average,vote_count\n")
        for m in range(n_movies):
            genres = "[" + ", ".join("{'id': %d, 'name': '%s'}" % (GENRES.index(g) + 1, g) for g in genre_sets[m]) + "]"
            fh.write(
                f'False,"{genres}",{70000 + m},{languages[m]},'
                f"Movie {m},Movie {m},{vote_averages[m]:.1f},{vote_counts[m]}\n"
            )

    with open(out / "links.csv", "w", encoding="utf-8") as fh:
        fh.write("movieId,imdbId,tmdbId\n")
        for m in range(n_movies):
            fh.write(f"{m + 1},{m + 1:07d},{70000 + m}\n")

    genre_idx = {g: i for i, g in enumerate(GENRES)}
    with open(out / "ratings.csv", "w", encoding="utf-8") as fh:
        fh.write("userId,movieId,rating,timestamp\n")
        for u in range(1, n_users + 1):
            affinity = rng.uniform(-1.0, 1.0, size=len(GENRES))
            n_events = int(rng.integers(events_per_user[0], events_per_user[1] + 1))
            movies = rng.choice(n_movies, size=min(n_events, n_movies), replace=False)
            ts = int(rng.integers(1_000_000_000, 1_100_000_000))
            for m in movies:
                mean_aff = float(np.mean([affinity[genre_idx[g]] for g in genre_sets[m]]))
                raw = 3.1 + 1.7 * mean_aff + rng.normal(0.0, 0.35)
                fh.write(f"{u},{m + 1},{_snap_rating(raw)},{ts}\n")
                ts += int(rng.integers(60, 90_000))

    return out
