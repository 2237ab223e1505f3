"""Ingestion of "The Movies Dataset" CSV files.

Reads ratings.csv (or ratings_small.csv), movies_metadata.csv and
links.csv, joins movie features onto rating events via the links table,
and produces deterministic per-user experiment samples. The metadata file
is famously messy (quasi-JSON genre fields, shifted rows, blank numerics),
so parsing is tolerant: bad rows are skipped and counted, never fatal
unless the whole file is unusable.
"""

from __future__ import annotations

import csv
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .encoding import MovieFeatures, OTHER_LANGUAGE, RATING_VALUES
from .errors import FormatError

DATA_DIR_ENV = "WNNREC_DATA_DIR"
RATINGS_ENV = "WNNREC_RATINGS_CSV"
METADATA_ENV = "WNNREC_METADATA_CSV"
LINKS_ENV = "WNNREC_LINKS_CSV"

_GENRE_NAME = re.compile(r"""['"]name['"]\s*:\s*['"]([^'"]+)['"]""")


class RatingEvent(NamedTuple):
    user_id: int
    movie_id: int
    rating: float
    timestamp: int


@dataclass
class SkipCounts:
    """Counters populated while streaming a ratings file."""

    total_rows: int = 0
    malformed: int = 0
    out_of_domain: int = 0


@dataclass(frozen=True)
class UserHistory:
    """One user's rating events, chronologically ordered and movie-deduped."""

    user_id: int
    events: tuple[RatingEvent, ...]

    @classmethod
    def from_events(cls, user_id: int, events: Iterable[RatingEvent]) -> "UserHistory":
        ordered = sorted(events, key=lambda e: (e.timestamp, e.movie_id))
        latest: dict[int, RatingEvent] = {}
        for e in ordered:
            latest[e.movie_id] = e  # later (timestamp, movie_id) wins
        kept = sorted(latest.values(), key=lambda e: (e.timestamp, e.movie_id))
        return cls(user_id=user_id, events=tuple(kept))

    def __len__(self) -> int:
        return len(self.events)


@dataclass
class Catalog:
    """Movie features keyed by the ratings-file movie id."""

    features: dict[int, MovieFeatures]
    titles: dict[int, str]
    metadata_ids: dict[int, int]  # ratings movie id -> metadata (TMDB) id
    dropped_rows: int = 0

    def __contains__(self, movie_id: int) -> bool:
        return movie_id in self.features

    def __len__(self) -> int:
        return len(self.features)


def load_ratings(path: str | Path, counts: SkipCounts | None = None) -> Iterator[RatingEvent]:
    """Stream rating events from a ratings CSV.

    Malformed rows and off-grid ratings are skipped and counted in
    `counts`. Raises FileNotFoundError for a missing file and FormatError
    (at stream end) when the file is empty or >10% of rows are malformed.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"ratings file not found: {path}")
    if counts is None:
        counts = SkipCounts()

    def events() -> Iterator[RatingEvent]:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            for row in reader:
                if not row or (row[0].strip().lower() == "userid"):
                    continue
                counts.total_rows += 1
                try:
                    user = int(row[0])
                    movie = int(row[1])
                    rating = float(row[2])
                    ts = int(float(row[3]))
                except (IndexError, ValueError):
                    counts.malformed += 1
                    continue
                if rating not in RATING_VALUES:
                    counts.out_of_domain += 1
                    continue
                yield RatingEvent(user, movie, rating, ts)
        if counts.total_rows == 0:
            raise FormatError(f"{path} contains no data rows")
        if counts.malformed > 0.10 * counts.total_rows:
            raise FormatError(
                f"{path}: {counts.malformed}/{counts.total_rows} rows malformed (>10%)"
            )

    return events()


def parse_genres(text: str) -> frozenset[str]:
    """Pull genre names out of the metadata's quasi-record genre field."""
    if not text:
        return frozenset()
    return frozenset(_GENRE_NAME.findall(text))


def load_catalog(metadata_path: str | Path, links_path: str | Path) -> Catalog:
    """Join movies_metadata.csv features onto ratings movie ids via links.csv.

    Rows that fail to parse or to join are dropped and counted. Missing
    vote fields default to 0 / 0.0, missing language to "other".
    """
    metadata_path = Path(metadata_path)
    links_path = Path(links_path)
    for p in (metadata_path, links_path):
        if not p.exists():
            raise FileNotFoundError(f"catalog file not found: {p}")

    tmdb_to_movie: dict[int, int] = {}
    with open(links_path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            try:
                movie_id = int(row["movieId"])
                tmdb_id = int(row["tmdbId"])
            except (KeyError, TypeError, ValueError):
                continue
            tmdb_to_movie.setdefault(tmdb_id, movie_id)

    features: dict[int, MovieFeatures] = {}
    titles: dict[int, str] = {}
    metadata_ids: dict[int, int] = {}
    dropped = 0
    with open(metadata_path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            try:
                tmdb_id = int(row["id"])
            except (KeyError, TypeError, ValueError):
                dropped += 1
                continue
            movie_id = tmdb_to_movie.get(tmdb_id)
            if movie_id is None or movie_id in features:
                dropped += 1
                continue
            try:
                vote_count = int(float(row.get("vote_count") or 0))
                vote_average = float(row.get("vote_average") or 0.0)
            except ValueError:
                dropped += 1
                continue
            if vote_count < 0 or not 0.0 <= vote_average <= 10.0:
                dropped += 1
                continue
            features[movie_id] = MovieFeatures(
                genres=parse_genres(row.get("genres") or ""),
                vote_count=vote_count,
                vote_average=vote_average,
                language=(row.get("original_language") or "").strip() or OTHER_LANGUAGE,
            )
            titles[movie_id] = (row.get("title") or row.get("original_title") or "").strip()
            metadata_ids[movie_id] = tmdb_id
    return Catalog(features=features, titles=titles, metadata_ids=metadata_ids, dropped_rows=dropped)


def sample_users(
    events: Iterable[RatingEvent],
    catalog: Catalog,
    n_users: int,
    min_events: int,
    seed: int = 0,
) -> list[UserHistory]:
    """Select n_users uniformly among users with enough joinable events.

    Eligibility counts a user's catalog-joinable, deduped events (what the
    returned history will actually hold). Returns histories in ascending
    user-id order.
    """
    if n_users < 1:
        raise ValueError("n_users must be positive")
    per_user: dict[int, list[RatingEvent]] = {}
    for e in events:
        if e.movie_id in catalog:
            per_user.setdefault(e.user_id, []).append(e)
    histories = {
        uid: h for uid, evs in per_user.items() if len(h := UserHistory.from_events(uid, evs)) >= min_events
    }
    eligible = sorted(histories)
    if len(eligible) < n_users:
        raise ValueError(
            f"only {len(eligible)} users have >= {min_events} joinable events, need {n_users}"
        )
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(eligible), size=n_users, replace=False)
    return [histories[eligible[i]] for i in sorted(int(i) for i in chosen)]


def split_history(
    history: UserHistory, train_n: int, test_cap: int
) -> tuple[tuple[RatingEvent, ...], tuple[RatingEvent, ...]]:
    """Chronological split: first train_n events train, next <=test_cap test."""
    if train_n < 1 or test_cap < 1:
        raise ValueError("train_n and test_cap must be positive")
    if len(history) < train_n + 1:
        raise ValueError(
            f"user {history.user_id} has {len(history)} events, needs at least {train_n + 1}"
        )
    return history.events[:train_n], history.events[train_n : train_n + test_cap]


def resolve_paths(
    ratings: str | Path | None = None,
    metadata: str | Path | None = None,
    links: str | Path | None = None,
) -> tuple[Path, Path, Path]:
    """Resolve dataset file paths from arguments, env vars, or a data dir.

    Precedence per file: explicit argument, its env var, then
    $WNNREC_DATA_DIR/<name> (ratings.csv falling back to
    ratings_small.csv).
    """
    data_dir = os.environ.get(DATA_DIR_ENV)

    def pick(value, env, names) -> Path:
        if value:
            return Path(value)
        if os.environ.get(env):
            return Path(os.environ[env])
        if data_dir:
            for name in names:
                candidate = Path(data_dir) / name
                if candidate.exists():
                    return candidate
            return Path(data_dir) / names[0]
        raise FileNotFoundError(
            f"no path for {names[0]}: pass it explicitly, set ${env}, or set ${DATA_DIR_ENV}"
        )

    return (
        pick(ratings, RATINGS_ENV, ["ratings.csv", "ratings_small.csv"]),
        pick(metadata, METADATA_ENV, ["movies_metadata.csv"]),
        pick(links, LINKS_ENV, ["links.csv"]),
    )
