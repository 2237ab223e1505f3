"""Bit-level codecs between movie features / ratings and fixed-width codes.

The input code is 26 bits: a 10-bit genre multi-hot, a 10-bit thermometer
over review counts, a 3-bit thermometer over average rating, and a 3-bit
language-bucket index. The output code is 10 bits: a cumulative (prefix of
ones) encoding of the half-star rating, so Hamming distance between codes
tracks ordinal distance between ratings.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .bitops import as_bits
from .errors import FormatError

RATING_VALUES: tuple[float, ...] = tuple(k / 2 for k in range(1, 11))

RATING_BITS = 10
GENRE_BITS = 10
REVIEW_BITS = 10
AVG_RATING_BITS = 3
LANGUAGE_BITS = 3
MOVIE_BITS = GENRE_BITS + REVIEW_BITS + AVG_RATING_BITS + LANGUAGE_BITS

OTHER_LANGUAGE = "other"

# Pad labels contain NUL so no real genre string can ever match them.
_GENRE_PAD = "\x00pad{}"


def validate_rating(value: float) -> float:
    """Return `value` if it lies on the 0.5..5.0 half-star grid, else raise."""
    v = float(value)
    if v not in RATING_VALUES:
        raise ValueError(f"rating {value!r} is not on the 0.5-5.0 half-star grid")
    return v


def encode_rating(rating: float) -> np.ndarray:
    """Cumulative 10-bit code: the first 2r bits are 1, the rest 0."""
    r = validate_rating(rating)
    code = np.zeros(RATING_BITS, dtype=np.uint8)
    code[: int(round(2 * r))] = 1
    return code


def decode_rating(code: Sequence[int] | np.ndarray) -> float:
    """Popcount/2 of a 10-bit code, clamped to the valid rating range.

    Robust to non-cumulative codes (predicted output vectors need not be
    clean prefixes); round-trips encode_rating exactly on clean codes.
    """
    bits = as_bits(code, RATING_BITS)
    return min(max(int(bits.sum()) / 2, 0.5), 5.0)


def is_accurate(predicted: float, actual: float, tolerance: float = 1.0) -> bool:
    """Whether a prediction lands within +-tolerance of the actual rating."""
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    return abs(float(predicted) - float(actual)) <= tolerance


@dataclass(frozen=True)
class MovieFeatures:
    """The four feature channels the encoder consumes."""

    genres: frozenset[str]
    vote_count: int
    vote_average: float
    language: str

    def __post_init__(self):
        object.__setattr__(self, "genres", frozenset(self.genres))
        if self.vote_count < 0:
            raise ValueError("vote_count must be non-negative")
        if not 0.0 <= self.vote_average <= 10.0:
            raise ValueError("vote_average must be in [0, 10]")


@dataclass(frozen=True)
class EncoderConfig:
    """Corpus-fitted parameters mapping MovieFeatures to the 26-bit code.

    Immutable after fit; all threshold sequences are strictly increasing.
    """

    genre_vocab: tuple[str, ...]
    review_count_thresholds: tuple[int, ...]
    avg_rating_thresholds: tuple[float, ...]
    language_buckets: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "genre_vocab", tuple(self.genre_vocab))
        object.__setattr__(self, "review_count_thresholds", tuple(int(t) for t in self.review_count_thresholds))
        object.__setattr__(self, "avg_rating_thresholds", tuple(float(t) for t in self.avg_rating_thresholds))
        object.__setattr__(self, "language_buckets", tuple(self.language_buckets))
        if len(self.genre_vocab) != GENRE_BITS:
            raise ValueError(f"genre_vocab must have exactly {GENRE_BITS} labels")
        if len(self.review_count_thresholds) != REVIEW_BITS:
            raise ValueError(f"need {REVIEW_BITS} review-count thresholds")
        if len(self.avg_rating_thresholds) != AVG_RATING_BITS:
            raise ValueError(f"need {AVG_RATING_BITS} avg-rating thresholds")
        if not 1 <= len(self.language_buckets) <= 2**LANGUAGE_BITS:
            raise ValueError(f"language_buckets must hold 1..{2**LANGUAGE_BITS} labels")
        if len(set(self.language_buckets)) != len(self.language_buckets):
            raise ValueError("language_buckets must be unique")
        for seq, name in (
            (self.review_count_thresholds, "review_count_thresholds"),
            (self.avg_rating_thresholds, "avg_rating_thresholds"),
        ):
            if any(b <= a for a, b in zip(seq, seq[1:])):
                raise ValueError(f"{name} must be strictly increasing")
        if any(t < 0 for t in self.review_count_thresholds):
            raise ValueError("review_count_thresholds must be non-negative")
        if any(not 0.0 < t < 10.0 for t in self.avg_rating_thresholds):
            raise ValueError("avg_rating_thresholds must lie in (0, 10)")

    def to_json(self) -> str:
        doc = {
            "version": "encoder-v1",
            "genre_vocab": list(self.genre_vocab),
            "review_count_thresholds": list(self.review_count_thresholds),
            "avg_rating_thresholds": list(self.avg_rating_thresholds),
            "language_buckets": list(self.language_buckets),
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "EncoderConfig":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise FormatError(f"encoder config is not valid JSON: {e}") from e
        if not isinstance(doc, dict) or doc.get("version") != "encoder-v1":
            raise FormatError("expected an encoder-v1 document")
        try:
            return cls(
                genre_vocab=doc["genre_vocab"],
                review_count_thresholds=doc["review_count_thresholds"],
                avg_rating_thresholds=doc["avg_rating_thresholds"],
                language_buckets=doc["language_buckets"],
            )
        except (KeyError, TypeError, ValueError) as e:
            raise FormatError(f"bad encoder config: {e}") from e


def _nearest_rank(sorted_values: Sequence, fraction: float):
    """Nearest-rank quantile: value at index ceil(fraction * n) - 1."""
    n = len(sorted_values)
    idx = max(math.ceil(fraction * n) - 1, 0)
    return sorted_values[idx]


def _top_labels(counts: Counter, n: int) -> list[str]:
    """The n most frequent labels, ties broken lexicographically."""
    return [label for label, _ in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:n]]


def fit_encoder(movies: Iterable[MovieFeatures]) -> EncoderConfig:
    """Fit encoder parameters to a movie corpus.

    Genre vocab = 10 most frequent genres (padded with unmatchable
    sentinels when the corpus has fewer); review-count thresholds =
    nearest-rank deciles floored at 1 and deduplicated to strictly
    increasing integers; avg-rating thresholds = quartile boundaries,
    deduplicated in 0.05 steps inside (0, 10); language buckets = the 7
    most frequent languages plus a catch-all "other".
    """
    movies = list(movies)
    if not movies:
        raise ValueError("cannot fit an encoder on an empty corpus")

    genre_counts: Counter = Counter()
    language_counts: Counter = Counter()
    for m in movies:
        genre_counts.update(m.genres)
        language_counts.update([m.language])

    vocab = _top_labels(genre_counts, GENRE_BITS)
    vocab += [_GENRE_PAD.format(i) for i in range(GENRE_BITS - len(vocab))]

    counts = sorted(m.vote_count for m in movies)
    review_thresholds: list[int] = []
    for k in range(1, REVIEW_BITS + 1):
        t = max(int(_nearest_rank(counts, k / REVIEW_BITS)), 1)
        if review_thresholds and t <= review_thresholds[-1]:
            t = review_thresholds[-1] + 1
        review_thresholds.append(t)

    averages = sorted(m.vote_average for m in movies)
    avg_thresholds: list[float] = []
    for k in range(1, AVG_RATING_BITS + 1):
        t = min(max(float(_nearest_rank(averages, k / 4)), 0.05), 9.85)
        if avg_thresholds and t <= avg_thresholds[-1]:
            t = avg_thresholds[-1] + 0.05
        avg_thresholds.append(t)

    languages = Counter({lang: c for lang, c in language_counts.items() if lang != OTHER_LANGUAGE})
    buckets = _top_labels(languages, 2**LANGUAGE_BITS - 1) + [OTHER_LANGUAGE]

    return EncoderConfig(
        genre_vocab=tuple(vocab),
        review_count_thresholds=tuple(review_thresholds),
        avg_rating_thresholds=tuple(avg_thresholds),
        language_buckets=tuple(buckets),
    )


def encode_movie(features: MovieFeatures, cfg: EncoderConfig) -> np.ndarray:
    """Encode one movie to its fixed 26-bit input code.

    Layout: [0..10) genre multi-hot, [10..20) review-count thermometer,
    [20..23) avg-rating thermometer, [23..26) language bucket index
    (LSB-first). Unknown genres contribute nothing; unknown languages fall
    into the "other" bucket.
    """
    code = np.zeros(MOVIE_BITS, dtype=np.uint8)
    for g, label in enumerate(cfg.genre_vocab):
        if label in features.genres:
            code[g] = 1
    for j, t in enumerate(cfg.review_count_thresholds):
        if features.vote_count >= t:
            code[GENRE_BITS + j] = 1
    for j, t in enumerate(cfg.avg_rating_thresholds):
        if features.vote_average >= t:
            code[GENRE_BITS + REVIEW_BITS + j] = 1
    try:
        idx = cfg.language_buckets.index(features.language)
    except ValueError:
        idx = len(cfg.language_buckets) - 1
    base = GENRE_BITS + REVIEW_BITS + AVG_RATING_BITS
    for j in range(LANGUAGE_BITS):
        code[base + j] = (idx >> j) & 1
    return code
