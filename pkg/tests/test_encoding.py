import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wnnrec.encoding import (
    EncoderConfig,
    MOVIE_BITS,
    MovieFeatures,
    RATING_VALUES,
    decode_rating,
    encode_movie,
    encode_rating,
    fit_encoder,
    is_accurate,
)
from wnnrec.errors import FormatError


class TestRatingCodec:
    def test_reference_examples(self):
        assert encode_rating(1.0).tolist() == [1, 1, 0, 0, 0, 0, 0, 0, 0, 0]
        assert encode_rating(1.5).tolist() == [1, 1, 1, 0, 0, 0, 0, 0, 0, 0]
        assert encode_rating(5.0).tolist() == [1] * 10

    def test_roundtrip_all_ratings(self):
        for r in RATING_VALUES:
            assert decode_rating(encode_rating(r)) == r

    def test_cumulative_no_zero_before_one(self):
        for r in RATING_VALUES:
            code = encode_rating(r)
            assert not any(code[i] == 0 and code[i + 1] == 1 for i in range(9))

    def test_decode_clamps_and_counts(self):
        assert decode_rating([1] * 10) == 5.0
        assert decode_rating([0] * 10) == 0.5
        assert decode_rating([1, 1, 0, 1, 0, 0, 0, 0, 0, 0]) == 1.5

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            encode_rating(3.7)
        with pytest.raises(ValueError):
            encode_rating(0.0)
        with pytest.raises(ValueError):
            decode_rating([1] * 9)
        with pytest.raises(ValueError):
            decode_rating([2] + [0] * 9)


class TestIsAccurate:
    def test_reference_examples(self):
        assert is_accurate(3.5, 3.0, 1.0)
        assert is_accurate(3.0, 3.0, 1.0)
        assert not is_accurate(4.5, 3.0, 1.0)

    def test_default_tolerance_is_one(self):
        assert is_accurate(2.5, 3.5)
        assert not is_accurate(2.0, 3.5)

    @given(
        st.sampled_from(RATING_VALUES),
        st.sampled_from(RATING_VALUES),
        st.floats(min_value=0.1, max_value=5.0),
    )
    def test_symmetry(self, p, a, t):
        assert is_accurate(p, a, t) == is_accurate(a, p, t)

    def test_tolerance_must_be_positive(self):
        with pytest.raises(ValueError):
            is_accurate(3.0, 3.0, 0.0)


def _features(genres=("Drama",), vote_count=100, vote_average=6.0, language="en"):
    return MovieFeatures(genres=frozenset(genres), vote_count=vote_count, vote_average=vote_average, language=language)


@pytest.fixture(scope="module")
def fixture_corpus():
    """1000 movies with a wide, seeded spread of counts and averages."""
    rng = np.random.default_rng(1234)
    genres = ["Drama", "Comedy", "Action", "Thriller", "Romance", "Horror",
              "Adventure", "Crime", "Mystery", "Family", "War", "Western"]
    languages = ["en", "fr", "es", "de", "it", "ja", "ko", "pt", "ru", "zh"]
    movies = []
    for _ in range(1000):
        k = int(rng.integers(1, 4))
        movies.append(
            MovieFeatures(
                genres=frozenset(rng.choice(genres, size=k, replace=False)),
                vote_count=int(rng.lognormal(5.0, 1.5)) + 1,
                vote_average=float(np.round(rng.uniform(1.0, 9.5), 1)),
                language=str(rng.choice(languages)),
            )
        )
    return movies


class TestFitEncoder:
    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError):
            fit_encoder([])

    def test_decile_thresholds_match_sort_index_oracle(self, fixture_corpus):
        cfg = fit_encoder(fixture_corpus)
        counts = sorted(m.vote_count for m in fixture_corpus)
        # Independent nearest-rank oracle: k-th decile = value at index
        # ceil(k*n/10) - 1 of the sorted list.
        oracle = [counts[math.ceil(k * len(counts) / 10) - 1] for k in range(1, 11)]
        assert oracle == sorted(set(oracle)), "fixture must have distinct deciles"
        assert list(cfg.review_count_thresholds) == oracle

        averages = sorted(m.vote_average for m in fixture_corpus)
        avg_oracle = [averages[math.ceil(k * len(averages) / 4) - 1] for k in range(1, 4)]
        assert list(cfg.avg_rating_thresholds) == pytest.approx(avg_oracle)

    def test_degenerate_counts_deduplicated(self):
        movies = [_features(vote_count=7) for _ in range(50)]
        cfg = fit_encoder(movies)
        ts = cfg.review_count_thresholds
        assert ts == tuple(range(7, 17))
        assert all(b > a for a, b in zip(ts, ts[1:]))

    def test_zero_counts_floored_to_one(self):
        movies = [_features(vote_count=0) for _ in range(20)]
        cfg = fit_encoder(movies)
        assert cfg.review_count_thresholds[0] == 1

    def test_sparse_genres_padded_with_unmatchable_sentinels(self):
        movies = [_features(genres=(g,)) for g in ("Drama", "Comedy", "Action")] * 5
        cfg = fit_encoder(movies)
        assert len(cfg.genre_vocab) == 10
        assert set(cfg.genre_vocab[:3]) == {"Action", "Comedy", "Drama"}
        for pad in cfg.genre_vocab[3:]:
            assert all(pad not in m.genres for m in movies)

    def test_genre_ties_broken_lexicographically(self):
        movies = [_features(genres=("Zeta",)), _features(genres=("Alpha",))] * 3
        cfg = fit_encoder(movies)
        assert cfg.genre_vocab[0] == "Alpha"
        assert cfg.genre_vocab[1] == "Zeta"

    def test_language_buckets_top7_plus_other(self, fixture_corpus):
        cfg = fit_encoder(fixture_corpus)
        assert len(cfg.language_buckets) == 8
        assert cfg.language_buckets[-1] == "other"
        assert len(set(cfg.language_buckets)) == 8

    def test_config_json_roundtrip(self, fixture_corpus):
        cfg = fit_encoder(fixture_corpus)
        assert EncoderConfig.from_json(cfg.to_json()) == cfg
        doc = json.loads(cfg.to_json())
        assert doc["version"] == "encoder-v1"

    def test_config_json_rejects_bad_documents(self):
        with pytest.raises(FormatError):
            EncoderConfig.from_json("{not json")
        with pytest.raises(FormatError):
            EncoderConfig.from_json(json.dumps({"version": "encoder-v2"}))
        with pytest.raises(FormatError):
            EncoderConfig.from_json(json.dumps({"version": "encoder-v1", "genre_vocab": []}))


@pytest.fixture(scope="module")
def hand_config():
    return EncoderConfig(
        genre_vocab=("Drama", "Comedy", "Action", "Thriller", "Romance",
                     "Horror", "Adventure", "Crime", "Mystery", "Family"),
        review_count_thresholds=(1, 5, 10, 50, 100, 200, 500, 1000, 2000, 5000),
        avg_rating_thresholds=(4.0, 6.0, 7.5),
        language_buckets=("en", "fr", "es", "de", "it", "ja", "ko", "other"),
    )


class TestEncodeMovie:
    def test_hand_derived_code(self, hand_config):
        # Drama+Romance -> genre bits 0 and 4; vote_count 100 >= the first
        # five thresholds; vote_average 6.0 >= 4.0 and >= 6.0 but < 7.5;
        # language "en" -> bucket index 0 -> all language bits 0.
        movie = _features(genres=("Drama", "Romance"), vote_count=100, vote_average=6.0, language="en")
        expected = (
            [1, 0, 0, 0, 1, 0, 0, 0, 0, 0]
            + [1, 1, 1, 1, 1, 0, 0, 0, 0, 0]
            + [1, 1, 0]
            + [0, 0, 0]
        )
        assert encode_movie(movie, hand_config).tolist() == expected

    def test_language_index_bits_lsb_first(self, hand_config):
        movie = _features(language="ja")  # bucket index 5 -> bits 1,0,1
        assert encode_movie(movie, hand_config)[23:].tolist() == [1, 0, 1]
        unknown = _features(language="xx")  # "other" is index 7 -> 1,1,1
        assert encode_movie(unknown, hand_config)[23:].tolist() == [1, 1, 1]

    def test_count_extremes(self, hand_config):
        assert encode_movie(_features(vote_count=0), hand_config)[10:20].tolist() == [0] * 10
        assert encode_movie(_features(vote_count=10**9), hand_config)[10:20].tolist() == [1] * 10

    def test_width_is_always_26(self, hand_config, fixture_corpus):
        cfg = fit_encoder(fixture_corpus)
        for m in fixture_corpus[:50]:
            assert encode_movie(m, cfg).shape == (MOVIE_BITS,)
        weird = MovieFeatures(genres=frozenset({"Nonexistent"}), vote_count=10**12, vote_average=10.0, language="??")
        assert encode_movie(weird, hand_config).shape == (26,)

    @given(st.integers(0, 10**6), st.integers(0, 10**6))
    def test_thermometer_monotone_in_vote_count(self, a, b):
        cfg = EncoderConfig(
            genre_vocab=tuple(f"g{i}" for i in range(10)),
            review_count_thresholds=(1, 2, 5, 10, 20, 50, 100, 1000, 10**4, 10**5),
            avg_rating_thresholds=(3.0, 5.0, 7.0),
            language_buckets=("en", "other"),
        )
        lo, hi = sorted((a, b))
        bits_lo = encode_movie(_features(vote_count=lo), cfg)[10:20]
        bits_hi = encode_movie(_features(vote_count=hi), cfg)[10:20]
        assert np.all(bits_lo <= bits_hi)

    def test_unknown_genres_contribute_nothing(self, hand_config):
        movie = _features(genres=("Telenovela", "Kaiju"))
        assert encode_movie(movie, hand_config)[:10].tolist() == [0] * 10


class TestEncoderConfigValidation:
    def test_rejects_non_increasing_thresholds(self):
        with pytest.raises(ValueError):
            EncoderConfig(
                genre_vocab=tuple(f"g{i}" for i in range(10)),
                review_count_thresholds=(1, 2, 2, 4, 5, 6, 7, 8, 9, 10),
                avg_rating_thresholds=(3.0, 5.0, 7.0),
                language_buckets=("en", "other"),
            )

    def test_rejects_wrong_vocab_size(self):
        with pytest.raises(ValueError):
            EncoderConfig(
                genre_vocab=("Drama",),
                review_count_thresholds=tuple(range(1, 11)),
                avg_rating_thresholds=(3.0, 5.0, 7.0),
                language_buckets=("en", "other"),
            )
