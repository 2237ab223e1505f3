"""Walkthrough of the bit-level codecs.

Ratings become 10-bit cumulative codes (a prefix of ones), movie features
become a 26-bit code: genre multi-hot, review-count thermometer, average
rating thermometer, language bucket index.
"""

import numpy as np

from wnnrec import MovieFeatures, decode_rating, encode_movie, encode_rating, fit_encoder, is_accurate

print("== rating codec ==")
for r in (0.5, 1.0, 1.5, 3.0, 5.0):
    code = encode_rating(r)
    print(f"  {r:>3} -> {code.tolist()} -> decodes back to {decode_rating(code)}")

noisy = np.array([1, 1, 0, 1, 0, 0, 0, 0, 0, 0])
print(f"  noisy prediction {noisy.tolist()} decodes to {decode_rating(noisy)} (popcount/2)")

print("\n== accuracy predicate (±1 by default) ==")
for pred, actual in ((3.5, 3.0), (2.5, 3.0), (4.5, 3.0)):
    print(f"  predicted {pred} vs actual {actual}: {'hit' if is_accurate(pred, actual) else 'miss'}")

print("\n== movie encoder fitted on a small corpus ==")
rng = np.random.default_rng(0)
genres = ["Drama", "Comedy", "Action", "Thriller", "Romance", "Horror",
          "Adventure", "Crime", "Mystery", "Family", "War"]
corpus = [
    MovieFeatures(
        genres=frozenset(rng.choice(genres, size=rng.integers(1, 4), replace=False)),
        vote_count=int(rng.lognormal(5, 1.5)) + 1,
        vote_average=float(np.round(rng.uniform(2, 9), 1)),
        language=str(rng.choice(["en", "fr", "es", "de", "ja"])),
    )
    for _ in range(500)
]
cfg = fit_encoder(corpus)
print(f"  genre vocab:       {cfg.genre_vocab}")
print(f"  review deciles:    {cfg.review_count_thresholds}")
print(f"  avg-rating splits: {cfg.avg_rating_thresholds}")
print(f"  language buckets:  {cfg.language_buckets}")

movie = MovieFeatures(genres=frozenset({"Drama", "Romance"}), vote_count=800, vote_average=7.3, language="fr")
code = encode_movie(movie, cfg)
print(f"\n  {sorted(movie.genres)}, {movie.vote_count} reviews, avg {movie.vote_average}, '{movie.language}'")
print(f"  genre bits    {code[:10].tolist()}")
print(f"  count bits    {code[10:20].tolist()}")
print(f"  avg bits      {code[20:23].tolist()}")
print(f"  language bits {code[23:].tolist()}")
