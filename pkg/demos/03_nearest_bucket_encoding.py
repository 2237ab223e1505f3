"""Bucketing unbounded categories into fixed binary codes.

An agent's input width is frozen at creation, but the world keeps
inventing genres. A small cache of labeled embeddings answers: find the
closest bucket by cosine distance and borrow its code.
"""

import json
import math

import numpy as np

from wnnrec import cosine_distance, load_cache, nearest_bucket

doc = {
    "version": "buckets-v1",
    "buckets": [
        {"label": "drama", "embedding": [0.8, math.sqrt(1 - 0.64)], "code": [0, 0]},
        {"label": "horror", "embedding": [0.5, math.sqrt(1 - 0.25)], "code": [0, 1]},
        {"label": "romance", "embedding": [0.2, math.sqrt(1 - 0.04)], "code": [1, 1]},
    ],
}
cache = load_cache(json.dumps(doc))
print(f"cache of {len(cache.buckets)} buckets, dimension {cache.dimension}, {cache.code_width}-bit codes")

query = np.array([1.0, 0.0])  # embedding of some genre the cache never saw
print("\ndistances from the new genre's embedding:")
for b in cache.buckets:
    print(f"  {b.label:8s} {cosine_distance(query, b.embedding):.1f}")

label, code = nearest_bucket(cache, query)
print(f"\nclosest bucket: {label!r} -> reuse its code {code}")

print("\nscale never matters, only direction:")
for lam in (0.01, 1.0, 250.0):
    print(f"  {lam:>7} * query -> {nearest_bucket(cache, lam * query)[0]}")
