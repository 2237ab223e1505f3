"""Nearest-embedding buckets for unbounded categorical inputs.

Novel labels (e.g. a genre the encoder has never seen) map to a fixed
binary code by finding the cached bucket whose embedding is closest in
cosine distance and reusing its code. The cache is a static file; no
embedding model is invoked here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import FormatError


def cosine_distance(a: Sequence[float] | np.ndarray, b: Sequence[float] | np.ndarray) -> float:
    """1 - cos(a, b); 0 for parallel, 1 for orthogonal, 2 for antiparallel."""
    va = np.asarray(a, dtype=np.float64)
    vb = np.asarray(b, dtype=np.float64)
    if va.shape != vb.shape or va.ndim != 1:
        raise ValueError(f"dimension mismatch: {va.shape} vs {vb.shape}")
    na = np.linalg.norm(va)
    nb = np.linalg.norm(vb)
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine distance is undefined for zero-norm vectors")
    return float(1.0 - np.dot(va, vb) / (na * nb))


@dataclass(frozen=True)
class Bucket:
    label: str
    embedding: np.ndarray
    code: tuple[int, ...]

    def __post_init__(self):
        emb = np.asarray(self.embedding, dtype=np.float64)
        object.__setattr__(self, "embedding", emb)
        object.__setattr__(self, "code", tuple(int(b) for b in self.code))
        if emb.ndim != 1 or emb.size == 0:
            raise ValueError("embedding must be a non-empty vector")
        if np.linalg.norm(emb) == 0.0:
            raise ValueError("embedding must have positive norm")
        if any(b not in (0, 1) for b in self.code):
            raise ValueError("code bits must be 0 or 1")


@dataclass(frozen=True)
class BucketCache:
    """Immutable, validated set of buckets sharing one embedding dimension."""

    buckets: tuple[Bucket, ...]

    def __post_init__(self):
        object.__setattr__(self, "buckets", tuple(self.buckets))
        if not self.buckets:
            raise ValueError("bucket cache must not be empty")
        dims = {b.embedding.size for b in self.buckets}
        if len(dims) != 1:
            raise ValueError(f"embeddings must share one dimension, got {sorted(dims)}")
        widths = {len(b.code) for b in self.buckets}
        if len(widths) != 1:
            raise ValueError(f"codes must share one width, got {sorted(widths)}")
        labels = [b.label for b in self.buckets]
        if len(set(labels)) != len(labels):
            raise ValueError("bucket labels must be unique")

    @property
    def dimension(self) -> int:
        return self.buckets[0].embedding.size

    @property
    def code_width(self) -> int:
        return len(self.buckets[0].code)


def nearest_bucket(cache: BucketCache, query: Sequence[float] | np.ndarray) -> tuple[str, tuple[int, ...]]:
    """The label and code of the bucket closest to the query embedding.

    Distance ties break toward the earlier bucket in cache order.
    """
    q = np.asarray(query, dtype=np.float64)
    if q.ndim != 1 or q.size != cache.dimension:
        raise ValueError(f"query must be a vector of dimension {cache.dimension}")
    if np.linalg.norm(q) == 0.0:
        raise ValueError("query must have positive norm")
    best = min(
        ((cosine_distance(q, b.embedding), i) for i, b in enumerate(cache.buckets)),
        key=lambda t: t,
    )
    bucket = cache.buckets[best[1]]
    return bucket.label, bucket.code


def load_cache(text: str) -> BucketCache:
    """Parse and validate a buckets-v1 JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"bucket cache is not valid JSON: {e}") from e
    if not isinstance(doc, dict) or doc.get("version") != "buckets-v1":
        raise FormatError("expected a buckets-v1 document")
    rows = doc.get("buckets")
    if not isinstance(rows, list):
        raise FormatError("buckets-v1 document must carry a list of buckets")
    try:
        buckets = tuple(
            Bucket(label=row["label"], embedding=row["embedding"], code=row["code"]) for row in rows
        )
        return BucketCache(buckets=buckets)
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"bad bucket cache: {e}") from e
