"""Packed-bit helpers.

Bit vectors cross module boundaries as numpy uint8 arrays (or any 0/1
sequence); the WNN packs them into plain Python ints so Hamming distance
is a single XOR + popcount. Bit i of the vector sits at bit i of the int
(LSB-first), so widths up to 63 stay within one machine word.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


def as_bits(bits: Sequence[int] | np.ndarray, width: int | None = None) -> np.ndarray:
    """Normalize a 0/1 sequence to a uint8 array, validating values.

    Raises ValueError if any element is not 0/1 or, when `width` is given,
    if the length differs.
    """
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError(f"bit vector must be 1-D, got shape {arr.shape}")
    src = np.asarray(bits)
    if not np.all((src == 0) | (src == 1)):
        raise ValueError("bit vector elements must be 0 or 1")
    if width is not None and arr.size != width:
        raise ValueError(f"expected {width} bits, got {arr.size}")
    return arr


def pack(bits: Iterable[int]) -> int:
    """Pack a 0/1 iterable into an int, bit i at position i."""
    key = 0
    for i, b in enumerate(bits):
        if b:
            key |= 1 << i
    return key


def unpack(key: int, width: int) -> np.ndarray:
    """Inverse of :func:`pack` for a known width."""
    return np.fromiter(((key >> i) & 1 for i in range(width)), dtype=np.uint8, count=width)


def hamming(a: int, b: int) -> int:
    """Hamming distance between two packed keys."""
    return (a ^ b).bit_count()
