"""Seedable, splittable randomness.

Every stochastic routine takes a ``numpy.random.Generator``. Named streams
are derived from a root seed and a fixed label, so adding a new consumer
never shifts the numbers another consumer sees.
"""
from __future__ import annotations

import zlib

import numpy as np


def _label_key(label: str) -> int:
    return zlib.crc32(label.encode("utf-8"))


def stream(seed: int, label: str = "") -> np.random.Generator:
    """Generator for ``label`` under root ``seed`` (64-bit seeds accepted)."""
    if seed < 0 or seed >= 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    words = [seed & 0xFFFFFFFF, seed >> 32, _label_key(label)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(words)))
