"""Seed derivation shared by the samplers, the clustering and the harness.

Every random stream in the package is a ``numpy.random.Generator`` backed by
PCG64. Child streams are never drawn by jumping a parent generator; instead a
child seed is computed from the parent seed and an integer key path with a
splitmix64 mix, so any (seed, key path) pair can be regenerated in isolation.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_seed(base: int, *keys: int) -> int:
    """Fold ``keys`` into ``base`` one at a time; returns a 64-bit seed."""
    h = splitmix64(int(base) & _MASK64)
    for k in keys:
        h = splitmix64(h ^ (int(k) & _MASK64))
    return h


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & _MASK64))


def as_rng(rng: np.random.Generator | int | None) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        raise ValueError("an explicit seed or Generator is required")
    return make_rng(int(rng))


def child_seed(rng: np.random.Generator) -> int:
    """Draw a 63-bit base seed from ``rng`` for deriving keyed substreams."""
    return int(rng.integers(0, 2**63))
