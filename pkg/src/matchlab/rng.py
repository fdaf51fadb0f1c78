"""Deterministic seed derivation for trial-indexed experiments.

Every stochastic routine takes a single integer seed.  Experiments that run
many trials derive one independent seed per trial index so that trials can be
executed in any order (or on any number of workers) and still reproduce
byte-identical results.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def derive_seed(seed: int, index: int) -> int:
    """Return a 63-bit seed mixed from (seed, index).

    Uses the splitmix64 finalizer on seed + (index + 1) * golden-gamma, so
    nearby (seed, index) pairs land far apart.  Stable across platforms and
    Python processes, unlike the built-in hash().
    """
    z = (seed + (index + 1) * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    z = z ^ (z >> 31)
    return z & ((1 << 63) - 1)


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator for a derived or top-level seed."""
    return np.random.default_rng(seed)
