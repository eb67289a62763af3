"""Deterministic derivation of per-sample random streams.

A generator's randomness is part of its identity: the script carries a seed
gene, and sample i of that generator always uses the stream seeded with
``splitmix64(seed * 2**32 + i)``. The exact mixing function below is a
stability contract; changing it changes every sampled level.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def splitmix64(value: int) -> int:
    """One splitmix64 avalanche step (64-bit)."""
    z = (value + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def sample_seed(script_seed: int, sample_index: int) -> int:
    """64-bit stream seed for sample ``sample_index`` of a generator."""
    return splitmix64(((script_seed << 32) + sample_index) & _MASK64)


def sample_rng(script_seed: int, sample_index: int) -> np.random.Generator:
    """The PCG64 stream that drives map init and script execution of one sample."""
    return np.random.Generator(np.random.PCG64(sample_seed(script_seed, sample_index)))
