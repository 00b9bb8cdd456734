"""Deterministic, platform-independent randomness.

SplitMix64 is the single source of randomness in this package so that a seed
reproduces bit-identical circuits, filter banks, embeddings, shuffles, and
splits everywhere. Normal draws use Box-Muller (two uniforms per draw, cosine
branch only) to stay stateless per draw.
"""
from __future__ import annotations

import math

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3

TWO_PI = 2.0 * math.pi
_INV_2_53 = 2.0 ** -53


def mix64(x: int) -> int:
    """The SplitMix64 output mix of a 64-bit word."""
    z = x & _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def fnv1a64(data: bytes | str) -> int:
    """FNV-1a 64-bit hash (used to map token strings to seeds)."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


class SplitMix64:
    """Counter-form SplitMix64: output n is mix64(seed + n*GOLDEN).

    The counter form lets uniform batches be produced vectorized while staying
    identical to the scalar stream.
    """

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self._count = 0

    def next_u64(self) -> int:
        self._count += 1
        return mix64((self.seed + self._count * _GOLDEN) & _MASK64)

    def _u64_block(self, n: int) -> np.ndarray:
        counts = np.arange(self._count + 1, self._count + n + 1, dtype=np.uint64)
        self._count += n
        with np.errstate(over="ignore"):
            z = np.uint64(self.seed) + counts * np.uint64(_GOLDEN)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
            z = z ^ (z >> np.uint64(31))
        return z

    def uniform(self) -> float:
        """One double in [0, 1)."""
        return (self.next_u64() >> 11) * _INV_2_53

    def uniforms(self, n: int) -> np.ndarray:
        """n doubles in [0, 1), identical to n successive uniform() calls."""
        return ((self._u64_block(n) >> np.uint64(11)).astype(np.float64)) * _INV_2_53

    def angles(self, n: int) -> np.ndarray:
        """n doubles in [0, 2*pi)."""
        return self.uniforms(n) * TWO_PI

    def normals(self, n: int, std: float = 1.0) -> np.ndarray:
        """n standard-normal draws scaled by std, via Box-Muller.

        Each draw consumes two uniforms; u1 is shifted into (0, 1] so the log
        never sees zero.
        """
        raw = self._u64_block(2 * n) >> np.uint64(11)
        u1 = (raw[0::2].astype(np.float64) + 1.0) * _INV_2_53
        u2 = raw[1::2].astype(np.float64) * _INV_2_53
        return std * np.sqrt(-2.0 * np.log(u1)) * np.cos(TWO_PI * u2)

    def randbelow(self, m: int) -> int:
        """Integer in [0, m). Modulo reduction; bias ~m/2^64 is irrelevant here."""
        if m <= 0:
            raise ValueError("randbelow requires m >= 1")
        return self.next_u64() % m

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates driven by this stream."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]


def derive_seed(seed: int, label: str) -> int:
    """Stable child seed from a parent seed and a purpose label."""
    return mix64((seed ^ fnv1a64(label)) & _MASK64)
