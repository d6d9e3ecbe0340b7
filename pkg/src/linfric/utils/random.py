"""Platform-independent pseudo-random numbers.

SplitMix64 in counter form: draw i of a stream seeded with s is ``mix(s + (i + 1) * GAMMA)``
(mod 2^64) where ``mix`` is the SplitMix64 finalizer. The stream is therefore fully defined by
the seed and can be generated in vectorized blocks. Uniforms use the top 53 bits; normals use
the Box-Muller transform on pairs of uniforms.
"""

import zlib

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB


def mix64(value: int) -> int:
    """SplitMix64 finalizer on a Python integer."""
    z = value & MASK64
    z = ((z ^ (z >> 30)) * _MUL1) & MASK64
    z = ((z ^ (z >> 27)) * _MUL2) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, key: str) -> int:
    """Independent per-key seed, e.g. one stream per pipe from a run seed."""
    return mix64(seed + zlib.crc32(key.encode("utf-8")) * GAMMA)


class SplitMix64:
    """Stream of 64-bit draws; ``next_*`` calls consume the stream in order."""

    def __init__(self, seed: int) -> None:
        if not 0 <= seed <= MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.seed = seed
        self._drawn = 0

    def next_uint64(self, n: int) -> np.ndarray:
        counters = np.arange(self._drawn + 1, self._drawn + n + 1, dtype=np.uint64)
        self._drawn += n
        z = np.full(n, self.seed, dtype=np.uint64) + counters * np.uint64(GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MUL1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MUL2)
        return z ^ (z >> np.uint64(31))

    def uniform(self, n: int) -> np.ndarray:
        """Uniform draws in [0, 1)."""
        return (self.next_uint64(n) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def normal(self, n: int) -> np.ndarray:
        """Standard normal draws."""
        u1 = self.uniform(n)
        u2 = self.uniform(n)
        radius = np.sqrt(-2.0 * np.log1p(-u1))
        return radius * np.cos(2.0 * np.pi * u2)
