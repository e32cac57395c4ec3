"""Portable deterministic randomness.

Seeded reproducibility has to survive Python upgrades and platforms, so the
package uses its own splitmix64 generator instead of the stdlib Mersenne
twister. Identical seeds give identical streams everywhere, forever.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> int:
    """One splitmix64 finalization of a 64-bit state; returns a 64-bit value."""
    z = (state + _GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def hash_uniform(seed: int, index: int) -> float:
    """Stateless uniform draw in [0, 1) for (seed, index).

    Used for random-density connectivity: entry (i, j) maps to one index, so
    matrices are a pure function of the seed regardless of evaluation order.
    """
    return splitmix64((seed & _MASK64) ^ splitmix64(index & _MASK64)) / 2.0**64


class SplitMix64:
    """Sequential splitmix64 stream for shuffles and sampling."""

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return (z ^ (z >> 31)) & _MASK64

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n). Rejection-sampled to avoid modulo bias."""
        if n <= 0:
            raise ValueError("randrange bound must be positive")
        limit = (2**64 // n) * n
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]
