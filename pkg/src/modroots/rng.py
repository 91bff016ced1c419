"""Deterministic splittable PRNG used by the sweep harness and the test suite.

The generator is SplitMix64 with the standard constants:

    state    <- state + 0x9E3779B97F4A7C15          (mod 2^64)
    z        <- state
    z        <- (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9   (mod 2^64)
    z        <- (z XOR (z >> 27)) * 0x94D049BB133111EB   (mod 2^64)
    output   <- z XOR (z >> 31)

A child stream for grid cell i is seeded with the (i+1)-th output of the
parent stream, so the random instances for a cell depend only on
(seed, cell index), never on worker scheduling.  Integers below n are drawn
as next64() % n; this small modulo bias is irrelevant at desk scale and keeps
the sequence reproducible from the constants alone.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def split(self) -> "SplitMix64":
        return SplitMix64(self.next64())

    def below(self, n: int) -> int:
        """Uniform-ish integer in [0, n)."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        return self.next64() % n

    def randint(self, lo: int, hi: int) -> int:
        """Integer in the closed range [lo, hi]."""
        return lo + self.below(hi - lo + 1)

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def subset(self, q: int, size: int) -> frozenset:
        """Random subset of {0,...,q-1} of the given size (without replacement)."""
        if size > q:
            raise ValueError("subset larger than universe")
        chosen = set()
        while len(chosen) < size:
            chosen.add(self.below(q))
        return frozenset(chosen)

    def uniform01(self) -> float:
        return self.next64() / 2.0**64


def cell_seeds(seed: int, count: int) -> list[int]:
    """Per-cell child seeds: the first `count` outputs of SplitMix64(seed)."""
    parent = SplitMix64(seed)
    return [parent.next64() for _ in range(count)]
