"""Subsets of Z_q and exact representation-count vectors.

IndicatorSet is the universal input type for the energy and uniformity-norm
computations; RepFn holds exact nonnegative integer counts indexed by residue.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class IndicatorSet:
    """A subset of Z_q, stored as a frozenset of residues in [0, q)."""

    q: int
    members: frozenset

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("modulus must be >= 1")
        if not isinstance(self.members, frozenset):
            object.__setattr__(self, "members", frozenset(self.members))
        for r in self.members:
            if not (0 <= r < self.q):
                raise ValueError(f"residue {r} outside [0, {self.q})")

    @classmethod
    def of(cls, q: int, elements) -> "IndicatorSet":
        return cls(q, frozenset(x % q for x in elements))

    @property
    def cardinality(self) -> int:
        return len(self.members)

    def __contains__(self, r: int) -> bool:
        return r % self.q in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def vector(self) -> list:
        """Membership vector of length q (0/1 ints)."""
        vec = [0] * self.q
        for r in self.members:
            vec[r] = 1
        return vec

    def array(self) -> np.ndarray:
        return np.fromiter(sorted(self.members), dtype=np.int64, count=len(self.members))

    def shift(self, s: int) -> "IndicatorSet":
        """The set A - s = {a - s : a in A}."""
        return IndicatorSet(self.q, frozenset((a - s) % self.q for a in self.members))

    def dilate(self, u: int) -> "IndicatorSet":
        return IndicatorSet(self.q, frozenset((a * u) % self.q for a in self.members))


@dataclass(frozen=True)
class RepFn:
    """Exact nonnegative-integer counts over Z_q (difference or sum representations)."""

    q: int
    counts: tuple

    def __post_init__(self):
        if len(self.counts) != self.q:
            raise ValueError("counts length must equal q")

    def __getitem__(self, d: int) -> int:
        return self.counts[d % self.q]

    def total(self) -> int:
        return sum(self.counts)

    def square_sum(self) -> int:
        return sum(c * c for c in self.counts)
