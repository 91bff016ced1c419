"""Exact extreme discrepancy of rational point multisets in [0,1), and the
discrepancy of modular square roots of primes.

The supremum over half-open intervals [alpha, beta) is attained only in the
limit beta -> point+, so isolated points contribute a full excess of 1; the
pair scan below evaluates every critical configuration in exact rational
arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapacityError
from .modular import _as_q, primes_in, sqrt_mod


@dataclass(frozen=True)
class PointMultiset:
    """Multiset of exact rationals in [0,1): sorted distinct values with multiplicities."""

    values: tuple  # sorted distinct Fractions
    mults: tuple  # positive ints, aligned with values

    @classmethod
    def of(cls, points) -> "PointMultiset":
        counter: dict = {}
        for p in points:
            f = Fraction(p)
            if not (0 <= f < 1):
                raise ValueError(f"point {f} outside [0,1)")
            counter[f] = counter.get(f, 0) + 1
        vals = tuple(sorted(counter))
        return cls(vals, tuple(counter[v] for v in vals))

    @property
    def size(self) -> int:
        return sum(self.mults)

    def export_lines(self) -> str:
        """One "numerator denominator multiplicity" line per distinct point, sorted."""
        return "\n".join(
            f"{v.numerator} {v.denominator} {m}" for v, m in zip(self.values, self.mults)
        )


@dataclass(frozen=True)
class DiscrepancyResult:
    value: Fraction
    witness: str


def discrepancy(P: PointMultiset) -> DiscrepancyResult:
    """sup over 0 <= alpha < beta <= 1 of |#{points in [alpha, beta)} - (beta-alpha)*size|."""
    m = len(P.values)
    N = P.size
    if m == 0:
        return DiscrepancyResult(Fraction(0), "empty")
    vals = P.values
    prefix = [0]
    for c in P.mults:
        prefix.append(prefix[-1] + c)
    total = prefix[-1]

    best = Fraction(0)
    witness = "trivial"

    # excess over closed clusters [v_i, v_j] (beta -> v_j+)
    for i in range(m):
        for j in range(i, m):
            ex = (prefix[j + 1] - prefix[i]) - N * (vals[j] - vals[i])
            if ex > best:
                best, witness = ex, f"excess [{vals[i]}, {vals[j]}+)"
    # deficit over open gaps (v_i, v_j)
    for i in range(m):
        for j in range(i + 1, m):
            de = N * (vals[j] - vals[i]) - (prefix[j] - prefix[i + 1])
            if de > best:
                best, witness = de, f"deficit ({vals[i]}, {vals[j]})"
    # deficit against the boundaries
    for j in range(m):
        de = N * vals[j] - prefix[j]
        if de > best:
            best, witness = de, f"deficit [0, {vals[j]})"
    for i in range(m):
        de = N * (1 - vals[i]) - (total - prefix[i + 1])
        if de > best:
            best, witness = de, f"deficit ({vals[i]}, 1)"
    return DiscrepancyResult(best, witness)


@dataclass(frozen=True)
class PrimeRootsResult:
    q: int
    P: int
    points: PointMultiset
    certificates: tuple  # (x, p) pairs: x^2 = p mod q, p prime <= P
    result: DiscrepancyResult

    @property
    def value(self) -> Fraction:
        return self.result.value


def prime_roots_discrepancy(q, P: int, sieve_cap: int = 1 << 24) -> PrimeRootsResult:
    """Discrepancy of the multiset { x/q : x^2 = p (mod q), p prime <= P }."""
    q = _as_q(q)
    if P > sieve_cap:
        raise CapacityError(f"P exceeds sieve capacity {sieve_cap}")
    points = []
    certs = []
    for p in primes_in(2, P) if P >= 2 else []:
        for x in sqrt_mod(p % q, q):
            points.append(Fraction(x, q))
            certs.append((x, p))
    ms = PointMultiset.of(points)
    return PrimeRootsResult(q, P, ms, tuple(certs), discrepancy(ms))


def prime_roots_envelope(q: int, P: int) -> float:
    return (
        P ** (15 / 16)
        + q ** (1 / 8) * P ** (3 / 4)
        + q ** (1 / 16) * P ** (69 / 80)
        + q ** (13 / 88) * P ** (3 / 4)
    )


def prime_roots_ratio(q, P: int) -> float:
    """Discrepancy over the comparison envelope (reported, never asserted)."""
    q = _as_q(q)
    if P < 1:
        raise ValueError("P must be >= 1")
    gamma = prime_roots_discrepancy(q, P).value
    return float(gamma) / prime_roots_envelope(q, P)
