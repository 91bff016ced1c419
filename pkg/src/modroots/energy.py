"""Exact difference/sum representation counts and additive energies of root sets.

tuple_energy computes the number of 2*nu tuples of elements of the preimage
set A = {x in F_q^* : j*x^k in {1..N}} whose nu-fold sums agree mod q;
set_energy is the nu = 2 case for a general target set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .convolve import cyclic_convolve
from .errors import CapacityError
from .modular import _as_q, preimage_set, primes_in, residue_map
from .sets import IndicatorSet, RepFn

# below this many pairs, representation counts come from direct pair counting
_BINCOUNT_PAIR_LIMIT = 1 << 22


@dataclass(frozen=True)
class EnergyQuery:
    nu: int
    k: int
    N: int
    j: int
    q: int

    def __post_init__(self):
        q = _as_q(self.q)
        if self.nu < 1 or self.k < 1:
            raise ValueError("nu and k must be >= 1")
        if not (1 <= self.N <= q):
            raise ValueError("N must satisfy 1 <= N <= q")
        if self.j % q == 0:
            raise ValueError("j must be nonzero mod q")


def difference_rep(A: IndicatorSet) -> RepFn:
    """counts(d) = #{(a1, a2) in A^2 : a1 - a2 = d (mod q)}."""
    q = A.q
    n = A.cardinality
    if n == 0:
        return RepFn(q, (0,) * q)
    if n * n <= _BINCOUNT_PAIR_LIMIT:
        arr = A.array()
        diffs = (arr[:, None] - arr[None, :]) % q
        counts = np.bincount(diffs.ravel(), minlength=q)
        return RepFn(q, tuple(int(c) for c in counts))
    ind = A.vector()
    rev = [0] * q
    for r in A.members:
        rev[(-r) % q] = 1
    return RepFn(q, tuple(cyclic_convolve(ind, rev)))


def sum_rep(A: IndicatorSet, nu: int) -> RepFn:
    """counts(d) = #{(a1..a_nu) in A^nu : a1 + ... + a_nu = d (mod q)}."""
    if nu < 1:
        raise ValueError("nu must be >= 1")
    q = A.q
    if A.cardinality == 0:
        return RepFn(q, (0,) * q)
    if nu == 1:
        return RepFn(q, tuple(A.vector()))
    if nu == 2:
        return RepFn(q, tuple(_pair_sum_counts(A)))
    half = sum_rep(A, nu // 2).counts
    acc = cyclic_convolve(list(half), list(half))
    if nu % 2 == 1:
        acc = cyclic_convolve(acc, A.vector())
    return RepFn(q, tuple(acc))


def _pair_sum_counts(A: IndicatorSet) -> list:
    q = A.q
    n = A.cardinality
    if n * n <= _BINCOUNT_PAIR_LIMIT:
        arr = A.array()
        sums = (arr[:, None] + arr[None, :]) % q
        return [int(c) for c in np.bincount(sums.ravel(), minlength=q)]
    ind = A.vector()
    return cyclic_convolve(ind, ind)


def energy_of(A: IndicatorSet, nu: int = 2) -> int:
    """Number of 2*nu-tuples in A with matching nu-fold sums."""
    return sum_rep(A, nu).square_sum()


def tuple_energy(query: EnergyQuery) -> int:
    A = preimage_set(query.j, query.k, query.N, query.q)
    return energy_of(A, query.nu)


def set_energy(target: IndicatorSet, k: int, q) -> int:
    """Additive energy of { b in F_q : b^k in target }."""
    q = _as_q(q)
    if target.q != q:
        raise ValueError("target modulus mismatch")
    if target.cardinality == 0:
        return 0
    rmap = residue_map(1, k, q)
    members = set()
    for v in target.members:
        members.update(rmap.table[v])
    return energy_of(IndicatorSet(q, frozenset(members)), 2)


def power_coset_reps(k: int, q) -> list:
    """One representative j per coset of the k-th power subgroup of F_q^*."""
    q = _as_q(q)
    if q == 2:
        return [1]
    g = math.gcd(k, q - 1)
    subgroup = {pow(x, k, q) for x in range(1, q)}
    reps = []
    covered = set()
    for j in range(1, q):
        if j not in covered:
            reps.append(j)
            covered.update((j * h) % q for h in subgroup)
            if len(reps) == g:
                break
    return reps


def max_energy_over_j(k: int, N: int, q, full_enumeration: bool = False):
    """max_j E_k(N; j, q) and an argmax j.

    By dilation invariance the max over all j equals the max over one
    representative per coset of the k-th powers; full_enumeration forces the
    all-j scan (oracle mode).
    """
    q = _as_q(q)
    js = range(1, q) if full_enumeration else power_coset_reps(k, q)
    best, best_j = 0, 1
    for j in js:
        e = tuple_energy(EnergyQuery(2, k, N, j, q))
        if e > best:
            best, best_j = e, j
    return best, best_j


@dataclass(frozen=True)
class PrimeAverageResult:
    """Exact total of per-prime maxima plus the log-scaled average.

    value = (log Q / Q) * total; the total itself is an exact integer since
    the scale factor is irrational.
    """

    k: int
    N: int
    Q: int
    primes: tuple
    total: int
    value: float


def prime_averaged_energy(
    k: int, N: int, Q: int, full_enumeration: bool = False, sieve_cap: int = 1 << 24
) -> PrimeAverageResult:
    """(log Q / Q) * sum over primes q in [Q/2, Q) of max_j E_k(N; j, q)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if N > Q:
        raise ValueError("requires N <= Q")
    if Q > sieve_cap:
        raise CapacityError(f"Q exceeds sieve capacity {sieve_cap}")
    lo = (Q + 1) // 2  # dyadic: Q/2 <= q < Q
    qs = primes_in(lo, Q - 1)
    total = 0
    for q in qs:
        n_eff = min(N, q)
        total += max_energy_over_j(k, n_eff, q, full_enumeration=full_enumeration)[0]
    value = math.log(Q) / Q * total if Q > 1 else 0.0
    return PrimeAverageResult(k, N, Q, tuple(qs), total, value)
