"""Prime-field arithmetic: primality, prime enumeration, k-th roots, characters, Gauss sums.

Root extraction below ROOT_TABLE_CAP builds the full residue table in O(q) and
serves as the exact oracle for everything downstream; above the cap only
square roots are supported (Tonelli-Shanks).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError, DegenerateError
from .sets import IndicatorSet

# Witness set valid deterministically for all n < 3.3 * 10^24 (covers 64-bit).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

WORD_CAP = 1 << 63
SIEVE_CAP = 1 << 40
ROOT_TABLE_CAP = 1 << 26

COMPLEX_RTOL = 1e-9


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for word-size integers."""
    if n >= WORD_CAP:
        raise CapacityError(f"primality test limited to n < 2^63, got {n}")
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_in(lo: int, hi: int) -> list:
    """Ascending list of primes in the closed range [lo, hi]."""
    if lo < 0 or hi < lo:
        raise ValueError(f"bad range [{lo}, {hi}]")
    if hi >= WORD_CAP:
        raise CapacityError("range exceeds supported word size")
    if hi > SIEVE_CAP:
        raise CapacityError(f"sieve capped at {SIEVE_CAP}")
    if hi < 2:
        return []
    root = math.isqrt(hi)
    base = np.ones(root + 1, dtype=bool)
    base[:2] = False
    for p in range(2, math.isqrt(root) + 1):
        if base[p]:
            base[p * p :: p] = False
    base_primes = np.nonzero(base)[0]
    lo = max(lo, 2)

    out: list = []
    seg_size = max(1 << 18, root + 1)
    for start in range(lo, hi + 1, seg_size):
        stop = min(start + seg_size - 1, hi)
        seg = np.ones(stop - start + 1, dtype=bool)
        for p in base_primes:
            p = int(p)
            first = max(p * p, ((start + p - 1) // p) * p)
            if first > stop:
                continue
            seg[first - start :: p] = False
        if start <= 1:
            seg[: 2 - start] = False
        out.extend((start + np.nonzero(seg)[0]).tolist())
    return out


@dataclass(frozen=True)
class PrimeModulus:
    """A certified prime modulus."""

    q: int
    certified: bool = True

    def __post_init__(self):
        if self.q < 2 or not is_prime(self.q):
            raise ValueError(f"{self.q} is not prime")


def _as_q(q) -> int:
    if isinstance(q, PrimeModulus):
        return q.q
    q = int(q)
    if not _is_prime_cached(q):
        raise ValueError(f"{q} is not prime")
    return q


@lru_cache(maxsize=4096)
def _is_prime_cached(n: int) -> bool:
    return is_prime(n)


@dataclass(frozen=True)
class ResidueMap:
    """For each value v in Z_q, the list of x with j*x^k = v (mod q)."""

    q: int
    k: int
    j: int
    table: tuple

    def roots_of(self, v: int) -> list:
        return list(self.table[v % self.q])


@lru_cache(maxsize=128)
def residue_map(j: int, k: int, q) -> ResidueMap:
    q = _as_q(q)
    j %= q
    if j == 0:
        raise ValueError("j must be nonzero mod q")
    if k < 1:
        raise ValueError("k must be >= 1")
    if q > ROOT_TABLE_CAP:
        raise CapacityError(f"residue table capped at q <= {ROOT_TABLE_CAP}")
    if q <= 2 or k == 1:
        vals = [(j * pow(x, k, q)) % q for x in range(q)]
    else:
        # x^k by repeated multiplication over a vectorized exponentiation
        xs = np.arange(q, dtype=np.int64)
        acc = np.ones(q, dtype=np.int64)
        base = xs.copy()
        e = k
        while e:
            if e & 1:
                acc = (acc * base) % q
            base = (base * base) % q
            e >>= 1
        vals = ((acc * j) % q).tolist()
    buckets: list = [[] for _ in range(q)]
    for x, v in enumerate(vals):
        buckets[v].append(x)
    return ResidueMap(q, k, j, tuple(tuple(b) for b in buckets))


def sqrt_mod(a: int, q) -> list:
    """Solutions of x^2 = a (mod q) for prime q, via Tonelli-Shanks. Sorted."""
    q = _as_q(q)
    a %= q
    if a == 0:
        return [0]
    if q == 2:
        return [a]
    if pow(a, (q - 1) // 2, q) != 1:
        return []
    if q % 4 == 3:
        x = pow(a, (q + 1) // 4, q)
        return sorted({x, q - x})
    # factor q-1 = d * 2^s with d odd
    d, s = q - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    z = 2
    while pow(z, (q - 1) // 2, q) != q - 1:
        z += 1
    c = pow(z, d, q)
    x = pow(a, (d + 1) // 2, q)
    t = pow(a, d, q)
    m = s
    while t != 1:
        i, e = 0, t
        while e != 1:
            e = e * e % q
            i += 1
        b = pow(c, 1 << (m - i - 1), q)
        x = x * b % q
        c = b * b % q
        t = t * c % q
        m = i
    return sorted({x, q - x})


def kth_roots(a: int, k: int, q) -> set:
    """The set { x in Z_q : x^k = a (mod q) }."""
    q = _as_q(q)
    a %= q
    if k < 1:
        raise ValueError("k must be >= 1")
    if q <= ROOT_TABLE_CAP:
        return set(residue_map(1, k, q).roots_of(a))
    if k == 2:
        return set(sqrt_mod(a, q))
    raise CapacityError("k-th roots above the table cap supported only for k = 2")


def preimage_set(j: int, k: int, N: int, q) -> IndicatorSet:
    """The set { x in F_q^* : j*x^k mod q lies in {1,...,N} } (natural embedding)."""
    q = _as_q(q)
    j %= q
    if j == 0:
        raise ValueError("j must be nonzero mod q")
    if not (1 <= N <= q):
        raise ValueError(f"N must satisfy 1 <= N <= q, got {N}")
    rmap = residue_map(j, k, q)
    members = set()
    for v in range(1, N + 1):
        members.update(rmap.table[v % q])
    members.discard(0)
    return IndicatorSet(q, frozenset(members))


@dataclass(frozen=True)
class CharacterTable:
    """Quadratic character chi mod q, the unit eps_q, and the additive character e_q."""

    q: int
    chi: tuple
    eps_q: complex

    @classmethod
    def build(cls, q) -> "CharacterTable":
        q = _as_q(q)
        if q == 2:
            raise DegenerateError("quadratic character table requires odd q")
        chi = [-1] * q
        chi[0] = 0
        for x in range(1, q):
            chi[x * x % q] = 1
        eps = 1.0 + 0.0j if q % 4 == 1 else 1.0j
        return cls(q, tuple(chi), eps)

    def e(self, x: int) -> complex:
        return cmath.exp(2j * math.pi * (x % self.q) / self.q)


@lru_cache(maxsize=128)
def character_table(q) -> CharacterTable:
    return CharacterTable.build(q)


@lru_cache(maxsize=128)
def unit_roots(q: int) -> np.ndarray:
    """exp(2*pi*i*x/q) for x = 0..q-1."""
    return np.exp(2j * np.pi * np.arange(q) / q)


def _kahan_complex(terms) -> complex:
    total = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    for t in terms:
        y = t - comp
        s = total + y
        comp = (s - total) - y
        total = s
    return total


def gauss_sum(b: int, h: int, q):
    """sum_x e_q(b*x^2 + h*x): closed-form value plus a cross-checked flag.

    Returns (value, closed_form) where value = eps_q * chi(b) * sqrt(q) *
    e_q(-h^2 * (4b)^{-1}) and closed_form records that the closed form agreed
    with direct summation to relative tolerance COMPLEX_RTOL.
    """
    q = _as_q(q)
    b %= q
    h %= q
    if b == 0:
        raise DegenerateError("quadratic coefficient must be nonzero mod q")
    if q == 2:
        raise DegenerateError("closed form needs (4b)^{-1}, which does not exist mod 2")
    tab = character_table(q)
    roots = unit_roots(q)
    xs = np.arange(q, dtype=np.int64)
    direct = complex(np.sum(roots[(b * xs * xs + h * xs) % q]))
    inv4b = pow(4 * b, q - 2, q)
    closed = tab.eps_q * tab.chi[b] * math.sqrt(q) * tab.e(-h * h * inv4b)
    if abs(direct - closed) > COMPLEX_RTOL * math.sqrt(q):
        raise ArithmeticError(
            f"gauss sum cross-check failed at (b={b}, h={h}, q={q}): "
            f"direct={direct}, closed={closed}"
        )
    return closed, True
