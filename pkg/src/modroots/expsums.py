"""Bilinear exponential sums over modular square roots, smoothed variants,
and the character/inverse moment with its diagonal-plus-square-root-cancellation
envelope.

Dyadic convention throughout: m ~ M means M/2 <= m < M.  All complex
accumulation uses compensated summation; oracle comparisons are at relative
tolerance 1e-9.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .modular import _as_q, character_table, kth_roots, unit_roots

COMPLEX_RTOL = 1e-9


def dyadic_range(X: int) -> range:
    """Integers a with X/2 <= a < X."""
    return range((X + 1) // 2, X)


class _Kahan:
    __slots__ = ("total", "comp")

    def __init__(self):
        self.total = 0.0 + 0.0j
        self.comp = 0.0 + 0.0j

    def add(self, t: complex):
        y = t - self.comp
        s = self.total + y
        self.comp = (s - self.total) - y
        self.total = s


@dataclass(frozen=True)
class BilinearQuery:
    """Weights alpha over m ~ M and beta over n ~ N (indexed in dyadic order)."""

    a: int
    h: int
    M: int
    N: int
    q: int
    alpha: tuple
    beta: tuple

    def __post_init__(self):
        q = _as_q(self.q)
        if self.a % q == 0:
            raise ValueError("a must be nonzero mod q")
        if len(self.alpha) != len(dyadic_range(self.M)):
            raise ValueError("alpha length must match the dyadic m-range")
        if len(self.beta) != len(dyadic_range(self.N)):
            raise ValueError("beta length must match the dyadic n-range")


def bilinear_root_sum(query: BilinearQuery) -> complex:
    """sum over m ~ M, n ~ N of alpha_m beta_n sum_{x^2 = a m n} e_q(h x)."""
    q = query.q
    roots = unit_roots(q)
    acc = _Kahan()
    ms = list(dyadic_range(query.M))
    ns = list(dyadic_range(query.N))
    for mi, m in enumerate(ms):
        am = query.a * m % q
        wm = query.alpha[mi]
        if wm == 0:
            continue
        for ni, n in enumerate(ns):
            wn = query.beta[ni]
            if wn == 0:
                continue
            v = am * n % q
            inner = 0.0 + 0.0j
            for x in kth_roots(v, 2, q):
                inner += roots[(query.h * x) % q]
            acc.add(wm * wn * inner)
    return acc.total


@dataclass(frozen=True)
class SmoothBump:
    """phi(x) = exp(1 - 1/(1 - t^2)) with t = (2x - 3N)/N, supported on (N, 2N).

    The support condition holds exactly; the derivative decay constants
    C_j = sup |phi^(j)(x)| * x^j are finite and measured numerically.
    """

    N: int

    def __call__(self, x) -> float:
        t = (2.0 * x - 3.0 * self.N) / self.N
        if abs(t) >= 1.0:
            return 0.0
        return math.exp(1.0 - 1.0 / (1.0 - t * t))

    def support(self) -> range:
        """Integer support: n in (N, 2N)."""
        return range(self.N + 1, 2 * self.N)

    def derivative_constants(self, max_order: int = 4, grid: int = 2000) -> list:
        """Measured C_j = max over the support grid of |phi^(j)(x)| * x^j, j = 0..max_order."""
        xs = np.linspace(self.N, 2 * self.N, grid)
        h = (xs[1] - xs[0]) / 8.0
        consts = []
        for j in range(max_order + 1):
            vals = np.array([self._derivative(x, j, h) for x in xs])
            consts.append(float(np.max(np.abs(vals) * xs**j)))
        return consts

    def _derivative(self, x: float, j: int, h: float) -> float:
        if j == 0:
            return self(x)
        coeffs = {
            1: ([-0.5, 0.5], [-1, 1]),
            2: ([1.0, -2.0, 1.0], [-1, 0, 1]),
            3: ([-0.5, 1.0, -1.0, 0.5], [-2, -1, 1, 2]),
            4: ([1.0, -4.0, 6.0, -4.0, 1.0], [-2, -1, 0, 1, 2]),
        }
        cs, offs = coeffs[j]
        return sum(c * self(x + o * h) for c, o in zip(cs, offs)) / h**j


def smoothed_root_sum(a: int, h: int, M: int, q, alpha, bump: SmoothBump) -> complex:
    """sum over m ~ M and integer n of alpha_m phi(n) sum_{x^2 = a m n} e_q(h x)."""
    q = _as_q(q)
    if a % q == 0:
        raise ValueError("a must be nonzero mod q")
    ms = list(dyadic_range(M))
    if len(alpha) != len(ms):
        raise ValueError("alpha length must match the dyadic m-range")
    roots = unit_roots(q)
    acc = _Kahan()
    for mi, m in enumerate(ms):
        wm = alpha[mi]
        if wm == 0:
            continue
        am = a * m % q
        for n in bump.support():
            phi_n = bump(n)
            if phi_n == 0.0:
                continue
            inner = 0.0 + 0.0j
            for x in kth_roots(am * n % q, 2, q):
                inner += roots[(h * x) % q]
            acc.add(wm * phi_n * inner)
    return acc.total


def root_sum_weight_table(a: int, h: int, q) -> np.ndarray:
    """f(v) = sum_{x^2 = a v} e_q(h x) for all v, via the root table (vectorized)."""
    q = _as_q(q)
    roots = unit_roots(q)
    out = np.zeros(q, dtype=np.complex128)
    xs = np.arange(q, dtype=np.int64)
    sq = (xs * xs) % q
    inva = pow(a % q, q - 2, q) if q > 2 else a % q
    # x contributes e_q(hx) to v = x^2 / a
    np.add.at(out, (sq * inva) % q, roots[(h * xs) % q])
    return out


def fourier_vs_gauss_residual(a: int, h: int, m: int, n: int, q) -> float:
    """|DFT_lambda of f_m at n  -  eps_q chi(a m n) e_q(-a m (4n)^{-1} h^2)|.

    f_m(v) = sum_{x^2 = a m v} e_q(h x); requires n and a*m*n nonzero mod q.
    """
    q = _as_q(q)
    if n % q == 0 or (a * m * n) % q == 0:
        raise ValueError("requires n and a*m*n nonzero mod q")
    tab = character_table(q)
    roots = unit_roots(q)
    f = root_sum_weight_table(a * m % q, h, q)
    lam = np.arange(q, dtype=np.int64)
    direct = np.sum(f * roots[(lam * n) % q]) / math.sqrt(q)
    inv4n = pow(4 * n % q, q - 2, q)
    closed = tab.eps_q * tab.chi[(a * m * n) % q] * tab.e((-a * m * inv4n * h * h) % q)
    return abs(direct - closed)


@dataclass(frozen=True)
class MomentReport:
    moment: float
    envelope: float
    ratio: float


def char_inverse_moment(c: int, U0: int, r: int, q) -> MomentReport:
    """sum_lambda |sum_{1<=u<=U0} chi(lambda+u) e_q(c (lambda+u)^{-1})|^{2r}.

    Terms with lambda + u = 0 vanish (chi(0) = 0 convention).  The envelope is
    q^(1/2) U0^(2r) + q U0^r: square-root cancellation off the diagonal plus
    the diagonal count.
    """
    q = _as_q(q)
    if r < 1:
        raise ValueError("r must be >= 1")
    if U0 < 0 or U0 > q:
        raise ValueError("requires 0 <= U0 <= q")
    if c % q == 0:
        raise ValueError("c must be nonzero mod q")
    if U0 == 0:
        return MomentReport(0.0, 0.0, 0.0)
    tab = character_table(q)
    roots = unit_roots(q)
    ys = np.arange(q, dtype=np.int64)
    inv = np.zeros(q, dtype=np.int64)
    inv[1:] = np.array([pow(int(y), q - 2, q) for y in range(1, q)], dtype=np.int64)
    w = np.asarray(tab.chi, dtype=np.float64) * roots[(c * inv) % q]
    w[0] = 0.0
    # inner(lambda) = sum_{u=1..U0} w[(lambda+u) mod q]: sliding circular window
    inner = np.zeros(q, dtype=np.complex128)
    for u in range(1, U0 + 1):
        inner += np.roll(w, -u)
    moment = float(np.sum(np.abs(inner) ** (2 * r)))
    envelope = math.sqrt(q) * U0 ** (2 * r) + q * U0**r
    return MomentReport(moment, envelope, moment / envelope)


def bilinear_envelope(q: int, M: int, N: int) -> float:
    return (
        q ** (1 / 8)
        * (N * M) ** (3 / 4)
        * (N ** (3 / 16) / q ** (1 / 16) + 1)
        * (M ** (3 / 16) / q ** (1 / 16) + 1)
    )


def smoothed_envelope(q: int, M: int, N: int, r: int) -> float:
    main = q ** (1 / 2 - 1 / (4 * r)) * N ** (1 / (2 * r)) * M ** (1 - 1 / (2 * r))
    return main * (1 + (M * N) ** 0.5 / q ** (1 / 2 - 1 / (4 * r)))


@dataclass(frozen=True)
class RatioReport:
    value: complex
    envelope: float
    ratio: float


def bilinear_bound_ratio(query: BilinearQuery) -> RatioReport:
    """|W| over its envelope (sup-norm-1 weights assumed; o(1) factors dropped)."""
    if max(abs(x) for x in query.alpha + query.beta) > 1 + 1e-12:
        raise ValueError("weights must have sup norm <= 1")
    w = bilinear_root_sum(query)
    env = bilinear_envelope(query.q, query.M, query.N)
    return RatioReport(w, env, abs(w) / env)


def smoothed_bound_ratio(a, h, M, q, alpha, bump: SmoothBump, r: int = 2) -> RatioReport:
    if max(abs(x) for x in alpha) > 1 + 1e-12:
        raise ValueError("weights must have sup norm <= 1")
    v = smoothed_root_sum(a, h, M, q, alpha, bump)
    env = smoothed_envelope(q, M, bump.N, r)
    return RatioReport(v, env, abs(v) / env)
