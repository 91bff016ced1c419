#!/usr/bin/env python3
"""Print how the interval-root energy tracks its envelope as N grows.

For each prime q: T(N; j, q) maxed over power-coset representatives j,
against (N^(3/2)/q^(1/2) + 1) * N^2, plus the zero count of the cubic
product polynomial against N^2.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from modroots.energy import max_energy_over_j
from modroots.prodpoly import count_box_zeros_upto


def main():
    print(f"{'q':>6s} {'N':>4s} {'max_j T':>10s} {'envelope':>12s} {'ratio':>8s}")
    for q in (101, 499, 1009):
        for N in (4, 8, 16, 32, 64):
            if N > q:
                continue
            t, _ = max_energy_over_j(2, N, q)
            env = (N**1.5 / q**0.5 + 1) * N * N
            print(f"{q:6d} {N:4d} {t:10d} {env:12.2f} {t / env:8.3f}")

    print("\ncubic product polynomial zero counts:")
    counts = count_box_zeros_upto(3, 30)
    print(f"{'N':>4s} {'T(N)':>8s} {'2N^2-N':>8s} {'T/N^2':>8s}")
    for N in (5, 10, 15, 20, 25, 30):
        t = counts[N - 1]
        print(f"{N:4d} {t:8d} {2 * N * N - N:8d} {t / N**2:8.4f}")


if __name__ == "__main__":
    main()
