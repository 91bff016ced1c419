import math
from fractions import Fraction

import pytest

from modroots.errors import BudgetExceededError
from modroots.lattice import (
    BoxBody,
    CongruenceLattice,
    box_points,
    count_points,
    dual_lattice,
    dual_minima,
    successive_minima,
    trichotomy_check,
    verify_geometry,
)
from modroots.modular import primes_in
from modroots.rng import SplitMix64


def L_x_eq_cy(c, q):
    """The lattice x = c*y (mod q) as a congruence lattice."""
    return CongruenceLattice((1, (-c) % q), q)


def test_count_examples():
    assert count_points(L_x_eq_cy(2, 5), BoxBody((2, 2))) == 5
    assert count_points(L_x_eq_cy(2, 5), BoxBody((0, 0))) == 1
    assert count_points(CongruenceLattice((1, 1), 2), BoxBody((1, 1))) == 5


def test_count_against_brute_force():
    rng = SplitMix64(2)
    for _ in range(50):
        q = rng.choice([2, 3, 5, 7, 11, 13])
        d = rng.choice([2, 3])
        coeffs = tuple(rng.randint(1, q - 1) if q > 1 else 1 for _ in range(d))
        bounds = [rng.randint(0, 6) for _ in range(d)]
        lat = CongruenceLattice(coeffs, q)
        box = BoxBody(tuple(bounds))
        brute = 0
        from itertools import product

        for v in product(*[range(-b, b + 1) for b in bounds]):
            if lat.contains(v):
                brute += 1
        assert count_points(lat, box) == brute
        pts = box_points(lat, bounds)
        assert len(pts) == brute


def test_count_odd_by_negation_symmetry():
    rng = SplitMix64(8)
    for _ in range(30):
        q = rng.choice(primes_in(3, 200))
        coeffs = (rng.randint(1, q - 1), rng.randint(1, q - 1))
        w = (Fraction(rng.randint(1, 40), rng.choice([1, 2, 3])),) * 2
        assert count_points(CongruenceLattice(coeffs, q), BoxBody(w)) % 2 == 1


def test_minima_examples():
    m = successive_minima(L_x_eq_cy(2, 5), BoxBody((2, 2)))
    assert m.lambdas == (1, 1)
    z = successive_minima(CongruenceLattice((1, 1, 1), 1), BoxBody((1, 1, 1)))
    assert z.lambdas == (1, 1, 1)
    m101 = successive_minima(L_x_eq_cy(10, 101), BoxBody((2, 2)))
    assert m101.lambdas[0] == 5


def test_minima_ordering_and_independence():
    rng = SplitMix64(14)
    for _ in range(60):
        q = rng.choice(primes_in(3, 2000))
        d = rng.choice([2, 3])
        coeffs = tuple(rng.randint(1, q - 1) for _ in range(d))
        w = tuple(Fraction(rng.randint(1, 50), rng.choice([1, 2])) for _ in range(d))
        m = successive_minima(CongruenceLattice(coeffs, q), BoxBody(w))
        assert all(m.lambdas[i] <= m.lambdas[i + 1] for i in range(d - 1))
        if d == 2:
            (a1, a2), (b1, b2) = m.witnesses
            assert a1 * b2 - a2 * b1 != 0
        else:
            u, v, w3 = m.witnesses
            det = (
                u[0] * (v[1] * w3[2] - v[2] * w3[1])
                - u[1] * (v[0] * w3[2] - v[2] * w3[0])
                + u[2] * (v[0] * w3[1] - v[1] * w3[0])
            )
            assert det != 0
        box = BoxBody(w)
        for lam, wit in zip(m.lambdas, m.witnesses):
            assert box.norm(wit) == lam


def _greedy_from_scored(scored, d):
    from modroots.lattice import _independent

    scored.sort(key=lambda t: (t[0], t[1]))
    lams, wits = [], []
    for norm, v in scored:
        if _independent(wits, list(v)):
            wits.append(list(v))
            lams.append(norm)
            if len(wits) == d:
                break
    return tuple(lams)


def test_minima_against_brute_force_oracle():
    from itertools import product

    rng = SplitMix64(505)
    for _ in range(60):
        d = 2 if rng.below(2) == 0 else 3
        q = rng.choice([2, 3, 5, 7, 11])
        coeffs = tuple(rng.randint(1, q - 1) if q > 1 else 1 for _ in range(d))
        w = tuple(Fraction(rng.randint(1, 5), rng.choice([1, 2])) for _ in range(d))
        lat = CongruenceLattice(coeffs, q)
        R = Fraction(q, 1) / min(w)  # q*e_i witnesses bound the largest minimum
        bounds = [int(R * wi) + 1 for wi in w]
        scored = []
        for v in product(*[range(-b, b + 1) for b in bounds]):
            if not any(v) or sum(a * x for a, x in zip(coeffs, v)) % q:
                continue
            scored.append((max(Fraction(abs(x)) / wi for x, wi in zip(v, w)), v))
        expect = _greedy_from_scored(scored, d)
        assert successive_minima(lat, BoxBody(w)).lambdas == expect


def test_dual_minima_against_brute_force_oracle():
    from itertools import product

    rng = SplitMix64(404)
    for _ in range(60):
        d = 2 if rng.below(2) == 0 else 3
        q = rng.choice([2, 3, 5, 7, 11, 13])
        coeffs = tuple(rng.randint(1, q - 1) if q > 1 else 1 for _ in range(d))
        w = tuple(Fraction(rng.randint(1, 6), rng.choice([1, 2, 3])) for _ in range(d))
        lat = CongruenceLattice(coeffs, q)
        R = max(w)  # q*e_j / q = e_j has dual norm w_j
        bounds = [int(R * q / wi) + 1 for wi in w]
        inv = pow(coeffs[0] % q, -1, q) if q > 1 else 0
        scored = []
        for m in product(*[range(-b, b + 1) for b in bounds]):
            if not any(m):
                continue
            if q > 1:
                lam = (m[0] * inv) % q
                if any((ai * lam - mi) % q for ai, mi in zip(coeffs, m)):
                    continue
            scored.append((sum(Fraction(abs(x)) * wi for x, wi in zip(m, w)) / q, m))
        expect = _greedy_from_scored(scored, d)
        assert dual_minima(lat, BoxBody(w)).lambdas == expect


def test_minima_degenerate_flag():
    m = successive_minima(L_x_eq_cy(2, 5), BoxBody((2, 0)))
    assert m.degenerate and m.lambdas == ()


def test_dual_membership_example():
    D = dual_lattice(CongruenceLattice((1, 3), 5))
    assert D.contains((Fraction(1, 5), Fraction(3, 5)))
    assert D.contains((0, 0))
    assert not D.contains((Fraction(1, 5), Fraction(2, 5)))
    assert not D.contains((Fraction(1, 7), Fraction(3, 7)))


def test_dual_reciprocity_integer_inner_products():
    rng = SplitMix64(19)
    for _ in range(20):
        q = rng.choice(primes_in(3, 100))
        d = rng.choice([2, 3])
        coeffs = tuple(rng.randint(1, q - 1) for _ in range(d))
        lat = CongruenceLattice(coeffs, q)
        primal = box_points(lat, [6] * d)
        dm = dual_minima(lat, BoxBody((3,) * d))
        for wit in dm.witnesses:
            # wit is q * (dual vector); integrality of <dual, primal>
            for v in primal.tolist():
                assert sum(a * b for a, b in zip(wit, v)) % q == 0


def test_geometry_anchor():
    rep = verify_geometry(L_x_eq_cy(2, 5), BoxBody((2, 2)))
    assert rep.minkowski_ok
    assert rep.minkowski_slack == Fraction(8, 5)
    assert rep.counting_ok and rep.transference_ok
    z = verify_geometry(CongruenceLattice((1, 1, 1), 1), BoxBody((1, 1, 1)))
    assert z.all_ok


def test_geometry_randomized():
    rng = SplitMix64(100)
    for _ in range(200):
        d = rng.choice([2, 3])
        q = rng.choice(primes_in(3, 10000))
        coeffs = tuple(rng.randint(1, q - 1) for _ in range(d))
        e = rng.uniform01() * math.log(2000)
        ws = tuple(
            Fraction(max(1, int(math.exp(rng.uniform01() * e))), rng.choice([1, 2, 3, 4]))
            for _ in range(d)
        )
        rep = verify_geometry(CongruenceLattice(coeffs, q), BoxBody(ws))
        assert rep.all_ok, (d, q, coeffs, ws)


def test_budget_exceeded():
    with pytest.raises(BudgetExceededError):
        count_points(L_x_eq_cy(2, 10007), BoxBody((10**5, 10**5)), budget=10**3)


def test_trichotomy_examples():
    res = trichotomy_check(1, 1, 1, 10, 10, 10, 997)
    assert res.point_count == 331 and res.holds
    degenerate = trichotomy_check(3, 5, 7, 0, 0, 0, 97)
    assert degenerate.point_count == 1
    assert degenerate.degenerate_box and not res.degenerate_box


def test_trichotomy_randomized():
    rng = SplitMix64(55)
    for _ in range(150):
        q = rng.choice(primes_in(3, 5000))
        a, b, c = (rng.randint(1, q - 1) for _ in range(3))
        L, M, N = (rng.randint(1, 12) for _ in range(3))
        res = trichotomy_check(a, b, c, L, M, N, q)
        assert res.holds or res.degenerate_box, (q, a, b, c, L, M, N, res)


def test_lattice_validation():
    with pytest.raises(ValueError):
        CongruenceLattice((2, 4), 6)
    with pytest.raises(ValueError):
        CongruenceLattice((1,), 5)
    with pytest.raises(ValueError):
        BoxBody((-1, 2))
