import pytest
from hypothesis import given, settings, strategies as st

from modroots.energy import energy_of
from modroots.errors import BudgetExceededError
from modroots.gowers import character_lemma_report, gowers_norm, shift_intersection
from modroots.rng import SplitMix64
from modroots.sets import IndicatorSet


def test_shift_intersection_examples():
    A = IndicatorSet.of(7, [1, 3, 4, 6])
    assert shift_intersection(A, []).result == A
    assert shift_intersection(A, [0]).result == A
    # exhaustive: x in result iff x and x+2 are both in A
    expect = {x for x in A.members if (x + 2) % 7 in A.members}
    assert shift_intersection(A, [2]).result.members == expect == {1, 4, 6}


def test_gowers_norm_anchors():
    A = IndicatorSet.of(7, [1, 3, 4, 6])
    assert gowers_norm(A, 2) == 44
    Z5 = IndicatorSet.of(5, range(5))
    assert gowers_norm(Z5, 2) == 125
    assert gowers_norm(Z5, 3) == 625
    single = IndicatorSet.of(11, [4])
    for k in (1, 2, 3, 4):
        assert gowers_norm(single, k) == 1


def test_norm_equals_energy_cross_module():
    rng = SplitMix64(17)
    for _ in range(40):
        q = rng.choice([7, 11, 13, 17, 23])
        A = IndicatorSet(q, rng.subset(q, rng.randint(0, q)))
        assert gowers_norm(A, 2) == energy_of(A, 2)


def test_recursion_vs_cube_count_definition():
    # U^k literally counts (k+1)-dimensional parallelepipeds with vertices in A
    rng = SplitMix64(23)
    for _ in range(10):
        q = rng.choice([5, 7, 11])
        A = IndicatorSet(q, rng.subset(q, rng.randint(1, q)))
        members = A.members
        for k in (2, 3):
            count = 0
            from itertools import product

            for x0 in range(q):
                for xs in product(range(q), repeat=k):
                    if all(
                        (x0 + sum(e * x for e, x in zip(eps, xs))) % q in members
                        for eps in product((0, 1), repeat=k)
                    ):
                        count += 1
            assert gowers_norm(A, k) == count


def test_shift_count_identity():
    rng = SplitMix64(31)
    for _ in range(30):
        q = rng.choice([7, 13, 19, 29])
        A = IndicatorSet(q, rng.subset(q, rng.randint(0, q)))
        total = sum(shift_intersection(A, [s]).result.cardinality for s in range(q))
        assert total == A.cardinality**2


def test_char_lemmas_random_sets():
    rng = SplitMix64(41)
    for q in (31, 61):
        for _ in range(20):
            A = IndicatorSet(q, rng.subset(q, rng.randint(2, q)))
            rep = character_lemma_report(A, 2)
            assert rep.all_ok


def test_char_lemmas_full_group_and_singleton():
    Zq = IndicatorSet.of(11, range(11))
    rep = character_lemma_report(Zq, 2)
    assert rep.all_ok
    single = IndicatorSet.of(11, [3])
    rep1 = character_lemma_report(single, 2)
    assert rep1.all_ok and rep1.growth_ratio == 1.0 and rep1.energy_ratio == 1.0


def test_char_lemmas_empty_vacuous():
    rep = character_lemma_report(IndicatorSet(11, frozenset()), 2)
    assert rep.vacuous and rep.all_ok


def test_budget_and_cap():
    A = IndicatorSet.of(97, range(50))
    with pytest.raises(BudgetExceededError):
        gowers_norm(A, 4, budget=10**3)
    with pytest.raises(BudgetExceededError):
        gowers_norm(A, 9)


@given(st.integers(3, 19), st.integers(0, 2**62))
@settings(max_examples=30, deadline=None)
def test_u3_recursion_identity_property(q, seed):
    # U^3(A) = sum over s of U^2(A_s), with the sum restricted to s in A-A
    rng = SplitMix64(seed)
    A = IndicatorSet(q, rng.subset(q, rng.randint(0, q)))
    total = sum(
        energy_of(shift_intersection(A, [s]).result, 2) for s in range(q)
    )
    if A.cardinality:
        assert gowers_norm(A, 3) == total
    else:
        assert gowers_norm(A, 3) == 0
