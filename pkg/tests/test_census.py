import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sumcontainers.census import (
    census,
    conjecture_bound,
    doubling_stats,
    enumerate_small_doubling,
    group_tightness_family,
    lower_bound_family,
    naive_small_doubling,
    real_binomial,
    theorem_bound,
    typicality_report,
)
from sumcontainers.errors import DomainError, ResourceError
from sumcontainers.group import FiniteAbelian, IntegerWindow, sumset
from sumcontainers.verify import min_ap_cover_length


def test_doubling_stats():
    assert doubling_stats(IntegerWindow(9), [1, 3, 5, 7]) == (7, Fraction(7, 4))
    with pytest.raises(DomainError):
        doubling_stats(IntegerWindow(3), [])


@pytest.mark.parametrize("n,s,K,want", [
    (4, 2, 2, 6),
    (5, 3, 2, 10),
    (5, 3, Fraction(5, 3), 4),
    (12, 4, 3, 495),
    (12, 4, 2, 42),
    (10, 3, 2, 120),
    (9, 4, Fraction(5, 2), 126),
])
def test_frozen_counts(n, s, K, want):
    g = IntegerWindow(n)
    assert enumerate_small_doubling(g, g.ground_set(), s, K)[0] == want


def test_minimum_doubling_count_closed_form():
    # |J + J| = 2s - 1 = 5 forces a 3-term AP: sum over differences d of (12 - 2d)
    g = IntegerWindow(12)
    assert enumerate_small_doubling(g, g.ground_set(), 3, Fraction(5, 3))[0] == sum(12 - 2 * d for d in range(1, 6))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 9), st.integers(1, 4), st.sampled_from([Fraction(3, 2), Fraction(2), Fraction(7, 3), Fraction(3)]))
def test_pruned_matches_naive_integers(n, s, K):
    g = IntegerWindow(n)
    assert enumerate_small_doubling(g, g.ground_set(), s, K) == naive_small_doubling(g, g.ground_set(), s, K)


@pytest.mark.parametrize("moduli", [(8,), (2, 4), (3, 3), (2, 2, 2)])
def test_pruned_matches_naive_groups(moduli):
    g = FiniteAbelian(moduli)
    for s in (2, 3, 4):
        assert enumerate_small_doubling(g, g.ground_set(), s, 2) == naive_small_doubling(g, g.ground_set(), s, 2)


def test_work_cap():
    g = IntegerWindow(30)
    with pytest.raises(ResourceError):
        enumerate_small_doubling(g, g.ground_set(), 10, 3, cap=1000)


def test_real_binomial():
    assert real_binomial(6, 3) == 20
    assert real_binomial(2.5, 3) == 0
    assert real_binomial(4.5, 2) == pytest.approx(4.5 * 3.5 / 2)
    assert conjecture_bound(0, 3, 3) == pytest.approx(real_binomial(4.5, 3))
    assert conjecture_bound(1, 3, 2) == 8 * 1


def test_theorem_bound_independent_formula():
    tb = theorem_bound(FiniteAbelian((16,)), 16, 4, 3)
    lam = min(3.0, math.log(4))
    exponent = 2 ** 9 * lam * 3 ** (1 / 6) * 4 ** (5 / 6) * math.sqrt(math.log(16))
    assert tb.beta == 16  # the whole group once the argument exceeds 16
    assert tb.log_value == pytest.approx(exponent + math.log(real_binomial((12 + 16) / 2, 4)), rel=1e-12)
    assert tb.value == math.inf
    ints = theorem_bound(IntegerWindow(16), 16, 4, 3)
    assert ints.beta == 1
    assert ints.log_value == pytest.approx(exponent + math.log(real_binomial(6.5, 4)), rel=1e-12)
    assert ints.log_value == pytest.approx(4509.298780114104, rel=1e-12)


def test_theorem_bound_at_K2_and_domain():
    tb = theorem_bound(IntegerWindow(50), 50, 5, 2)
    assert tb.lam == pytest.approx(math.log(5)) and tb.beta == 1
    with pytest.raises(DomainError):
        theorem_bound(IntegerWindow(50), 50, 5, Fraction(3, 2))


def test_lower_bound_family_counts():
    fam = lower_bound_family(100, 8, 8)
    assert fam.sizes == (6, 2) and fam.progression == 8
    assert fam.guaranteed == math.comb(50, 2) * math.comb(8, 6) == 34300
    assert fam.full_size == math.comb(92, 2) * math.comb(8, 6) == 117208
    g = IntegerWindow(100)
    for J in fam.sample(random.Random(3), 50):
        assert len(set(J)) == 8 and len(sumset(g, J, J)) <= 64


def test_lower_bound_family_enumeration_small():
    fam = lower_bound_family(12, 4, 4)
    members = list(fam.members())
    assert len(members) == fam.full_size == math.comb(10, 1) * math.comb(2, 3)
    fam = lower_bound_family(16, 8, 4)
    members = list(fam.members())
    assert len(set(members)) == fam.full_size >= fam.guaranteed
    g = IntegerWindow(16)
    assert all(len(sumset(g, J, J)) <= 32 for J in members)


def test_lower_bound_family_degenerate_and_infeasible():
    fam = lower_bound_family(20, 5, 4)
    assert fam.degenerate and fam.guaranteed == 0 and list(fam.members()) == []
    with pytest.raises(DomainError):
        lower_bound_family(20, 1, 8)


def test_tightness_family_l2():
    fam = group_tightness_family(FiniteAbelian((9,)), 9, 3, l=2)
    assert len(fam.subgroup) == 3 and len(fam.base) == 6
    assert fam.guaranteed == math.comb(6, 3)
    members = list(fam.members())
    assert len(members) == 20
    g = FiniteAbelian((9,))
    assert all(len(sumset(g, J, J)) <= 9 for J in members)


def test_tightness_family_default_uses_largest_subgroup():
    fam = group_tightness_family(FiniteAbelian((9,)), 9, 3)
    assert len(fam.subgroup) == 9 and fam.guaranteed == math.comb(9, 3)
    with pytest.raises(DomainError):
        group_tightness_family(FiniteAbelian((9,)), 8, 3, l=2)
    with pytest.raises(DomainError):
        group_tightness_family(IntegerWindow(9), 9, 3)


def test_typicality_matches_brute_force_oracle():
    g = IntegerWindow(12)
    _, sets = enumerate_small_doubling(g, g.ground_set(), 3, 2)
    report = typicality_report(g, sets, 0, 5)
    assert report.total_sets == 220
    assert report.fraction == Fraction(90, 220)
    assert report.structured_sets == sum(min_ap_cover_length(J, 0) <= 5 for J in sets)


def test_census_record():
    rec, sets = census(IntegerWindow(5), 3, 2, oracle=True, bounds=True)
    assert rec.count == 10 == len(sets) and rec.oracle_match
    assert rec.threshold == 6 and rec.K == "2"
    assert rec.bound_conjecture == pytest.approx(real_binomial(3, 3))
    assert rec.bound_theorem is not None
    assert rec.to_dict()["count"] == 10
