from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sumcontainers.errors import DomainError, ResourceError
from sumcontainers.group import FiniteAbelian, IntegerWindow
from sumcontainers.supersat import (
    APStructure,
    SupersatHolds,
    alpha,
    alpha_bruteforce,
    as_fraction,
    check_pollard_general,
    check_supersat_corollary,
    classify_dichotomy,
    convolution,
    deficient_pair_count,
    dichotomy_preconditions,
    find_ap_cover,
    truncated_sum,
)
from sumcontainers.verify import min_ap_cover_length

Z = IntegerWindow(50)


def test_as_fraction_reads_decimal_repr():
    assert as_fraction(0.05) == Fraction(1, 20)
    assert as_fraction("5/3") == Fraction(5, 3)


def test_convolution_counts_ordered_pairs():
    assert convolution(Z, [1, 2], [1, 2]) == {2: 1, 3: 2, 4: 1}
    assert sum(convolution(Z, [1, 5, 9], [2, 3]).values()) == 6


def test_truncated_sum():
    assert truncated_sum(Z, [1, 2, 3], [1, 2, 3], 1) == 5
    assert truncated_sum(Z, [1, 2, 3], [1, 2, 3], 2) == 1 + 2 + 2 + 2 + 1
    with pytest.raises(DomainError):
        truncated_sum(Z, [1], [1], 0)


def test_pollard_equality_on_interval():
    # intervals are extremal in Z: lhs = t(|U| + |V| - t) exactly
    rep = check_pollard_general(Z, range(1, 8), range(1, 5), 3)
    assert rep.alpha == 1
    assert rep.lhs == 3 * (7 + 4 - 3)
    assert rep.holds


def test_pollard_subgroup_case():
    z6 = FiniteAbelian((6,))
    H = [(0,), (2,), (4,)]
    rep = check_pollard_general(z6, H, H, 3)
    assert rep.alpha == 3
    assert rep.lhs == 9 and rep.rhs == 0


def test_pollard_domain():
    with pytest.raises(DomainError):
        check_pollard_general(Z, [1], [1, 2], 1)


@settings(max_examples=200)
@given(st.sampled_from([(5,), (6,), (8,), (2, 4), (3, 3), (2, 2, 2)]), st.data())
def test_pollard_random_finite(factors, data):
    g = FiniteAbelian(factors)
    elems = g.elements()
    U = data.draw(st.sets(st.sampled_from(elems), min_size=1, max_size=6))
    V = data.draw(st.sets(st.sampled_from(elems), min_size=1, max_size=len(U)))
    t = data.draw(st.integers(1, len(V)))
    assert check_pollard_general(g, U, V, t).holds


@settings(max_examples=100)
@given(st.sampled_from([(4,), (6,), (2, 2), (8,), (2, 4), (9,)]), st.integers(1, 9), st.integers(1, 4))
def test_alpha_formula_matches_literal_search(factors, u, v):
    g = FiniteAbelian(factors)
    elems = g.elements()
    u, v = min(u, g.order), min(v, g.order)
    assert alpha(g, elems[:u], elems[-v:]) == alpha_bruteforce(g, elems[:u], elems[-v:])


def test_alpha_integer_is_one():
    assert alpha(Z, [1, 2, 3], [4, 5]) == 1


def test_deficient_pairs():
    # B = {1,2}, A = {2,3}: the only pair outside A is (2,2)
    assert deficient_pair_count(Z, [2, 3], [1, 2]) == 1
    assert deficient_pair_count(Z, [], [1, 2, 3]) == 9


def test_supersat_corollary_examples():
    rep = check_supersat_corollary(Z, [2, 3, 4, 5, 6], [1, 2, 3, 10], Fraction(1, 10))
    assert rep.beta == 1 and rep.hypothesis_met and rep.holds
    assert rep.deficient_pairs == 7
    with pytest.raises(DomainError):
        check_supersat_corollary(Z, [1], [1], Fraction(1, 2))


@settings(max_examples=150)
@given(st.sampled_from([(6,), (8,), (2, 4), (9,), (12,)]), st.data(),
       st.sampled_from([Fraction(1, 20), Fraction(1, 10), Fraction(1, 5)]))
def test_supersat_corollary_never_fails(factors, data, eps):
    g = FiniteAbelian(factors)
    A = data.draw(st.sets(st.sampled_from(g.elements()), min_size=1))
    B = data.draw(st.sets(st.sampled_from(g.elements()), min_size=1))
    assert check_supersat_corollary(g, A, B, eps).holds


def test_ap_cover_examples():
    c = find_ap_cover(Z, [1, 3, 5, 9, 20], 1)
    assert (c.start, c.difference, c.length, c.outliers) == (1, 2, 5, (20,))
    assert find_ap_cover(Z, [4], 0).length == 1
    assert find_ap_cover(Z, [4, 8], 2).length == 0
    assert find_ap_cover(Z, [], 0).length == 0


def test_ap_cover_domain_and_cap():
    with pytest.raises(DomainError):
        find_ap_cover(FiniteAbelian((5,)), [(1,)], 0)
    with pytest.raises(ResourceError):
        find_ap_cover(Z, range(100), 0, cap=10)


@settings(max_examples=200)
@given(st.sets(st.integers(-15, 15), max_size=7), st.integers(0, 3))
def test_ap_cover_is_minimal(B, k):
    B = sorted(B)
    c = find_ap_cover(Z, B, k)
    assert c.length == min_ap_cover_length(B, k)
    assert len([x for x in B if not c.covers(x)]) <= k


def test_min_ap_oracle_by_hand():
    assert min_ap_cover_length([1, 2, 4], 0) == 4
    assert min_ap_cover_length([1, 3, 7, 9], 0) == 5
    assert min_ap_cover_length([1, 3, 7, 9], 1) == 4


def _interval_instance(t=1, Ks=600, s=6):
    K = Fraction(Ks, s)
    eps = Fraction(t, 2 * Ks)
    B = list(range(1, 301))
    A = list(range(2, 602))[:Ks]
    return A, B, K, s, eps


def test_dichotomy_interval_gives_ap():
    A, B, K, s, eps = _interval_instance()
    verdict = classify_dichotomy(Z, A, B, K, s, eps)
    assert isinstance(verdict, APStructure)
    # 8 eps K s = 4 outliers may be dropped from the ends
    assert verdict.cover.length == 296 and verdict.cover.difference == 1


def test_dichotomy_sparse_sumset_gives_pairs():
    A, B, K, s, eps = _interval_instance()
    verdict = classify_dichotomy(Z, A[:100], B, K, s, eps)
    assert isinstance(verdict, SupersatHolds)


def test_dichotomy_preconditions():
    A, B, K, s, eps = _interval_instance()
    with pytest.raises(DomainError):
        dichotomy_preconditions(A, B, K, s, Fraction(1, 100))
    with pytest.raises(DomainError):
        dichotomy_preconditions(A, B[:200], K, s, eps)
    with pytest.raises(DomainError):
        classify_dichotomy(FiniteAbelian((5,)), A, B, K, s, eps)
