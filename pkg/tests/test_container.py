import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sumcontainers.container import (
    ContainerParams,
    Fingerprint,
    build_container,
    delta_explicit,
    delta_table,
    ladder,
    replay_container,
    step_down,
    trace_container,
)
from sumcontainers.errors import DomainError
from sumcontainers.group import IntegerWindow
from sumcontainers.hypergraph import BoundedHypergraph, make_edge, minimal_R
from sumcontainers.sumset_tree import build_sum_hypergraph
from sumcontainers.verify import _random_independent, _random_params, random_bounded_hypergraph


def test_ladder_and_step():
    assert ladder(1, 2) == [(1, 2), (1, 1), (1, 0)]
    assert ladder(0, 1) == [(0, 1)]
    assert ladder(2, 0) == [(2, 0), (1, 0)]
    assert step_down(1, 2) == (1, (1, 1))
    assert step_down(1, 0) == (0, (0, 0))


def test_params_derived_values():
    p = ContainerParams(1, 2, 4, 2, 6, 3)
    assert p.delta == Fraction(1, 2 ** 12 * 4)
    assert p.alpha_s(1) == Fraction(1, 16)
    # s = 3 > r1: two V1 shrinks and one V0 shrink
    assert p.beta_s(3, 10) == Fraction(1, 2 ** 12) * Fraction(2, 10) ** 2 * Fraction(2, 6)
    with pytest.raises(DomainError):
        ContainerParams(1, 2, 0, 1, 1, 1)


def test_delta_table_by_hand():
    p = ContainerParams(1, 2, 1, 1, 2, 1)
    base = {(0, 1): 3, (0, 2): 1, (1, 0): 4, (1, 1): 2, (1, 2): 1}
    t = delta_table(base, p, 4)
    assert t[1, 1, 1, 1] == max(2 * 1, Fraction(1, 4) * 2)
    assert t[1, 1, 0, 1] == max(2 * 1, Fraction(1, 4) * 3)
    assert t[1, 0, 1, 0] == max(2 * t[1, 1, 1, 1], Fraction(1, 4) * t[1, 1, 1, 0])


@settings(max_examples=60)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(1, 12), st.integers(1, 12), st.data())
def test_delta_table_matches_closed_form(r0, r1, m, v1, data):
    if r0 + r1 == 0:
        r1 = 1
    b = data.draw(st.integers(1, min(m, v1)))
    p = ContainerParams(r0, r1, 1, b, m, 1)
    base = {(l0, l1): data.draw(st.integers(0, 9)) for l0 in range(r0 + 1) for l1 in range(r1 + 1)
            if (l0, l1) != (0, 0)}
    t = delta_table(base, p, v1)
    for (i0, i1, l0, l1), v in t.items():
        assert v == delta_explicit(base, p, v1, i0, i1, l0, l1)


def test_tiny_diagonal_case():
    # H(emptyset, {1}) has the single edge ({2}, {1}); (I, J) = ({2}, {1})
    h = build_sum_hypergraph(IntegerWindow(1), [1])
    p = ContainerParams(1, 2, 1, 1, 1, 1)
    fp, pair = build_container(h, {2}, {1}, p)
    assert fp == Fingerprint((), (1,))
    assert (pair.a, pair.b) == ((2,), (1,))
    assert replay_container(h, fp, p) == pair


def test_guard_variant_loses_the_diagonal_constraint():
    h = build_sum_hypergraph(IntegerWindow(1), [1])
    p = ContainerParams(1, 2, 1, 1, 1, 1)
    run = trace_container(h, {2}, {1}, p, carry=False)
    assert run.guard_events == [1]
    assert run.container.a == ()
    assert any("neither" in v for v in run.violations)


def test_literal_c4_reading():
    h = BoundedHypergraph([1, 2], [10], 1, 1, [make_edge([1], [10]), make_edge([2], [10])])
    p = ContainerParams(1, 1, minimal_R(h, 1, 2, 1), 1, 2, 1)
    fixed = build_container(h, {1, 2}, {10}, p)[1]
    literal = build_container(h, {1, 2}, {10}, p, literal_c4=True)[1]
    assert set(fixed.a) <= {1, 2} and 10 in fixed.b
    assert literal.b == ()


def test_trace_rejects_dependent_pairs():
    h = build_sum_hypergraph(IntegerWindow(2), [1, 2])
    p = ContainerParams(1, 2, minimal_R(h, 1, 3, 1), 1, 3, 1)
    with pytest.raises(DomainError):
        trace_container(h, set(), {1}, p)


def test_verbose_trace_lines():
    h = build_sum_hypergraph(IntegerWindow(4), [1, 2, 3, 4])
    p = ContainerParams(1, 2, minimal_R(h, 2, 4, 2), 2, 4, 2)
    run = trace_container(h, {2, 3, 4}, {1, 2}, p, verbose=True)
    assert run.trace and all(line.startswith(("j=", "carried")) for line in run.trace)
    assert "e(G*)=" in run.trace[0]


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_contract_and_replay_random(seed):
    rng = random.Random(seed)
    h = random_bounded_hypergraph(rng, max_vertices=8)
    p = _random_params(rng, h)
    pair = _random_independent(rng, h, p.m)
    if pair is None:
        return
    I, J = pair
    run = trace_container(h, I, J, p)
    assert [v for v in run.violations if not v.startswith("round")] == []
    assert replay_container(h, run.fingerprint, p) == run.container


def test_equal_fingerprints_equal_containers():
    h = build_sum_hypergraph(IntegerWindow(6), range(1, 7))
    p = ContainerParams(1, 2, minimal_R(h, 2, 6, 3), 2, 6, 3)
    seen = {}
    for J in ([1], [2], [1, 2], [3], [1, 3], [2, 3]):
        I = {a + b for a in J for b in J}
        fp, pair = build_container(h, I, J, p)
        assert seen.setdefault(fp, pair) == pair
