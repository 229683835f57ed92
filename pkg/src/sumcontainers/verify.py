"""Invariant suites run by ``sumcontainers verify`` and by the acceptance tests.

Each suite returns a ``SuiteResult``; ``scale="quick"`` shrinks the inputs so
the whole set runs in seconds, ``scale="full"`` uses the sizes the package is
validated at.
"""
from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Callable, Dict, List

from .census import (
    doubling_stats,
    enumerate_small_doubling,
    group_tightness_family,
    lower_bound_family,
    naive_small_doubling,
)
from .container import (
    ContainerParams,
    codegree_indices,
    delta_explicit,
    delta_table,
    ladder,
    replay_container,
    trace_container,
)
from .errors import DomainError, ResourceError, VerificationError
from .group import FiniteAbelian, IntegerWindow, sumset
from .hypergraph import BoundedHypergraph, make_edge, minimal_R
from .sumset_tree import build_container_family, build_sum_hypergraph, integer_window_instance, verify_family
from .supersat import (
    SupersatHolds,
    alpha,
    alpha_bruteforce,
    classify_dichotomy,
    convolution,
    find_ap_cover,
)

MAX_REPORTED = 20


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    failures: List[str] = field(default_factory=list)
    elapsed: float = 0.0
    detail: Dict = field(default_factory=dict)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        extra = f"; first failure: {self.failures[0]}" if self.failures else ""
        failed = self.detail.get("failed", len(self.failures))
        return (f"{verdict} {self.name}: {self.checked} checks, {failed} failures, "
                f"{self.elapsed:.1f}s{extra}")


class _Tally:
    def __init__(self):
        self.checked = 0
        self.failed = 0
        self.failures: List[str] = []

    def check(self, ok: bool, msg: Callable[[], str]):
        self.checked += 1
        if not ok:
            self.failed += 1
            if len(self.failures) < MAX_REPORTED:
                self.failures.append(msg())


def _result(name: str, tally: _Tally, start: float, **detail) -> SuiteResult:
    failures = list(tally.failures)
    if tally.failed > len(failures):
        failures.append(f"... {tally.failed - len(failures)} more")
    return SuiteResult(name, tally.failed == 0, tally.checked, failures,
                       time.perf_counter() - start, dict(detail, failed=tally.failed))


def small_abelian_groups(max_order: int = 12) -> List[FiniteAbelian]:
    """One representative of each abelian group of order ``2..max_order`` (invariant-factor form)."""
    out = []

    def chains(n, prev):
        # invariant factors d1 | d2 | ... with product n, listed smallest first
        if n == 1:
            yield ()
            return
        for d in range(2, n + 1):
            if n % d == 0 and (prev is None or d % prev == 0):
                for rest in chains(n // d, d):
                    yield (d,) + rest

    for order in range(2, max_order + 1):
        for factors in chains(order, None):
            out.append(FiniteAbelian(factors))
    return out


def _subsets(elems, max_size: int):
    for k in range(1, max_size + 1):
        yield from itertools.combinations(elems, k)


def suite_pollard(scale: str = "full") -> SuiteResult:
    """Truncated-convolution lower bound on every small pair of sets."""
    start = time.perf_counter()
    tally = _Tally()
    zmax = 9 if scale == "full" else 6
    gmax, vmax = (12, 4) if scale == "full" else (8, 3)
    cases = [(IntegerWindow(zmax), list(_subsets(range(1, zmax + 1), zmax)))]
    cases += [(g, list(_subsets(g.elements(), vmax))) for g in small_abelian_groups(gmax)]
    for g, subsets in cases:
        for U in subsets:
            for V in subsets:
                if len(V) > len(U):
                    continue
                conv = list(convolution(g, U, V).values())
                a = alpha(g, U, V)
                for t in range(1, len(V) + 1):
                    lhs = sum(min(c, t) for c in conv)
                    rhs = t * (len(U) + len(V) - t - a)
                    tally.check(lhs >= rhs, lambda: f"{g.spec} U={U} V={V} t={t}: {lhs} < {rhs}")
    return _result("pollard", tally, start)


def suite_alpha(scale: str = "full") -> SuiteResult:
    """Subgroup-order formula for alpha against the literal subset search."""
    start = time.perf_counter()
    tally = _Tally()
    gmax, vmax = (12, 4) if scale == "full" else (8, 3)
    rng = random.Random(7)
    for g in small_abelian_groups(gmax):
        elems = g.elements()
        for u in range(1, g.order + 1):
            for v in range(1, min(vmax, g.order) + 1):
                for _ in range(2):
                    U = rng.sample(elems, u)
                    V = rng.sample(elems, v)
                    fast, slow = alpha(g, U, V), alpha_bruteforce(g, U, V)
                    tally.check(fast == slow, lambda: f"{g.spec} |U|={u} |V|={v}: {fast} != {slow}")
    return _result("alpha-oracle", tally, start)


def random_bounded_hypergraph(rng: random.Random, r0: int = 1, r1: int = 2,
                              max_vertices: int = 12) -> BoundedHypergraph:
    n0 = rng.randint(max(1, r0), max_vertices)
    n1 = rng.randint(max(1, r1), max_vertices)
    V0 = list(range(n0))
    V1 = list(range(100, 100 + n1))
    edges = []
    for _ in range(rng.randint(1, 3 * max_vertices)):
        k0, k1 = rng.randint(0, r0), rng.randint(0, r1)
        if k0 + k1 == 0:
            k0, k1 = (1, 0) if r0 else (0, 1)
        edges.append(make_edge(rng.sample(V0, k0), rng.sample(V1, k1)))
    return BoundedHypergraph(V0, V1, r0, r1, edges)


def _random_params(rng: random.Random, h: BoundedHypergraph) -> ContainerParams:
    m = rng.randint(1, max(1, h.v0_count))
    b = rng.randint(1, min(m, h.v1_count))
    q = rng.randint(1, m)
    R = minimal_R(h, b, m, q) * rng.choice([1, 1, 2])
    return ContainerParams(h.r0, h.r1, R, b, m, q)


def _random_independent(rng: random.Random, h: BoundedHypergraph, m: int):
    I = set(rng.sample(h.v0, rng.randint(0, min(m, h.v0_count))))
    for e in h.edges:
        # edges with empty V1 part constrain I alone
        if not e.e1 and I.isdisjoint(e.e0):
            I.add(rng.choice(e.e0))
    if len(I) > m:
        return None
    J = set()
    for v in rng.sample(h.v1, h.v1_count):
        if rng.random() < 0.8 and h.is_independent(I, J | {v}):
            J.add(v)
    return I, J


def container_traces(seed: int, scale: str = "full"):
    """Yield ``(label, h, params, I, J)`` for random bounded and sum hypergraphs."""
    rng = random.Random(seed)
    n_random = 1000 if scale == "full" else 100
    traced = k = 0
    while traced < n_random:
        if k >= 20 * n_random:
            raise ResourceError(f"only {traced} of {k} random hypergraphs gave an independent pair")
        h = random_bounded_hypergraph(rng)
        p = _random_params(rng, h)
        pairs = [pair for pair in (_random_independent(rng, h, p.m) for _ in range(3)) if pair is not None]
        for pair in pairs:
            yield (f"random#{k}", h, p) + pair
        traced += bool(pairs)
        k += 1
    ymax = 10 if scale == "full" else 6
    for mask in range(1, 1 << ymax):
        Y = [i + 1 for i in range(ymax) if mask >> i & 1]
        h = build_sum_hypergraph(IntegerWindow(ymax), Y)
        p = _random_params(rng, h)
        Js = [()] + [tuple(rng.sample(Y, rng.randint(1, min(3, len(Y))))) for _ in range(4)]
        for J in Js:
            I = set(sumset(IntegerWindow(ymax), J, J))
            if len(I) <= p.m:
                yield f"Y={Y}", h, p, I, set(J)


def suite_containers(seed: int = 0, scale: str = "full") -> List[SuiteResult]:
    """The three container suites, run over every traced pair."""
    start = time.perf_counter()
    contract, replay, rounds = _Tally(), _Tally(), _Tally()
    a6_on_sum = 0
    kinds = {"independence": 0, "ceiling": 0, "trichotomy": 0}
    labels = set()
    for label, h, p, I, J in container_traces(seed, scale):
        labels.add(label)
        run = trace_container(h, I, J, p)
        rnd_bad = [v for v in run.violations if v.startswith("round")]
        top_bad = [v for v in run.violations if not v.startswith("round")]
        contract.check(not top_bad, lambda: f"{label} I={sorted(I)} J={sorted(J)}: {top_bad}")
        rounds.check(not rnd_bad, lambda: f"{label} I={sorted(I)} J={sorted(J)}: {rnd_bad}")
        if rnd_bad and label.startswith("Y="):
            a6_on_sum += 1
        for v in rnd_bad:
            kinds["independence" if "independent" in v else
                  "ceiling" if "ceiling" in v else "trichotomy"] += 1
        same = replay_container(h, run.fingerprint, p) == run.container
        replay.check(same, lambda: f"{label} I={sorted(I)} J={sorted(J)}: replay differs")
    return [
        _result("container-contract", contract, start,
                random_hypergraphs=sum(l.startswith("random") for l in labels),
                sum_hypergraphs=sum(l.startswith("Y=") for l in labels)),
        _result("replay-determinism", replay, start),
        _result("round-invariants", rounds, start, sum_hypergraph_runs_flagged=a6_on_sum,
                violations_by_kind=kinds),
    ]


def suite_delta_table(seed: int = 0, scale: str = "full") -> SuiteResult:
    start = time.perf_counter()
    tally = _Tally()
    rng = random.Random(seed)
    cases = 200 if scale == "full" else 40
    for k in range(cases):
        r0, r1 = rng.randint(0, 3), rng.randint(0, 3)
        if r0 + r1 == 0:
            r1 = 1
        m = rng.randint(1, 30)
        v1 = rng.randint(1, 30)
        b = rng.randint(1, min(m, v1))
        p = ContainerParams(r0, r1, Fraction(rng.randint(1, 50), rng.randint(1, 7)), b, m, rng.randint(1, m))
        base = {ix: rng.randint(0, 40) for ix in codegree_indices(r0, r1)}
        table = delta_table(base, p, v1)
        for i0, i1 in ladder(r0, r1):
            for l0, l1 in codegree_indices(i0, i1):
                got, want = table[i0, i1, l0, l1], delta_explicit(base, p, v1, i0, i1, l0, l1)
                tally.check(got == want, lambda: f"case {k} ({i0},{i1},{l0},{l1}): {got} != {want}")
    return _result("delta-table", tally, start, cases=cases)


def census_grid(scale: str = "full"):
    if scale == "full":
        return [(n, s, K) for n in (8, 10, 12) for s in (2, 3) for K in (2, 3)]
    return [(8, 2, 2), (8, 3, 2)]


def suite_sumset_family(scale: str = "full", epsilon: str = "0.24") -> SuiteResult:
    start = time.perf_counter()
    tally = _Tally()
    depths = {}
    for n, s, K in census_grid(scale):
        g, Y, params = integer_window_instance(n, s, K, epsilon)
        _, sets = enumerate_small_doubling(g, Y, s, K)
        witnesses = [(sumset(g, J, J), J) for J in sets]
        try:
            family, report, tree = build_container_family(g, Y, params, witnesses)
        except VerificationError as exc:
            msg = f"n={n} s={s} K={K}: {exc}"
            tally.check(False, lambda: msg)
            continue
        verify_family(g, family, report, tree, params, sets)
        depths[f"{n},{s},{K}"] = report.max_depth
        for kind in ("coverage_failures", "leaf_condition_failures", "depth_failures",
                     "child_count_failures"):
            bad = getattr(report, kind)
            tally.check(not bad, lambda: f"n={n} s={s} K={K} {kind}: {bad[:3]}")
    return _result("sumset-containers", tally, start, max_depths=depths)


def suite_census(scale: str = "full") -> SuiteResult:
    start = time.perf_counter()
    tally = _Tally()
    nmax, smax = (12, 4) if scale == "full" else (8, 3)
    for n in range(1, nmax + 1):
        g = IntegerWindow(n)
        Y = g.ground_set()
        for s in range(1, min(smax, n) + 1):
            for K in (Fraction(2), Fraction(5, 2), Fraction(3)):
                fast, slow = enumerate_small_doubling(g, Y, s, K), naive_small_doubling(g, Y, s, K)
                tally.check(fast == slow, lambda: f"n={n} s={s} K={K}: {fast[0]} != {slow[0]}")
    for n, s, K, want in ((4, 2, 2, 6), (5, 3, 2, 10), (5, 3, Fraction(5, 3), 4)):
        got = enumerate_small_doubling(IntegerWindow(n), range(1, n + 1), s, K)[0]
        tally.check(got == want, lambda: f"spot n={n} s={s} K={K}: {got} != {want}")
    return _result("census-exactness", tally, start)


def suite_lower_bounds(seed: int = 0, scale: str = "full") -> SuiteResult:
    start = time.perf_counter()
    tally = _Tally()
    rng = random.Random(seed)
    fam = lower_bound_family(100, 8, 8)
    g = IntegerWindow(100)
    for J in fam.sample(rng, 500 if scale == "full" else 50):
        size = doubling_stats(g, J)[0]
        tally.check(size <= 64, lambda: f"(100,8,8) J={J}: |J+J|={size}")
    fam = lower_bound_family(20, 5, 4)
    g = IntegerWindow(20)
    members = set(fam.members())
    for J in members:
        size = doubling_stats(g, J)[0]
        tally.check(size <= 20, lambda: f"(20,5,4) J={J}: |J+J|={size}")
    tally.check(len(members) >= fam.guaranteed,
                lambda: f"(20,5,4): {len(members)} sets < guaranteed {fam.guaranteed}")
    z9 = FiniteAbelian((9,))
    for s in range(1, 7):
        tf = group_tightness_family(z9, 9, s, l=2)
        sets = list(tf.members())
        ok = all(doubling_stats(z9, J)[0] <= 9 for J in sets)
        tally.check(ok and len(set(sets)) == math.comb(6, s) == tf.guaranteed,
                    lambda: f"Z9 s={s}: {len(sets)} sets, guaranteed {tf.guaranteed}, valid={ok}")
    return _result("lower-bound-families", tally, start,
                   expansion_20_5_4=len(members), guaranteed_20_5_4=fam.guaranteed)


def min_ap_cover_length(B, max_outliers: int) -> int:
    """Unrestricted search: drop every set of at most ``max_outliers`` points, cover the rest."""
    best = None
    for k in range(0, min(max_outliers, len(B)) + 1):
        for T in itertools.combinations(B, k):
            rest = [x for x in B if x not in T]
            if len(rest) <= 1:
                length = len(rest)
            else:
                d = reduce(math.gcd, (x - rest[0] for x in rest[1:]))
                length = (rest[-1] - rest[0]) // d + 1
            best = length if best is None else min(best, length)
    return best


def suite_ap_cover(scale: str = "full") -> SuiteResult:
    start = time.perf_counter()
    tally = _Tally()
    nmax, bmax = (12, 6) if scale == "full" else (9, 5)
    g = IntegerWindow(nmax)
    for k in range(0, bmax + 1):
        for B in itertools.combinations(range(1, nmax + 1), k):
            for out in range(3):
                cover = find_ap_cover(g, B, out)
                want = min_ap_cover_length(B, out)
                missed = [x for x in B if not cover.covers(x)]
                ok = cover.length == want and len(missed) <= out and tuple(missed) == cover.outliers
                tally.check(ok, lambda: f"B={B} out={out}: length {cover.length} vs {want}")
    return _result("ap-cover", tally, start)


def dichotomy_grid(seed: int = 0, scale: str = "full"):
    """Instances meeting every precondition; ``B`` is interval-like, random or near an AP."""
    rng = random.Random(seed)
    total = 240 if scale == "full" else 30
    out = []
    while len(out) < total:
        t = rng.randint(1, 2)
        Ks = rng.randint(512 * t + 1, 512 * t + 200)
        s = rng.choice([d for d in range(1, 65) if Ks % d == 0])
        K = Fraction(Ks, s)
        eps = Fraction(t, 2 * Ks)
        size = math.ceil((1 - eps) * Ks / 2)
        kind = rng.choice(["interval", "noisy", "spread", "random"])
        if kind == "interval":
            lo = rng.randint(1, 50)
            B = list(range(lo, lo + size))
        elif kind == "noisy":
            base = list(range(1, size + 1 + 2 * t))
            B = sorted(rng.sample(base, size - 2 * t) + rng.sample(range(size + 50, 4 * size), 2 * t))
        elif kind == "spread":
            d = rng.randint(2, 3)
            B = list(range(1, d * size + 1, d))
        else:
            B = sorted(rng.sample(range(1, rng.randint(size + 1, 3 * size)), size))
        sums = convolution(IntegerWindow(1), B, B)
        popular = sorted(sums, key=lambda x: (-sums[x], x))
        cut = rng.choice([Ks, Ks - t, rng.randint(Ks // 2, Ks)])
        A = sorted(popular[:cut])
        out.append((kind, A, B, K, s, eps))
    return out


def suite_dichotomy(seed: int = 0, scale: str = "full") -> SuiteResult:
    start = time.perf_counter()
    tally = _Tally()
    branches = {"supersat": 0, "ap": 0}
    g = IntegerWindow(1)
    for kind, A, B, K, s, eps in dichotomy_grid(seed, scale):
        try:
            verdict = classify_dichotomy(g, A, B, K, s, eps)
        except (VerificationError, DomainError) as exc:
            msg = f"{kind} |A|={len(A)} |B|={len(B)} K={K} s={s}: {exc}"
            tally.check(False, lambda: msg)
            continue
        branches["supersat" if isinstance(verdict, SupersatHolds) else "ap"] += 1
        tally.check(True, lambda: "")
    return _result("dichotomy-totality", tally, start, branches=branches)


SUITES = ("pollard", "alpha", "containers", "delta", "sumset", "census", "lowerbound",
          "apcover", "dichotomy")


def run_suites(seed: int = 0, scale: str = "full", only=None) -> List[SuiteResult]:
    """Run the requested suites (all by default) in a fixed order."""
    wanted = set(only or SUITES)
    unknown = wanted - set(SUITES)
    if unknown:
        raise DomainError(f"unknown suites {sorted(unknown)}; choose from {SUITES}")
    results: List[SuiteResult] = []
    if "pollard" in wanted:
        results.append(suite_pollard(scale))
    if "alpha" in wanted:
        results.append(suite_alpha(scale))
    if "containers" in wanted:
        results.extend(suite_containers(seed, scale))
    if "delta" in wanted:
        results.append(suite_delta_table(seed, scale))
    if "sumset" in wanted:
        results.append(suite_sumset_family(scale))
    if "census" in wanted:
        results.append(suite_census(scale))
    if "lowerbound" in wanted:
        results.append(suite_lower_bounds(seed, scale))
    if "apcover" in wanted:
        results.append(suite_ap_cover(scale))
    if "dichotomy" in wanted:
        results.append(suite_dichotomy(seed, scale))
    return results
