"""Counting sets with small doubling, and the bounds they are compared with."""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Tuple

from .errors import DomainError, ResourceError
from .group import FiniteAbelian, GroupDescriptor, IntegerWindow, beta, element_set, enumerate_subgroups, sumset
from .supersat import as_fraction, find_ap_cover

DEFAULT_WORK_CAP = 10 ** 7
BOUNDS_VERSION = "1"


def doubling_stats(g: GroupDescriptor, J) -> Tuple[int, Fraction]:
    J = element_set(g, J)
    if not J:
        raise DomainError("doubling needs a nonempty set")
    size = len(sumset(g, J, J))
    return size, Fraction(size, len(J))


def threshold(s: int, K) -> int:
    return math.floor(as_fraction(K) * s)


def _search(g: GroupDescriptor, Y, s: int, limit: int, cap: int) -> Iterator[tuple]:
    """Lexicographic DFS over ``s``-subsets, abandoning prefixes whose sumset exceeds ``limit``."""
    n = len(Y)
    work = 0
    chosen: List = []

    def rec(start: int, sums: frozenset):
        nonlocal work
        if len(chosen) == s:
            yield tuple(chosen)
            return
        for i in range(start, n - (s - len(chosen)) + 1):
            work += 1
            if work > cap:
                raise ResourceError(f"enumeration work exceeded cap {cap}")
            y = Y[i]
            grown = sums | {g.add(y, y)} | {g.add(x, y) for x in chosen}
            if len(grown) > limit:
                continue
            chosen.append(y)
            yield from rec(i + 1, frozenset(grown))
            chosen.pop()

    yield from rec(0, frozenset())


def enumerate_small_doubling(g: GroupDescriptor, Y, s: int, K,
                             cap: int = DEFAULT_WORK_CAP) -> Tuple[int, List[tuple]]:
    """All ``s``-subsets ``J`` of ``Y`` with ``|J + J| <= floor(K s)``, in lexicographic order."""
    Y = element_set(g, Y)
    if s < 1:
        raise DomainError("s must be positive")
    if math.comb(len(Y), s) > cap:
        raise ResourceError(f"binom({len(Y)}, {s}) exceeds work cap {cap}")
    found = list(_search(g, Y, s, threshold(s, K), cap))
    return len(found), found


def naive_small_doubling(g: GroupDescriptor, Y, s: int, K) -> Tuple[int, List[tuple]]:
    """Reference filter over every ``s``-subset."""
    Y = element_set(g, Y)
    limit = threshold(s, K)
    found = [J for J in itertools.combinations(Y, s) if len(sumset(g, J, J)) <= limit]
    return len(found), found


def real_binomial(x, k: int) -> float:
    """``binom(x, k)`` through the Gamma function; 0 when ``x < k``."""
    x = float(x)
    if k < 0 or x < k:
        return 0.0
    if float(x).is_integer():
        return float(math.comb(int(x), k))
    return math.exp(math.lgamma(x + 1) - math.lgamma(k + 1) - math.lgamma(x - k + 1))


def conjecture_bound(delta, s: int, K) -> float:
    if delta < 0:
        raise DomainError("delta must be nonnegative")
    return 2 ** (float(delta) * s) * real_binomial(as_fraction(K) * s / 2, s)


@dataclass(frozen=True)
class TheoremBound:
    value: float
    log_value: float
    beta: int
    lam: float
    hypothesis_met: bool


def theorem_bound(g: GroupDescriptor, n: int, s: int, K) -> TheoremBound:
    """Evaluate ``exp(2^9 lam K^(1/6) s^(5/6) sqrt(ln n)) * binom((K s + beta) / 2, s)``."""
    K = as_fraction(K)
    if K < 2:
        raise DomainError("theorem bound needs K >= 2")
    if s < 1 or n < 3:
        raise DomainError("theorem bound needs s >= 1 and n >= 3")
    Kf = float(K)
    ln_n = math.log(n)
    lam = math.log(s) if K == 2 else min(Kf / (Kf - 2), math.log(s))
    b = beta(g, Kf * s + 2 ** 6 * Kf ** (7 / 6) * s ** (5 / 6) * math.sqrt(ln_n))
    exponent = 2 ** 9 * lam * Kf ** (1 / 6) * s ** (5 / 6) * math.sqrt(ln_n)
    binom = real_binomial((Kf * s + b) / 2, s)
    log_value = exponent + math.log(binom) if binom > 0 else -math.inf
    value = math.exp(log_value) if log_value < 709 else math.inf
    return TheoremBound(value=value, log_value=log_value, beta=b, lam=lam,
                        hypothesis_met=Kf < 2 ** -36 * s / ln_n ** 3)


@dataclass(frozen=True)
class LowerBoundFamily:
    n: int
    s: int
    K: Fraction
    progression: int
    sizes: Tuple[int, int]
    guaranteed: int
    feasible_k: bool

    @property
    def degenerate(self) -> bool:
        return self.sizes[0] > self.progression

    @property
    def full_size(self) -> int:
        """Exact number of members: ``J0`` and ``J1`` are recovered from ``J`` as its parts in and out of ``P``."""
        return math.comb(self.n - self.progression, self.sizes[1]) * math.comb(self.progression, self.sizes[0])

    def members(self) -> Iterator[tuple]:
        P = range(1, self.progression + 1)
        rest = range(self.progression + 1, self.n + 1)
        for J0 in itertools.combinations(P, self.sizes[0]):
            for J1 in itertools.combinations(rest, self.sizes[1]):
                yield J0 + J1

    def sample(self, rng, count: int) -> List[tuple]:
        """``count`` uniformly random members (with replacement)."""
        if self.full_size == 0:
            return []
        rest = list(range(self.progression + 1, self.n + 1))
        return [tuple(sorted(rng.sample(range(1, self.progression + 1), self.sizes[0])))
                + tuple(sorted(rng.sample(rest, self.sizes[1]))) for _ in range(count)]


def lower_bound_family(n: int, s: int, K, epsilon=Fraction(1, 10)) -> LowerBoundFamily:
    """Sets made of ``s - K/4`` points of ``P = {1, ..., Ks/8}`` and ``K/4`` points outside ``P``.

    ``K/4`` and ``Ks/8`` are rounded down.  When ``P`` is too short to hold
    ``s - K/4`` points the family is empty and ``guaranteed`` is 0.
    """
    K = as_fraction(K)
    if K <= 0 or s < 1 or n < 1:
        raise DomainError("n, s and K must be positive")
    k4 = math.floor(K / 4)
    plen = math.floor(K * s / 8)
    if k4 > s or plen > n or n - plen < k4:
        raise DomainError(f"infeasible: need K/4 <= s, Ks/8 <= n and K/4 points outside P "
                          f"(K/4={k4}, Ks/8={plen}, s={s}, n={n})")
    guaranteed = math.comb(n // 2, k4) * math.comb(plen, s - k4)
    feasible = K <= min(s, n ** (0.5 - float(as_fraction(epsilon))))
    return LowerBoundFamily(n=n, s=s, K=K, progression=plen, sizes=(s - k4, k4),
                            guaranteed=guaranteed, feasible_k=feasible)


@dataclass(frozen=True)
class TightnessFamily:
    group: FiniteAbelian
    subgroup: tuple
    progression: tuple
    base: tuple
    s: int
    guaranteed: int

    def members(self) -> Iterator[tuple]:
        return itertools.combinations(self.base, self.s)


def group_tightness_family(g: FiniteAbelian, m: int, s: int, l: Optional[int] = None) -> TightnessFamily:
    """``B = P + H`` with ``P`` an AP of ``l`` cosets of ``H`` and ``|H| (2l - 1) = m``.

    Without ``l`` the subgroup is the largest one of order at most ``m``;
    with ``l`` it is any subgroup of order ``m / (2l - 1)``.
    """
    if not g.is_finite:
        raise DomainError("tightness family needs a finite group")
    if l is None:
        h = beta(g, m)
        if (m // h) % 2 == 0 or m % h:
            raise DomainError(f"largest subgroup order {h} at most m={m} is not m/(2l-1)")
        l = (m // h + 1) // 2
    elif l < 1 or m % (2 * l - 1):
        raise DomainError(f"m={m} is not a multiple of 2l-1={2 * l - 1}")
    h = m // (2 * l - 1)
    tried = []
    for H in enumerate_subgroups(g):
        if H.order != h:
            continue
        tried.append(H.elements)
        for x in g.elements():
            P = [g.scale(k, x) for k in range(l)]
            B = element_set(g, (g.add(p, y) for p in P for y in H.elements))
            if len(B) != l * h or len(sumset(g, B, B)) > m:
                continue
            return TightnessFamily(group=g, subgroup=H.elements, progression=tuple(P), base=B,
                                   s=s, guaranteed=math.comb((m + h) // 2, s))
    raise DomainError(f"no AP of {l} cosets found for |H|={h}; subgroups tried: {tried}")


@dataclass
class TypicalityReport:
    total_sets: int
    structured_sets: int
    t_max: int
    p_max: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.structured_sets, self.total_sets) if self.total_sets else Fraction(1)


def typicality_report(g: IntegerWindow, sets: Iterable, t_max: int, p_max: int) -> TypicalityReport:
    """Count sets that are an AP of length ``<= p_max`` after deleting ``<= t_max`` points."""
    total = structured = 0
    for J in sets:
        total += 1
        cover = find_ap_cover(g, J, t_max)
        if cover.length <= p_max:
            structured += 1
    return TypicalityReport(total, structured, t_max, p_max)


@dataclass
class CensusRecord:
    group: str
    s: int
    K: str
    threshold: int
    count: int
    elapsed: float
    bound_conjecture: Optional[float] = None
    bound_theorem: Optional[float] = None
    bound_lower: Optional[float] = None
    oracle_match: Optional[bool] = None
    coverage: Optional[bool] = None
    bounds_version: str = BOUNDS_VERSION
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def census(g: GroupDescriptor, s: int, K, oracle: bool = False, bounds: bool = False,
           cap: int = DEFAULT_WORK_CAP) -> Tuple[CensusRecord, List[tuple]]:
    """Count ``s``-subsets of the ground set with doubling at most ``K``."""
    Y = g.ground_set()
    start = time.perf_counter()
    count, sets = enumerate_small_doubling(g, Y, s, K, cap=cap)
    rec = CensusRecord(group=g.spec, s=s, K=str(as_fraction(K)), threshold=threshold(s, K),
                       count=count, elapsed=0.0)
    if oracle:
        rec.oracle_match = naive_small_doubling(g, Y, s, K) == (count, sets)
    if bounds:
        n = len(Y)
        rec.bound_conjecture = conjecture_bound(0, s, K)
        if as_fraction(K) >= 2 and n >= 3:
            rec.bound_theorem = theorem_bound(g, n, s, K).value
    rec.elapsed = time.perf_counter() - start
    return rec, sets
