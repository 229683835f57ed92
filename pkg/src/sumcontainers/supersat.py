"""Convolution counts, the generalised Pollard inequality and its corollaries.

All pair counts are over *ordered* pairs.  Thresholds are compared in exact
rational arithmetic; pass ``Fraction`` or decimal strings for epsilon and K
when the exact value matters (floats are read through their decimal repr).
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Dict, Union

from .errors import DomainError, ResourceError, VerificationError
from .group import (
    GroupDescriptor,
    ElementSet,
    beta,
    element_set,
    generated_subgroup,
    subgroup_orders,
)

DEFAULT_AP_CAP = 4096


def as_fraction(x) -> Fraction:
    """Exact rational view of ``x``; floats go through ``repr`` so 0.05 means 1/20."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def convolution(g: GroupDescriptor, U, V) -> Dict:
    """``x -> #{(u, v) in U x V : u + v = x}`` over the support ``U + V``."""
    U = element_set(g, U)
    V = element_set(g, V)
    counts = Counter(g.add(u, v) for u in U for v in V)
    return dict(sorted(counts.items()))


def truncated_sum(g: GroupDescriptor, U, V, t: int) -> int:
    """``sum_x min(1_U * 1_V (x), t)``."""
    if t < 1:
        raise DomainError(f"truncation level must be >= 1, got {t}")
    return sum(min(c, t) for c in convolution(g, U, V).values())


def alpha(g: GroupDescriptor, U, V) -> int:
    """Structural correction term of the Pollard-type bound.

    Uses ``max_H min(|V|, |H|, |U| + |V| - |H|)`` over finite subgroups ``H``;
    a set ``V'`` inside ``H`` of that size satisfies the defining condition
    and conversely ``H = <V'>`` witnesses any valid ``V'``.
    """
    U = element_set(g, U)
    V = element_set(g, V)
    if not U or not V:
        raise DomainError("alpha needs nonempty U and V")
    u, v = len(U), len(V)
    return max(min(v, h, u + v - h) for h in subgroup_orders(g))


def alpha_bruteforce(g: GroupDescriptor, U, V) -> int:
    """Literal definition: search every ``V'`` subset of a finite ``G`` with ``|V'| <= |V|``."""
    if not g.is_finite:
        raise DomainError("brute-force alpha needs a finite group")
    U = element_set(g, U)
    V = element_set(g, V)
    if not U or not V:
        raise DomainError("alpha needs nonempty U and V")
    u, v = len(U), len(V)
    best = 0
    elems = g.elements()
    for k in range(1, v + 1):
        for Vp in itertools.combinations(elems, k):
            if generated_subgroup(g, Vp).order <= u + v - k:
                best = k
                break
    return best


@dataclass(frozen=True)
class PollardReport:
    lhs: int
    rhs: int
    alpha: int
    t: int

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs


def check_pollard_general(g: GroupDescriptor, U, V, t: int) -> PollardReport:
    """Evaluate both sides of ``sum min(1_U*1_V, t) >= t(|U| + |V| - t - alpha)``."""
    U = element_set(g, U)
    V = element_set(g, V)
    if not (1 <= t <= len(V) <= len(U)):
        raise DomainError(f"need 1 <= t <= |V| <= |U|, got t={t}, |V|={len(V)}, |U|={len(U)}")
    a = alpha(g, U, V)
    lhs = truncated_sum(g, U, V, t)
    rhs = t * (len(U) + len(V) - t - a)
    return PollardReport(lhs=lhs, rhs=rhs, alpha=a, t=t)


def deficient_pair_count(g: GroupDescriptor, A, B) -> int:
    """Ordered pairs ``(b1, b2)`` in ``B x B`` with ``b1 + b2`` outside ``A``."""
    A = set(element_set(g, A))
    B = element_set(g, B)
    conv = convolution(g, B, B)
    return len(B) ** 2 - sum(c for x, c in conv.items() if x in A)


@dataclass(frozen=True)
class SupersatReport:
    beta: int
    hypothesis_met: bool
    deficient_pairs: int
    required: Fraction

    @property
    def holds(self) -> bool:
        return (not self.hypothesis_met) or self.deficient_pairs >= self.required


def check_supersat_corollary(g: GroupDescriptor, A, B, epsilon) -> SupersatReport:
    """If ``|B| >= (1/2 + eps)(|A| + beta((1+4eps)|A|))``, count pairs summing outside ``A``."""
    eps = as_fraction(epsilon)
    if not 0 < eps < Fraction(1, 2):
        raise DomainError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    A = element_set(g, A)
    B = element_set(g, B)
    if not A or not B:
        raise DomainError("A and B must be nonempty")
    b = beta(g, (1 + 4 * eps) * len(A))
    met = len(B) >= (Fraction(1, 2) + eps) * (len(A) + b)
    return SupersatReport(
        beta=b,
        hypothesis_met=met,
        deficient_pairs=deficient_pair_count(g, A, B),
        required=eps * eps * len(B) ** 2,
    )


@dataclass(frozen=True)
class APCover:
    start: int
    difference: int
    length: int
    outliers: ElementSet

    def points(self) -> range:
        return range(self.start, self.start + self.length * self.difference, self.difference)

    def covers(self, x: int) -> bool:
        return self.length > 0 and (x - self.start) % self.difference == 0 and (
            0 <= (x - self.start) // self.difference < self.length
        )


def find_ap_cover(g: GroupDescriptor, B, max_outliers: int, cap: int = DEFAULT_AP_CAP) -> APCover:
    """Shortest arithmetic progression covering all but ``max_outliers`` points of ``B``.

    An optimal progression can be shrunk to start and end on covered points,
    and everything of ``B`` below (above) its first (last) point is an outlier,
    so both endpoints come from the ``max_outliers + 1`` extreme points of ``B``
    and the difference divides their gap.  This keeps the search exact.
    """
    if g.is_finite:
        raise DomainError("arithmetic progression covers are searched in Z only")
    B = element_set(g, B)
    if len(B) > cap:
        raise ResourceError(f"|B| = {len(B)} exceeds AP search cap {cap}")
    if max_outliers < 0:
        raise DomainError("max_outliers must be nonnegative")
    need = len(B) - max_outliers
    if need <= 0:
        return APCover(start=B[0] if B else 0, difference=1, length=0, outliers=B)
    if need == 1:
        return APCover(start=B[0], difference=1, length=1, outliers=B[1:])
    best = None
    k = max_outliers + 1
    for lo in B[:k]:
        for hi in B[-k:]:
            gap = hi - lo
            if gap <= 0:
                continue
            for d in range(1, gap + 1):
                if gap % d:
                    continue
                length = gap // d + 1
                if best is not None and (length, d, lo) >= best[0]:
                    continue
                covered = sum(1 for x in B if lo <= x <= hi and (x - lo) % d == 0)
                if covered >= need:
                    best = ((length, d, lo), lo, d, length)
    _, lo, d, length = best
    cover = APCover(start=lo, difference=d, length=length, outliers=())
    return APCover(lo, d, length, tuple(x for x in B if not cover.covers(x)))


@dataclass(frozen=True)
class SupersatHolds:
    deficient_pairs: int
    threshold: Fraction


@dataclass(frozen=True)
class APStructure:
    cover: APCover
    max_length: Fraction
    max_outliers: Fraction


DichotomyVerdict = Union[SupersatHolds, APStructure]


def dichotomy_preconditions(A, B, K, s: int, epsilon) -> None:
    """Raise ``DomainError`` unless the dichotomy's hypotheses hold.

    Besides the size window for ``B`` and ``|A| <= Ks``, the progression branch
    rests on a structure theorem applied with truncation ``t = 2 eps K s``,
    which must be a positive integer with ``t <= |B| / 40``.
    """
    eps = as_fraction(epsilon)
    K = as_fraction(K)
    if not 0 < eps < Fraction(1, 2 ** 10):
        raise DomainError(f"epsilon must lie in (0, 2^-10), got {epsilon}")
    if K <= 0 or s < 1:
        raise DomainError("K and s must be positive")
    Ks = K * s
    if not (1 - eps) * Ks / 2 <= len(B) <= (1 + 2 * eps) * Ks / 2:
        raise DomainError(f"|B| = {len(B)} outside [(1-eps)Ks/2, (1+2eps)Ks/2]")
    if len(A) > Ks:
        raise DomainError(f"|A| = {len(A)} exceeds Ks = {Ks}")
    t = 2 * eps * Ks
    if t.denominator != 1 or t < 1:
        raise DomainError(f"t = 2*eps*K*s = {t} must be a positive integer")
    if 40 * t > len(B):
        raise DomainError(f"t = {t} exceeds |B|/40")


def classify_dichotomy(g: GroupDescriptor, A, B, K, s: int, epsilon,
                       cap: int = DEFAULT_AP_CAP) -> DichotomyVerdict:
    """Return many deficient pairs if there are, else a short covering progression."""
    if g.is_finite:
        raise DomainError("the dichotomy is stated for subsets of Z")
    A = element_set(g, A)
    B = element_set(g, B)
    dichotomy_preconditions(A, B, K, s, epsilon)
    eps = as_fraction(epsilon)
    Ks = as_fraction(K) * s
    threshold = 4 * eps * eps * Ks * Ks
    deficient = deficient_pair_count(g, A, B)
    if deficient >= threshold:
        return SupersatHolds(deficient_pairs=deficient, threshold=threshold)
    max_out = 8 * eps * Ks
    max_len = Ks / 2 + 32 * eps * Ks
    cover = find_ap_cover(g, B, floor(max_out), cap=cap)
    if cover.length <= max_len:
        return APStructure(cover=cover, max_length=max_len, max_outliers=max_out)
    raise VerificationError(
        f"neither branch holds: {deficient} deficient pairs < {threshold} and the "
        f"shortest cover has length {cover.length} > {max_len}"
    )
