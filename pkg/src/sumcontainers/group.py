"""Ambient abelian groups and the set operations on them.

Two kinds of group are supported:

* ``IntegerWindow(n)``: the ambient group is all of Z and the ground set is
  ``[n] = {1, ..., n}``.  Elements are plain ``int``.
* ``FiniteAbelian(factors)``: the group Z_{m1} x ... x Z_{mk}.  Elements are
  tuples of residues, ordered lexicographically.

An *element set* is a strictly increasing tuple of elements; ``element_set``
canonicalises any iterable into one.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from math import prod
from typing import Iterable, Tuple, Union

from .errors import DomainError, ResourceError, UsageError

Element = Union[int, Tuple[int, ...]]
ElementSet = Tuple[Element, ...]

DEFAULT_SUBGROUP_CAP = 4096


@dataclass(frozen=True)
class IntegerWindow:
    """The integers, with ground set ``{1, ..., n}``."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise UsageError(f"IntegerWindow needs n >= 1, got {self.n!r}")

    is_finite = False

    @property
    def identity(self) -> int:
        return 0

    @property
    def spec(self) -> str:
        return f"z:{self.n}"

    def contains(self, x) -> bool:
        return isinstance(x, int) and not isinstance(x, bool)

    def canonical(self, x) -> int:
        if not self.contains(x):
            raise UsageError(f"{x!r} is not an element of Z")
        return x

    def add(self, x: int, y: int) -> int:
        return x + y

    def neg(self, x: int) -> int:
        return -x

    def scale(self, k: int, x: int) -> int:
        return k * x

    def ground_set(self) -> ElementSet:
        return tuple(range(1, self.n + 1))


@dataclass(frozen=True)
class FiniteAbelian:
    """The group ``Z_{m1} x ... x Z_{mk}`` with lexicographic element order."""

    factors: Tuple[int, ...]

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors or any(not isinstance(m, int) or m < 2 for m in factors):
            raise UsageError(f"FiniteAbelian factors must be integers >= 2, got {self.factors!r}")
        object.__setattr__(self, "factors", factors)

    is_finite = True

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def identity(self) -> Tuple[int, ...]:
        return (0,) * len(self.factors)

    @property
    def spec(self) -> str:
        return "zmod:" + "x".join(str(m) for m in self.factors)

    def contains(self, x) -> bool:
        return (
            isinstance(x, tuple)
            and len(x) == len(self.factors)
            and all(isinstance(r, int) and 0 <= r < m for r, m in zip(x, self.factors))
        )

    def canonical(self, x) -> Tuple[int, ...]:
        if isinstance(x, list):
            x = tuple(x)
        if not (isinstance(x, tuple) and len(x) == len(self.factors)
                and all(isinstance(r, int) for r in x)):
            raise UsageError(f"{x!r} is not an element of {self.spec}")
        return tuple(r % m for r, m in zip(x, self.factors))

    def add(self, x, y):
        return tuple((a + b) % m for a, b, m in zip(x, y, self.factors))

    def neg(self, x):
        return tuple((-a) % m for a, m in zip(x, self.factors))

    def scale(self, k: int, x):
        return tuple((k * a) % m for a, m in zip(x, self.factors))

    def elements(self) -> ElementSet:
        return tuple(itertools.product(*(range(m) for m in self.factors)))

    def ground_set(self) -> ElementSet:
        return self.elements()


GroupDescriptor = Union[IntegerWindow, FiniteAbelian]


class _Infinite:
    """Marker for an infinite (cyclic) subgroup of Z."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    order = float("inf")


INFINITE = _Infinite()


@dataclass(frozen=True)
class Subgroup:
    elements: ElementSet

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in set(self.elements)


_GROUP_RE = re.compile(r"^(z|zmod):(\d+(?:x\d+)*)$")


def parse_group(text: str) -> GroupDescriptor:
    """Parse ``z:<n>`` or ``zmod:<m1>x<m2>...``."""
    match = _GROUP_RE.match(text.strip())
    if not match:
        raise UsageError(f"malformed group spec {text!r}; expected z:<n> or zmod:<m1>x<m2>...")
    kind, body = match.groups()
    numbers = tuple(int(p) for p in body.split("x"))
    if kind == "z":
        if len(numbers) != 1:
            raise UsageError(f"z: takes a single integer, got {text!r}")
        return IntegerWindow(numbers[0])
    return FiniteAbelian(numbers)


def element_set(g: GroupDescriptor, items: Iterable) -> ElementSet:
    """Canonicalise ``items`` into a sorted duplicate-free tuple of elements of ``g``."""
    return tuple(sorted({g.canonical(x) for x in items}))


def _check(g: GroupDescriptor, x) -> None:
    if not g.contains(x):
        raise UsageError(f"{x!r} does not belong to {g.spec}")


def add(g: GroupDescriptor, x: Element, y: Element) -> Element:
    _check(g, x)
    _check(g, y)
    return g.add(x, y)


def sumset(g: GroupDescriptor, A: Iterable, B: Iterable) -> ElementSet:
    """Return ``A + B = {a + b}`` as a canonical element set."""
    A = tuple(A)
    B = tuple(B)
    for x in itertools.chain(A, B):
        _check(g, x)
    plus = g.add
    return tuple(sorted({plus(a, b) for a in A for b in B}))


def generated_subgroup(g: GroupDescriptor, S: Iterable):
    """Smallest subgroup containing ``S``; ``INFINITE`` for nonzero integers."""
    S = tuple(S)
    for x in S:
        _check(g, x)
    if not g.is_finite:
        return Subgroup((0,)) if all(x == 0 for x in S) else INFINITE
    members = {g.identity}
    frontier = [g.identity]
    gens = [x for x in set(S) if x != g.identity]
    while frontier:
        nxt = []
        for h in frontier:
            for s in gens:
                y = g.add(h, s)
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(tuple(sorted(members)))


def _cyclic(g: FiniteAbelian, x) -> frozenset:
    members = [g.identity]
    y = x
    while y != g.identity:
        members.append(y)
        y = g.add(y, x)
    return frozenset(members)


@lru_cache(maxsize=64)
def _subgroups(g: FiniteAbelian) -> Tuple[Subgroup, ...]:
    cyclic = {_cyclic(g, x) for x in g.elements()}
    found = set(cyclic)
    layer = set(cyclic)
    # every subgroup of a rank-r group is generated by r elements
    for _ in range(g.rank - 1):
        nxt = set()
        for H in layer:
            for C in cyclic:
                if C <= H:
                    continue
                joined = frozenset(g.add(h, c) for h in H for c in C)
                if joined not in found:
                    nxt.add(joined)
        found |= nxt
        layer = nxt
        if not layer:
            break
    subs = [Subgroup(tuple(sorted(H))) for H in found]
    subs.sort(key=lambda H: (H.order, H.elements))
    return tuple(subs)


def enumerate_subgroups(g: GroupDescriptor, cap: int = DEFAULT_SUBGROUP_CAP) -> list:
    """All subgroups of a finite abelian group, each exactly once, by increasing order."""
    if not g.is_finite:
        raise DomainError("subgroup enumeration needs a finite group")
    if g.order > cap:
        raise ResourceError(f"group order {g.order} exceeds subgroup enumeration cap {cap}")
    return list(_subgroups(g))


def is_subgroup(g: GroupDescriptor, elements: Iterable) -> bool:
    """Exhaustive closure test: identity present, closed under + and negation."""
    members = set(elements)
    if g.identity not in members:
        return False
    return all(g.add(x, y) in members for x in members for y in members) and all(
        g.neg(x) in members for x in members
    )


def _divisors(n: int) -> list:
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def subgroup_orders(g: GroupDescriptor) -> list:
    """Orders of the finite subgroups of ``g``.

    A finite abelian group has a subgroup of every order dividing ``|G|``,
    so no enumeration is needed.
    """
    if not g.is_finite:
        return [1]
    return _divisors(g.order)


def beta(g: GroupDescriptor, t) -> int:
    """Size of the largest subgroup of ``g`` of order at most ``t``."""
    if t < 1:
        raise DomainError(f"beta needs t >= 1, got {t}")
    return max(d for d in subgroup_orders(g) if d <= t)
