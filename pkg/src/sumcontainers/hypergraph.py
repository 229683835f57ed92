"""Bipartitioned (r0, r1)-bounded multi-hypergraphs.

Vertices live in two disjoint parts ``V0`` and ``V1``.  The parts are kept
apart by position rather than by value, so the same group element may appear
in both.  An edge is a pair ``(e0, e1)`` of sorted tuples with ``e0`` inside
``V0`` and ``e1`` inside ``V1``; edges form a multiset.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, NamedTuple, Tuple

from .errors import ConstructionError, DomainError


class Edge(NamedTuple):
    e0: tuple
    e1: tuple


def make_edge(e0: Iterable, e1: Iterable) -> Edge:
    return Edge(tuple(sorted(set(e0))), tuple(sorted(set(e1))))


def sub_tuples(edge: Edge, l0: int, l1: int):
    """All ``(T0, T1)`` with ``T0`` an ``l0``-subset of ``e0`` and ``T1`` an ``l1``-subset of ``e1``."""
    for T0 in combinations(edge.e0, l0):
        for T1 in combinations(edge.e1, l1):
            yield T0, T1


class BoundedHypergraph:
    """An ``(r0, r1)``-bounded hypergraph on ``V0`` and ``V1``."""

    def __init__(self, v0: Iterable, v1: Iterable, r0: int, r1: int, edges: Iterable = ()):
        if r0 < 0 or r1 < 0 or (r0 == 0 and r1 == 0):
            raise ConstructionError(f"bounds must be nonnegative and not both zero, got ({r0}, {r1})")
        self.v0 = tuple(sorted(set(v0)))
        self.v1 = tuple(sorted(set(v1)))
        self.r0 = r0
        self.r1 = r1
        s0, s1 = set(self.v0), set(self.v1)
        checked = []
        for e in edges:
            e = e if isinstance(e, Edge) else make_edge(*e)
            if len(e.e0) > r0 or len(e.e1) > r1:
                raise ConstructionError(f"edge {e} exceeds bounds ({r0}, {r1})")
            if not set(e.e0) <= s0 or not set(e.e1) <= s1:
                raise ConstructionError(f"edge {e} leaves the vertex parts")
            checked.append(e)
        self.edges: Tuple[Edge, ...] = tuple(checked)

    def __repr__(self):
        return (f"BoundedHypergraph(|V0|={len(self.v0)}, |V1|={len(self.v1)}, "
                f"r=({self.r0},{self.r1}), e={self.e})")

    def __eq__(self, other):
        return (
            isinstance(other, BoundedHypergraph)
            and (self.v0, self.v1, self.r0, self.r1) == (other.v0, other.v1, other.r0, other.r1)
            and Counter(self.edges) == Counter(other.edges)
        )

    @property
    def e(self) -> int:
        return len(self.edges)

    @property
    def v0_count(self) -> int:
        return len(self.v0)

    @property
    def v1_count(self) -> int:
        return len(self.v1)

    def codegree(self, L0: Iterable = (), L1: Iterable = ()) -> int:
        L0, L1 = set(L0), set(L1)
        return sum(1 for e in self.edges if L0.issubset(e.e0) and L1.issubset(e.e1))

    def codegree_counts(self, l0: int, l1: int) -> Counter:
        """Codegree of every ``(l0, l1)`` vertex-set pair that lies in some edge."""
        counts = Counter()
        for e in self.edges:
            counts.update(sub_tuples(e, l0, l1))
        return counts

    def max_codegree(self, l0: int, l1: int) -> int:
        if not (0 <= l0 <= self.r0 and 0 <= l1 <= self.r1) or (l0, l1) == (0, 0):
            raise DomainError(f"codegree index ({l0}, {l1}) out of range for r=({self.r0},{self.r1})")
        counts = self.codegree_counts(l0, l1)
        return max(counts.values(), default=0)

    def is_independent(self, w0: Iterable, w1: Iterable) -> bool:
        """True iff no edge has ``e0`` outside ``W0`` and ``e1`` inside ``W1``."""
        w0 = set(w0) & set(self.v0)
        w1 = set(w1) & set(self.v1)
        return not any(w0.isdisjoint(e.e0) and w1.issuperset(e.e1) for e in self.edges)

    def in_family_leq_m(self, w0: Iterable, w1: Iterable, m: int) -> bool:
        w0 = set(w0)
        return self.is_independent(w0, w1) and len(w0 & set(self.v0)) <= m

    def to_text(self) -> str:
        """Line-oriented dump used to reproduce verification failures."""
        def tokens(xs):
            return " ".join(json.dumps(x, separators=(",", ":")) for x in xs)

        lines = [f"V0 {tokens(self.v0)}".rstrip(), f"V1 {tokens(self.v1)}".rstrip(),
                 f"R {self.r0} {self.r1}"]
        lines += [f"E {tokens(e.e0)} | {tokens(e.e1)}".rstrip() for e in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BoundedHypergraph":
        def parse(chunk):
            out = []
            for tok in chunk.split():
                x = json.loads(tok)
                out.append(tuple(x) if isinstance(x, list) else x)
            return out

        v0 = v1 = None
        r = None
        edges = []
        for line in text.splitlines():
            if not line.strip():
                continue
            head, _, rest = line.partition(" ")
            if head == "V0":
                v0 = parse(rest)
            elif head == "V1":
                v1 = parse(rest)
            elif head == "R":
                r = tuple(int(x) for x in rest.split())
            elif head == "E":
                left, _, right = rest.partition("|")
                edges.append(make_edge(parse(left), parse(right)))
            else:
                raise ConstructionError(f"unrecognised hypergraph line {line!r}")
        if v0 is None or v1 is None or r is None:
            raise ConstructionError("hypergraph text needs V0, V1 and R lines")
        return cls(v0, v1, r[0], r[1], edges)


@dataclass(frozen=True)
class DegreeCheck:
    l0: int
    l1: int
    lhs: int
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


def degree_bound(h: BoundedHypergraph, R, b: int, m: int, q: int, l0: int, l1: int) -> Fraction:
    """Right-hand side of the codegree condition for index ``(l0, l1)``."""
    R = Fraction(R)
    rhs = R * Fraction(b) ** (l0 + l1 - 1) / (Fraction(m) ** l0 * Fraction(h.v1_count) ** l1) * h.e
    if l0 > 0:
        rhs *= Fraction(m, q)
    return rhs


def check_degree_condition(h: BoundedHypergraph, R, b: int, m: int, q: int) -> List[DegreeCheck]:
    """Check every codegree index ``(l0, l1) != (0, 0)`` against the container lemma's bound."""
    if h.e == 0:
        raise DomainError("degree condition needs a nonempty hypergraph")
    if not (1 <= b <= min(m, h.v1_count)):
        raise DomainError(f"need 1 <= b <= min(m, |V1|), got b={b}, m={m}, |V1|={h.v1_count}")
    if q < 1:
        raise DomainError("q must be positive")
    out = []
    for l0 in range(h.r0 + 1):
        for l1 in range(h.r1 + 1):
            if (l0, l1) == (0, 0):
                continue
            out.append(DegreeCheck(l0, l1, h.max_codegree(l0, l1),
                                   degree_bound(h, R, b, m, q, l0, l1)))
    return out


def minimal_R(h: BoundedHypergraph, b: int, m: int, q: int) -> Fraction:
    """Smallest ``R`` for which the codegree condition holds (used for random instances)."""
    best = Fraction(0)
    for l0 in range(h.r0 + 1):
        for l1 in range(h.r1 + 1):
            if (l0, l1) == (0, 0):
                continue
            unit = degree_bound(h, 1, b, m, q, l0, l1)
            best = max(best, Fraction(h.max_codegree(l0, l1)) / unit)
    return best if best > 0 else Fraction(1)
