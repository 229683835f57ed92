"""The asymmetric container algorithm for bounded hypergraphs.

Given an ``(r0, r1)``-bounded hypergraph ``H`` and an independent pair
``(I, J)`` with ``|I| <= m``, ``build_container`` extracts a small
fingerprint ``(S0, S1)`` (``S0`` outside ``I``, ``S1`` inside ``J``) and a
container ``(A, B)`` with ``A`` inside ``I`` and ``J`` inside ``B``.  The
container depends on ``(I, J)`` only through the fingerprint, which
``replay_container`` demonstrates by rerunning the algorithm with the
fingerprint as its only source of membership answers.

The algorithm walks down the uniformity ladder
``(r0, r1) -> (r0, r1 - 1) -> ... -> (r0, 0) -> (r0 - 1, 0) -> ... -> (0, 0)``.
Each step is one *round*: repeatedly pick the vertex of largest degree in the
coordinate being peeled, record whether it is a fingerprint vertex, move the
trimmed edges into the next hypergraph and discard edges that hit a
high-codegree pair there.  Every threshold is an exact ``Fraction`` so branch
decisions, and therefore replays, are bit-reproducible.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import ConstructionError, DomainError, VerificationError
from .hypergraph import BoundedHypergraph, Edge, check_degree_condition, sub_tuples

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ContainerParams:
    r0: int
    r1: int
    R: Fraction
    b: int
    m: int
    q: int

    def __post_init__(self):
        object.__setattr__(self, "R", Fraction(self.R))
        if self.R <= 0:
            raise DomainError("R must be positive")
        if min(self.b, self.m, self.q) < 1:
            raise DomainError("b, m and q must be positive integers")
        if self.r0 < 0 or self.r1 < 0 or self.r0 + self.r1 == 0:
            raise DomainError("r0, r1 must be nonnegative and not both zero")

    @property
    def delta(self) -> Fraction:
        k = self.r0 + self.r1
        return Fraction(1, 2 ** ((k + 1) * k)) / self.R

    def alpha_s(self, s: int) -> Fraction:
        return Fraction(1, 2 ** (s * (self.r0 + self.r1 + 1)))

    def beta_s(self, s: int, v1: int) -> Fraction:
        return (self.alpha_s(s) * Fraction(self.b, v1) ** min(self.r1, s)
                * Fraction(self.b, self.m) ** max(0, s - self.r1))

    def normalized(self, h: BoundedHypergraph) -> "ContainerParams":
        """Replace ``m`` by ``v0(H)`` when that is smaller and still at least ``b``."""
        if self.b > min(self.m, h.v1_count):
            raise DomainError(f"need b <= min(m, |V1|), got b={self.b}, m={self.m}, |V1|={h.v1_count}")
        if self.b <= h.v0_count < self.m:
            return replace(self, m=h.v0_count)
        return self


def ladder(r0: int, r1: int) -> List[Tuple[int, int]]:
    """Uniformities visited by the construction, starting from ``(r0, r1)``."""
    return [(r0, i1) for i1 in range(r1, 0, -1)] + [(i0, 0) for i0 in range(r0, 0, -1)]


def step_down(i0: int, i1: int) -> Tuple[int, Tuple[int, int]]:
    """The coordinate ``c`` peeled at ``(i0, i1)`` and the next uniformity."""
    if i1 > 0:
        return 1, (i0, i1 - 1)
    return 0, (i0 - 1, i1)


def codegree_indices(i0: int, i1: int) -> List[Tuple[int, int]]:
    return [(l0, l1) for l0 in range(i0 + 1) for l1 in range(i1 + 1) if (l0, l1) != (0, 0)]


def base_deltas(h: BoundedHypergraph) -> Dict[Tuple[int, int], int]:
    return {(l0, l1): h.max_codegree(l0, l1) for l0, l1 in codegree_indices(h.r0, h.r1)}


DeltaTable = Dict[Tuple[int, int, int, int], Fraction]


def delta_table(base: Dict[Tuple[int, int], int], params: ContainerParams, v1: int) -> DeltaTable:
    """Codegree ceilings for every rung of the ladder, by the doubling recursion."""
    r0, r1 = params.r0, params.r1
    table: DeltaTable = {}
    for l0, l1 in codegree_indices(r0, r1):
        if (l0, l1) not in base:
            raise ConstructionError(f"missing base codegree for ({l0}, {l1})")
        table[r0, r1, l0, l1] = Fraction(base[l0, l1])
    shrink1 = Fraction(params.b, v1)
    shrink0 = Fraction(params.b, params.m)
    for i0, i1 in ladder(r0, r1)[1:]:
        for l0, l1 in codegree_indices(i0, i1):
            if i0 == r0:
                table[i0, i1, l0, l1] = max(2 * table[i0, i1 + 1, l0, l1 + 1],
                                            shrink1 * table[i0, i1 + 1, l0, l1])
            else:
                table[i0, i1, l0, l1] = max(2 * table[i0 + 1, i1, l0 + 1, l1],
                                            shrink0 * table[i0 + 1, i1, l0, l1])
    return table


def delta_explicit(base: Dict[Tuple[int, int], int], params: ContainerParams, v1: int,
                   i0: int, i1: int, l0: int, l1: int) -> Fraction:
    """Closed form of the same ceiling as a maximum over ``0 <= d_j <= r_j - i_j``."""
    r0, r1 = params.r0, params.r1
    if (i0, i1) not in ladder(r0, r1) or (l0, l1) not in codegree_indices(i0, i1):
        raise DomainError(f"invalid table index ({i0}, {i1}, {l0}, {l1})")
    shrink1 = Fraction(params.b, v1)
    shrink0 = Fraction(params.b, params.m)
    return max(
        2 ** (d0 + d1) * shrink1 ** (r1 - i1 - d1) * shrink0 ** (r0 - i0 - d0)
        * base[l0 + d0, l1 + d1]
        for d0 in range(r0 - i0 + 1)
        for d1 in range(r1 - i1 + 1)
    )


def heavy_pairs(gstar: Iterable[Edge], table: DeltaTable, i0p: int, i1p: int,
                l0: int, l1: int) -> set:
    """Pairs ``(T0, T1)`` of sizes ``(l0, l1)`` inside some edge with codegree at least half the ceiling."""
    counts = Counter()
    for e in gstar:
        counts.update(sub_tuples(e, l0, l1))
    half = table[i0p, i1p, l0, l1] / 2
    return {T for T, k in counts.items() if k >= half}


@dataclass
class RoundOutput:
    reduced: Tuple[Edge, ...]
    vseq: List
    s_idx: List[int]
    w_idx: List[int]
    c: int
    stopped_by_guard: bool = False
    trace: List[str] = field(default_factory=list)

    @property
    def L(self) -> int:
        return len(self.vseq)

    @property
    def s_vertices(self) -> List:
        return [self.vseq[j] for j in self.s_idx]

    @property
    def w_vertices(self) -> List:
        return [self.vseq[j] for j in self.w_idx]


def run_round(edges: Sequence[Edge], i0: int, i1: int, membership: Callable[[object], bool],
              params: ContainerParams, table: DeltaTable, verbose: bool = False,
              carry: bool = True) -> RoundOutput:
    """One round at uniformity ``(i0, i1)``.

    ``membership(v)`` answers "is ``v`` a fingerprint vertex": ``v`` outside
    ``I`` when peeling coordinate 0, ``v`` inside ``J`` when peeling 1.

    In a bounded (non-uniform) hypergraph some edges may already have an empty
    ``c``-part.  With ``carry`` they move into the reduced hypergraph
    unchanged, one at a time and subject to the same high-codegree screen as
    trimmed edges; the remaining edges are screened against the result before
    the loop starts.  Without ``carry`` they stay behind, and once only such
    edges survive the round stops instead of picking a degree-zero vertex
    (which would loop forever).
    """
    c, (i0p, i1p) = step_down(i0, i1)
    indices = codegree_indices(i0p, i1p)
    half = {ix: table[(i0p, i1p) + ix] / 2 for ix in indices}

    gstar: List[Edge] = []
    deg = Counter()
    out = RoundOutput(reduced=(), vseq=[], s_idx=[], w_idx=[], c=c)

    def is_heavy(e: Edge) -> bool:
        return any(deg[T] >= half[ix] for ix in indices for T in sub_tuples(e, *ix))

    if carry:
        live = []
        for e in edges:
            if e[c]:
                live.append(e)
            elif not is_heavy(e):
                gstar.append(e)
                for ix in indices:
                    deg.update(sub_tuples(e, *ix))
        if gstar:
            live = [e for e in live if not is_heavy(e)]
            if verbose:
                out.trace.append(f"carried {len(gstar)} edges with empty part {c}")
    else:
        live = list(edges)

    j = 0
    while len(out.s_idx) < params.b and live:
        counts = Counter(v for e in live for v in e[c])
        if not counts:
            out.stopped_by_guard = True
            break
        top = max(counts.values())
        v = min(x for x, k in counts.items() if k == top)
        out.vseq.append(v)
        chosen = membership(v)
        if chosen:
            out.s_idx.append(j)
            for e in live:
                if v in e[c]:
                    part = tuple(x for x in e[c] if x != v)
                    trimmed = Edge(part, e.e1) if c == 0 else Edge(e.e0, part)
                    gstar.append(trimmed)
                    for ix in indices:
                        deg.update(sub_tuples(trimmed, *ix))
        else:
            out.w_idx.append(j)
        if verbose:
            out.trace.append(f"j={j} c={c} v={v!r} {'S' if chosen else 'W'} "
                             f"e(A)={len(live)} e(G*)={len(gstar)}")
        live = [e for e in live if v not in e[c] and not is_heavy(e)]
        j += 1
    out.reduced = tuple(gstar)
    return out


@dataclass(frozen=True)
class Fingerprint:
    s0: tuple
    s1: tuple


@dataclass(frozen=True)
class ContainerPair:
    a: tuple
    b: tuple


@dataclass
class ContainerRun:
    """Everything a construction produced, for checking and forensics."""

    fingerprint: Fingerprint
    container: ContainerPair
    params: ContainerParams
    rounds: List[RoundOutput]
    stop_level: Tuple[int, int]
    guard_events: List[int] = field(default_factory=list)
    violations: List[str] = field(default_factory=list)

    @property
    def trace(self) -> List[str]:
        return [line for r in self.rounds for line in r.trace]


def _independent(edges: Iterable[Edge], I: set, J: set) -> bool:
    return not any(I.isdisjoint(e.e0) and J.issuperset(e.e1) for e in edges)


def _max_codegree(edges: Sequence[Edge], l0: int, l1: int) -> int:
    counts = Counter()
    for e in edges:
        counts.update(sub_tuples(e, l0, l1))
    return max(counts.values(), default=0)


def _construct(h: BoundedHypergraph, params: ContainerParams, member: Tuple[Callable, Callable],
               literal_c4: bool = False, verbose: bool = False,
               witness: Optional[Tuple[set, set]] = None, carry: bool = True) -> ContainerRun:
    v1 = h.v1_count
    table = delta_table(base_deltas(h), params, v1)
    e_h = h.e
    S = (set(), set())
    rounds: List[RoundOutput] = []
    violations: List[str] = []
    current: Sequence[Edge] = h.edges
    for s, (i0, i1) in enumerate(ladder(params.r0, params.r1)):
        c, (i0p, i1p) = step_down(i0, i1)
        rnd = run_round(current, i0, i1, member[c], params, table, verbose=verbose, carry=carry)
        rounds.append(rnd)
        S[c].update(rnd.s_vertices)
        if witness is not None:
            violations += _round_checks(s, (i0, i1), current, rnd, witness, params, table, e_h, v1)
        if len(rnd.reduced) < params.beta_s(s + 1, v1) * e_h:
            W = set(rnd.w_vertices)
            if c == 0:
                pair = ContainerPair(tuple(sorted(W)), () if literal_c4 else h.v1)
            else:
                pair = ContainerPair((), tuple(x for x in h.v1 if x not in W))
            return ContainerRun(
                fingerprint=Fingerprint(tuple(sorted(S[0])), tuple(sorted(S[1]))),
                container=pair,
                params=params,
                rounds=rounds,
                stop_level=(i0, i1),
                guard_events=[k for k, r in enumerate(rounds) if r.stopped_by_guard],
                violations=violations,
            )
        current = rnd.reduced
    raise VerificationError("container construction ran past the last rung; the input pair "
                            "cannot have been independent")


def _round_checks(s, level, G, rnd, witness, params, table, e_h, v1) -> List[str]:
    """Per-round invariant checks; returns violation strings."""
    I, J = witness
    i0, i1 = level
    c, (i0p, i1p) = step_down(i0, i1)
    bad = []
    if not _independent(rnd.reduced, I, J):
        bad.append(f"round {s}: witness pair not independent in the reduced hypergraph")
    for l0, l1 in codegree_indices(i0p, i1p):
        got = _max_codegree(rnd.reduced, l0, l1)
        if got > table[i0p, i1p, l0, l1]:
            bad.append(f"round {s}: codegree ({l0},{l1}) = {got} exceeds ceiling "
                       f"{table[i0p, i1p, l0, l1]}")
    # progress trichotomy, only where its hypotheses hold
    a = params.alpha_s(s)
    b, m, q, R = params.b, params.m, params.q, params.R
    enough_edges = len(G) >= a * Fraction(b, v1) ** (params.r1 - i1) * Fraction(b, m) ** (params.r0 - i0) * e_h
    ceilings_ok = all(_max_codegree(G, l0, l1) <= table[i0, i1, l0, l1]
                      for l0, l1 in codegree_indices(i0, i1))
    if enough_edges and ceilings_ok and len(I) <= m:
        p1 = len(rnd.reduced) >= (Fraction(1, 2 ** (i0 + i1 + 1)) * a * Fraction(b, v1) ** (params.r1 - i1p)
                                  * Fraction(b, m) ** (params.r0 - i0p) * e_h)
        w = len(rnd.w_idx)
        p2 = c == 1 and w >= Fraction(1, 2 ** (params.r1 + 1)) / R * a * v1
        p3 = c == 0 and w >= Fraction(1, 2 ** (params.r0 + params.r1 + 1)) / R * a * q
        if not (p1 or p2 or p3):
            bad.append(f"round {s}: progress trichotomy fails (e(G*)={len(rnd.reduced)}, |W|={w})")
    return bad


def _prepare(h: BoundedHypergraph, params: ContainerParams, check_degrees: bool) -> ContainerParams:
    if h.e == 0:
        raise DomainError("container construction needs a nonempty hypergraph")
    if (params.r0, params.r1) != (h.r0, h.r1):
        raise DomainError("params bounds differ from the hypergraph's")
    params = params.normalized(h)
    if check_degrees:
        failed = [d for d in check_degree_condition(h, params.R, params.b, params.m, params.q)
                  if not d.holds]
        if failed:
            raise DomainError(f"codegree condition fails at {[(d.l0, d.l1) for d in failed]}")
    return params


def _live_membership(I: set, J: set):
    return (lambda v: v not in I), (lambda v: v in J)


def trace_container(h: BoundedHypergraph, I: Iterable, J: Iterable, params: ContainerParams,
                    literal_c4: bool = False, check_degrees: bool = True,
                    verbose: bool = False, instrument: bool = True,
                    carry: bool = True) -> ContainerRun:
    """Build the container for ``(I, J)`` and record every runtime check."""
    params = _prepare(h, params, check_degrees)
    I = set(I) & set(h.v0)
    J = set(J) & set(h.v1)
    if len(I) > params.m or not _independent(h.edges, I, J):
        raise DomainError("(I, J) must be independent with |I| <= m")
    run = _construct(h, params, _live_membership(I, J), literal_c4=literal_c4, verbose=verbose,
                     witness=(I, J) if instrument else None, carry=carry)
    if instrument:
        run.violations += check_container_contract(h, I, J, run.fingerprint, run.container, params)
    for line in run.trace:
        log.debug(line)
    return run


def build_container(h: BoundedHypergraph, I: Iterable, J: Iterable, params: ContainerParams,
                    literal_c4: bool = False,
                    check_degrees: bool = True) -> Tuple[Fingerprint, ContainerPair]:
    run = trace_container(h, I, J, params, literal_c4=literal_c4,
                          check_degrees=check_degrees, instrument=False)
    return run.fingerprint, run.container


def replay_container(h: BoundedHypergraph, fp: Fingerprint, params: ContainerParams,
                     literal_c4: bool = False, check_degrees: bool = False,
                     carry: bool = True) -> ContainerPair:
    """Recover a container from its fingerprint alone."""
    params = _prepare(h, params, check_degrees)
    s0, s1 = set(fp.s0), set(fp.s1)
    member = (lambda v: v in s0), (lambda v: v in s1)
    return _construct(h, params, member, literal_c4=literal_c4, carry=carry).container


def check_container_contract(h: BoundedHypergraph, I: Iterable, J: Iterable, fp: Fingerprint,
                             pair: ContainerPair, params: ContainerParams) -> List[str]:
    """Violations of the container guarantees for one traced pair (empty when all hold)."""
    I, J = set(I) & set(h.v0), set(J) & set(h.v1)
    A, B = set(pair.a), set(pair.b)
    delta, q, v1 = params.delta, params.q, h.v1_count
    bad = []
    if not A <= I:
        bad.append("A not inside I")
    if not J <= B:
        bad.append("J not inside B")
    if len(fp.s0) > params.r0 * params.b or len(fp.s1) > params.r1 * params.b:
        bad.append(f"fingerprint sizes ({len(fp.s0)}, {len(fp.s1)}) exceed (r0 b, r1 b)")
    if not (len(A) >= delta * q or len(B) <= (1 - delta) * v1):
        bad.append(f"neither |A| >= delta q nor |B| <= (1 - delta)|V1| (|A|={len(A)}, |B|={len(B)})")
    if not set(fp.s0) <= set(h.v0) - I:
        bad.append("S0 meets I")
    if not set(fp.s1) <= J:
        bad.append("S1 not inside J")
    if fp.s0 and len(A) < delta * q:
        bad.append("S0 nonempty but |A| < delta q")
    return bad
