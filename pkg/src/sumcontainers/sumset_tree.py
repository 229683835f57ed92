"""Iterated containers for sets with small sumset.

The root of the tree is ``H(emptyset, Y)``.  A node ``H(A, B)`` is expanded
while ``|A| <= m``, ``|B| > m / ln n`` and the hypergraph still has more than
``(eps^2 / 2) |B|^2`` edges; each realised fingerprint of the container
algorithm on ``H(A, B)`` gives a child ``H(A + C, D)``.  The tree is grown
lazily: only the fingerprints met by the traced witnesses are materialised.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from .container import ContainerParams, Fingerprint, build_container
from .errors import DomainError, VerificationError
from .group import GroupDescriptor, IntegerWindow, element_set, sumset
from .hypergraph import BoundedHypergraph, check_degree_condition, make_edge
from .supersat import as_fraction, deficient_pair_count

A_TOO_BIG = "A_TOO_BIG"
B_SMALL = "B_SMALL"
FEW_EDGES = "FEW_EDGES"


def build_sum_hypergraph(g: GroupDescriptor, Y, A=(), B=None) -> BoundedHypergraph:
    """``H(A, B)``: one edge ``({a + b}, {a, b})`` per unordered ``{a, b}`` in ``B`` with ``a + b`` outside ``A``."""
    Y = element_set(g, Y)
    YY = sumset(g, Y, Y)
    A = element_set(g, A)
    B = Y if B is None else element_set(g, B)
    if not set(A) <= set(YY):
        raise DomainError("A must lie inside Y + Y")
    if not set(B) <= set(Y):
        raise DomainError("B must lie inside Y")
    excluded = set(A)
    edges = []
    for i, a in enumerate(B):
        for b in B[i:]:
            c = g.add(a, b)
            if c not in excluded:
                edges.append(make_edge([c], [a, b]))
    return BoundedHypergraph([c for c in YY if c not in excluded], B, 1, 2, edges)


@dataclass(frozen=True)
class TreeParams:
    """Tree parameters for ``|Y| = n``; ``q`` and ``b`` are rounded up."""

    n: int
    m: int
    epsilon: Fraction

    def __post_init__(self):
        object.__setattr__(self, "epsilon", as_fraction(self.epsilon))
        if self.n < 2:
            raise DomainError("n must be at least 2 so that ln n > 0")
        if self.m < 1:
            raise DomainError("m must be positive")
        if not 0 < self.epsilon < Fraction(1, 4):
            raise DomainError(f"epsilon must lie in (0, 1/4), got {self.epsilon}")

    @property
    def log_n(self) -> float:
        return math.log(self.n)

    @property
    def R(self) -> Fraction:
        return 2 / self.epsilon ** 2

    @property
    def q(self) -> int:
        return math.ceil(self.m / self.log_n)

    @property
    def b(self) -> int:
        return math.ceil(math.sqrt(self.m / self.log_n))

    @property
    def delta(self) -> Fraction:
        return self.epsilon ** 2 / 2 ** 13

    @property
    def depth_bound(self) -> float:
        return 2 ** 14 * self.log_n / float(self.epsilon) ** 2

    @property
    def hypothesis_met(self) -> bool:
        return self.m >= self.log_n ** 2

    def b_small(self, size: int) -> bool:
        return size <= self.m / self.log_n

    def container_params(self, v1: int) -> ContainerParams:
        b = min(self.b, self.m, v1)
        return ContainerParams(r0=1, r1=2, R=self.R, b=b, m=self.m, q=self.q)


@dataclass
class ContainerNode:
    a: tuple
    b: tuple
    depth: int
    leaf_reason: Optional[str] = None
    children: Dict[Fingerprint, "ContainerNode"] = field(default_factory=dict)
    edge_count: int = 0
    _hyper: Optional[BoundedHypergraph] = field(default=None, repr=False)

    @property
    def is_leaf(self) -> bool:
        return self.leaf_reason is not None


def _make_node(g, Y, A, B, depth: int, params: TreeParams) -> ContainerNode:
    node = ContainerNode(a=tuple(A), b=tuple(B), depth=depth)
    if len(A) > params.m:
        node.leaf_reason = A_TOO_BIG
    elif params.b_small(len(B)):
        node.leaf_reason = B_SMALL
    else:
        h = build_sum_hypergraph(g, Y, A, B)
        node.edge_count = h.e
        if h.e <= params.epsilon ** 2 / 2 * len(B) ** 2:
            node.leaf_reason = FEW_EDGES
        else:
            node._hyper = h
    return node


def new_tree(g: GroupDescriptor, Y, params: TreeParams) -> ContainerNode:
    Y = element_set(g, Y)
    return _make_node(g, Y, (), Y, 0, params)


def _check_witness(g, I, J, params: TreeParams):
    if not set(sumset(g, J, J)) <= set(I):
        raise DomainError("witness needs J + J inside I")
    if len(I) > params.m:
        raise DomainError(f"witness has |I| = {len(I)} > m = {params.m}")


def trace_to_leaf(g: GroupDescriptor, Y, params: TreeParams, I, J,
                  tree: ContainerNode) -> List[ContainerNode]:
    """Walk ``(I, J)`` from the root to its leaf, growing the tree as needed."""
    Y = element_set(g, Y)
    I = element_set(g, I)
    J = element_set(g, J)
    _check_witness(g, I, J, params)
    node = tree
    path = [node]
    while True:
        if not (set(node.a) <= set(I) and set(J) <= set(node.b)):
            raise VerificationError(f"path invariant broken at depth {node.depth}: "
                                    f"A={node.a}, B={node.b}, I={I}, J={J}")
        if node.is_leaf:
            return path
        h = node._hyper
        cp = params.container_params(h.v1_count)
        failed = [d for d in check_degree_condition(h, cp.R, cp.b, cp.m, cp.q) if not d.holds]
        if failed:
            raise VerificationError(
                f"codegree condition fails at expandable node depth {node.depth} "
                f"(|A|={len(node.a)}, |B|={len(node.b)}): "
                + ", ".join(f"({d.l0},{d.l1}) {d.lhs} > {float(d.rhs):.4g}" for d in failed))
        fp, pair = build_container(h, set(I) & set(h.v0), J, cp, check_degrees=False)
        child = node.children.get(fp)
        if child is None:
            A2 = tuple(sorted(set(node.a) | set(pair.a)))
            B2 = tuple(pair.b)
            grew = len(pair.a) >= params.delta * cp.q
            shrank = len(B2) <= (1 - params.delta) * len(node.b)
            if not (grew or shrank):
                raise VerificationError(
                    f"expansion at depth {node.depth} makes no progress: |C|={len(pair.a)}, "
                    f"|D|={len(B2)}, |B|={len(node.b)}")
            child = _make_node(g, Y, A2, B2, node.depth + 1, params)
            node.children[fp] = child
        node = child
        path.append(node)


@dataclass
class ContainerFamilyReport:
    family_size: int
    max_depth: int
    child_counts: List[int]
    coverage_failures: List[str] = field(default_factory=list)
    leaf_condition_failures: List[str] = field(default_factory=list)
    depth_failures: List[str] = field(default_factory=list)
    child_count_failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.coverage_failures or self.leaf_condition_failures
                    or self.depth_failures or self.child_count_failures)


def iter_nodes(tree: ContainerNode) -> Iterable[ContainerNode]:
    stack = [tree]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(node.children.values())


def family_of(tree: ContainerNode, params: TreeParams) -> List[Tuple[tuple, tuple]]:
    """Leaves with ``|A| <= m``, deduplicated, in a stable order."""
    found = {(n.a, n.b) for n in iter_nodes(tree) if n.is_leaf and len(n.a) <= params.m}
    return sorted(found, key=lambda ab: (len(ab[0]), ab[0], len(ab[1]), ab[1]))


def build_container_family(g: GroupDescriptor, Y, params: TreeParams, witnesses: Iterable,
                           tree: Optional[ContainerNode] = None):
    """Trace every ``(I, J)`` witness; return ``(family, report, tree)``."""
    tree = new_tree(g, Y, params) if tree is None else tree
    for I, J in witnesses:
        trace_to_leaf(g, Y, params, I, J, tree)
    nodes = list(iter_nodes(tree))
    family = family_of(tree, params)
    report = ContainerFamilyReport(
        family_size=len(family),
        max_depth=max(n.depth for n in nodes),
        child_counts=[len(n.children) for n in nodes if n.children],
    )
    return family, report, tree


def leaf_condition_ok(g: GroupDescriptor, A, B, params: TreeParams) -> bool:
    if len(A) > params.m:
        return False
    if params.b_small(len(B)):
        return True
    return deficient_pair_count(g, A, B) <= params.epsilon ** 2 * len(B) ** 2


def verify_family(g: GroupDescriptor, family, report: ContainerFamilyReport, tree: ContainerNode,
                  params: TreeParams, census: Iterable) -> ContainerFamilyReport:
    """Fill the failure lists of ``report`` against every census set ``J`` (with ``I = J + J``)."""
    for J in census:
        I = set(sumset(g, J, J))
        if not any(set(A) <= I and set(J) <= set(B) for A, B in family):
            report.coverage_failures.append(f"J={tuple(J)} not covered")
    for A, B in family:
        if not leaf_condition_ok(g, A, B, params):
            report.leaf_condition_failures.append(f"(|A|={len(A)}, B={B})")
    if report.max_depth > params.depth_bound:
        report.depth_failures.append(f"depth {report.max_depth} > {params.depth_bound:.4g}")
    cap = params.n ** (4 * params.b)
    for node in iter_nodes(tree):
        if len(node.children) > cap:
            report.child_count_failures.append(
                f"node (|A|={len(node.a)}, |B|={len(node.b)}) has {len(node.children)} > n^(4b) children")
    return report


def dump_tree(tree: ContainerNode) -> dict:
    """Nested plain-data view of the tree for JSON output."""
    return {
        "a_size": len(tree.a),
        "b_size": len(tree.b),
        "depth": tree.depth,
        "edges": tree.edge_count,
        "leaf_reason": tree.leaf_reason,
        "children": [dump_tree(c) for _, c in sorted(tree.children.items(),
                                                     key=lambda kv: (kv[0].s0, kv[0].s1))],
    }


def integer_window_instance(n: int, s: int, K, epsilon) -> Tuple[IntegerWindow, tuple, TreeParams]:
    """Standard instance on ``Y = [n]`` with ``m = floor(K s)``."""
    g = IntegerWindow(n)
    m = math.floor(as_fraction(K) * s)
    return g, g.ground_set(), TreeParams(n=n, m=m, epsilon=epsilon)
