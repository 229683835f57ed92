"""Containers for sets with small sumset, with exhaustive checks at small scale."""
from .census import (
    conjecture_bound,
    doubling_stats,
    enumerate_small_doubling,
    group_tightness_family,
    lower_bound_family,
    naive_small_doubling,
    theorem_bound,
    typicality_report,
)
from .container import ContainerParams, build_container, replay_container, trace_container
from .errors import (
    ConstructionError,
    DomainError,
    ResourceError,
    SumContainersError,
    UsageError,
    VerificationError,
)
from .group import FiniteAbelian, IntegerWindow, beta, parse_group, sumset
from .hypergraph import BoundedHypergraph, check_degree_condition
from .sumset_tree import TreeParams, build_container_family, build_sum_hypergraph, trace_to_leaf
from .supersat import (
    alpha,
    check_pollard_general,
    check_supersat_corollary,
    classify_dichotomy,
    deficient_pair_count,
    find_ap_cover,
)

__version__ = "0.1.0"

__all__ = [
    "BoundedHypergraph",
    "ConstructionError",
    "ContainerParams",
    "DomainError",
    "FiniteAbelian",
    "IntegerWindow",
    "ResourceError",
    "SumContainersError",
    "TreeParams",
    "UsageError",
    "VerificationError",
    "alpha",
    "beta",
    "build_container",
    "build_container_family",
    "build_sum_hypergraph",
    "check_degree_condition",
    "check_pollard_general",
    "check_supersat_corollary",
    "classify_dichotomy",
    "conjecture_bound",
    "deficient_pair_count",
    "doubling_stats",
    "enumerate_small_doubling",
    "find_ap_cover",
    "group_tightness_family",
    "lower_bound_family",
    "naive_small_doubling",
    "parse_group",
    "replay_container",
    "sumset",
    "theorem_bound",
    "trace_container",
    "trace_to_leaf",
    "typicality_report",
]
