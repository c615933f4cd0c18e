"""Exact decision procedures for joinings and disjointness of weighted graphs."""
from .disjointness import (
    DisjointnessVerdict,
    c_disjoint,
    classify_pair,
    persistence_experiment,
    strong_disjoint,
    weak_disjoint,
    weak_disjoint_rank,
    weak_disjoint_spectral,
)
from .factor import FactorMap, common_factor_search, find_factor_maps, quotient_graph, verify_factor
from .graph import (
    Graph,
    make_complete_bipartite,
    make_cycle,
    make_path,
    parse_graph,
    tensor_product,
    transition_matrix,
)
from .joining import (
    WeightJoining,
    build_J,
    build_Jc,
    build_Js,
    build_Jw,
    diagonal_cycle_joining,
    product_joining,
    validate_joining,
)
from .linalg import RMatrix, RPoly, char_poly, null_space, poly_gcd, rank, rref
from .markov import ReversibleChain, chain_from_graph, graph_from_chain, simulate
from .ogj import coordinate_ranges, ogj_value, solve_lp

__version__ = "0.1.0"

__all__ = [
    "DisjointnessVerdict",
    "FactorMap",
    "Graph",
    "RMatrix",
    "RPoly",
    "ReversibleChain",
    "WeightJoining",
    "build_J",
    "build_Jc",
    "build_Js",
    "build_Jw",
    "c_disjoint",
    "chain_from_graph",
    "char_poly",
    "classify_pair",
    "common_factor_search",
    "coordinate_ranges",
    "diagonal_cycle_joining",
    "find_factor_maps",
    "graph_from_chain",
    "make_complete_bipartite",
    "make_cycle",
    "make_path",
    "null_space",
    "ogj_value",
    "parse_graph",
    "persistence_experiment",
    "poly_gcd",
    "product_joining",
    "quotient_graph",
    "rank",
    "rref",
    "simulate",
    "solve_lp",
    "strong_disjoint",
    "tensor_product",
    "transition_matrix",
    "validate_joining",
    "verify_factor",
    "weak_disjoint",
    "weak_disjoint_rank",
    "weak_disjoint_spectral",
]
