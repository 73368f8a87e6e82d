"""Exact laboratory for cocliques of the flag-opposition graph on (n-1, n)-flags of PG(2n, q)."""

__version__ = "0.1.0"

from .gf import GF, field_new
from .linalg import Subspace, rref
from .qcount import chromatic_formula, example_family_size, f_bound, gamma_degree, gauss
from .geometry import Flag, FlagGeometry, ProjSpace, dualize_flag, enumerate_flags, enumerate_subspaces, get_geometry, is_opposite
from .graph import FlagGraph, build_graph, degree_histogram, export_dimacs, induced_subgraph
from .cocliques import (
    ConstructionSpec,
    FlagFamily,
    build_example,
    classify_space_weight,
    color_map,
    count_flags_skew_to,
    greedy_closure,
    is_coclique,
    is_maximal_coclique,
    red_intersection_check,
)
from .classify import TrichotomyReport, classify_maximal_coclique
from .oracles import analyze_intersecting_family, count_n_spaces_meeting_all, max_skew_subfamily
from .search import SearchResult, max_coclique_exact, max_coclique_heuristic

__all__ = [
    "GF", "field_new", "Subspace", "rref",
    "chromatic_formula", "example_family_size", "f_bound", "gamma_degree", "gauss",
    "Flag", "FlagGeometry", "ProjSpace", "dualize_flag", "enumerate_flags", "enumerate_subspaces",
    "get_geometry", "is_opposite",
    "FlagGraph", "build_graph", "degree_histogram", "export_dimacs", "induced_subgraph",
    "ConstructionSpec", "FlagFamily", "build_example", "classify_space_weight", "color_map",
    "count_flags_skew_to", "greedy_closure", "is_coclique", "is_maximal_coclique", "red_intersection_check",
    "TrichotomyReport", "classify_maximal_coclique",
    "analyze_intersecting_family", "count_n_spaces_meeting_all", "max_skew_subfamily",
    "SearchResult", "max_coclique_exact", "max_coclique_heuristic",
]
