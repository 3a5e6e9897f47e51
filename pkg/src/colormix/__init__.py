"""Exact list-coloring marginals, SAW-tree cutsets and block recursions on sparse random graphs."""

from .coloring import (
    InfeasibleCondition,
    ListColoringInstance,
    OracleBudgetExceeded,
    count_extensions,
    error_function,
    exact_marginal,
    is_feasible,
    is_proper,
    tv_distance,
)
from .graph import Graph, ball, bfs_distances, generate_gnp, vertex_boundary

__version__ = "0.1.0"

__all__ = [
    "Graph", "ListColoringInstance", "InfeasibleCondition", "OracleBudgetExceeded",
    "ball", "bfs_distances", "count_extensions", "error_function", "exact_marginal",
    "generate_gnp", "is_feasible", "is_proper", "tv_distance", "vertex_boundary",
]
