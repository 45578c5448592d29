"""Closeness-centrality rank estimation for large undirected networks.

Exact closeness ranking costs one BFS per node.  This package models the
closeness-to-rank relationship with a logistic curve and calibrates it
from a handful of traversals, which brings the cost of ranking a single
node down to a few BFS sweeps.  It ships the exact baseline, two cheap
estimators, a least-squares fitter for the curve, an error-evaluation
harness, and a scale-free graph generator for controlled experiments.
"""

from .curvefit import (
    DegenerateProfileError,
    FitConfig,
    FitError,
    FitResult,
    fit_logistic,
    reverse_rank_jacobian,
    slope_table,
)
from .evaluation import (
    ErrorReport,
    PerNodeError,
    abs_error,
    paae,
    percentile,
    run_experiment,
    weighted_error,
)
from .graph import (
    EdgeListParseError,
    Graph,
    GraphError,
    degree,
    from_edges,
    largest_connected_component,
    load_edge_list,
    parse_edge_list,
    save_edge_list,
    write_edge_list,
)
from .ranking import (
    DEFAULT_SLOPE,
    LogisticParams,
    RankEstimate,
    exact_ranks,
    heuristic_estimate,
    randomized_estimate,
    rank_from_closeness,
    reverse_rank,
)
from .synth import BAConfig, StudyRow, generate_ba, slope_density_study
from .traversal import (
    ClosenessProbe,
    ConnectivityError,
    bfs_levels,
    closeness,
    closeness_all,
    closeness_probe,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Graph", "GraphError", "EdgeListParseError",
    "parse_edge_list", "load_edge_list", "from_edges",
    "write_edge_list", "save_edge_list",
    "largest_connected_component", "degree",
    "ConnectivityError", "ClosenessProbe",
    "bfs_levels", "closeness", "closeness_probe", "closeness_all",
    "DEFAULT_SLOPE", "LogisticParams", "RankEstimate",
    "exact_ranks", "rank_from_closeness", "reverse_rank",
    "heuristic_estimate", "randomized_estimate",
    "FitError", "DegenerateProfileError", "FitConfig", "FitResult",
    "fit_logistic", "reverse_rank_jacobian", "slope_table",
    "abs_error", "percentile", "weighted_error", "paae",
    "PerNodeError", "ErrorReport", "run_experiment",
    "BAConfig", "StudyRow", "generate_ba", "slope_density_study",
]
