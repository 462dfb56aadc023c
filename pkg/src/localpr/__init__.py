"""Local PageRank computation under an instrumented graph-access oracle.

Backward push for contribution vectors, contributing-set detection,
Monte Carlo and bidirectional single-node PageRank estimation, exact
reference solvers and generators for hard instance families.
"""

from .bippr import (bippr_adaptive, bippr_fixed, chebyshev_walks, empirical_variance_check,
                    median_trials, walk_estimates)
from .detect import DetectionResult, default_budget, detect_adaptive, detect_known_npi
from .errors import (GenerationError, GraphBoundsError, GraphParseError, GraphValidationError,
                     LocalPRError, ParameterError, QueryError)
from .estimate import Estimate
from .exact import (DenseScoreVector, exact_contributions, exact_pagerank, exact_ppr_matrix,
                    ppr_apply, write_scores_csv)
from .graph import Graph, load_edge_list, max_degrees, validate_out_degrees, write_edge_list
from .instances import (HardInstanceMeta, export_instance, gen_contribution_hard,
                        gen_pagerank_family, gen_pagerank_hard, load_meta, permuted_family)
from .montecarlo import WalkConfig, mc_pagerank, sample_node, sample_walk
from .oracle import AccessOracle, PermutedOracle, QueryStats
from .push import BackwardPush, PushResult, approx_contributions, residual_mass
from .streams import stream

__version__ = "0.1.0"

__all__ = [
    "AccessOracle", "BackwardPush", "DenseScoreVector", "DetectionResult", "Estimate",
    "GenerationError", "Graph", "GraphBoundsError", "GraphParseError", "GraphValidationError",
    "HardInstanceMeta", "LocalPRError", "ParameterError", "PermutedOracle", "PushResult",
    "QueryError", "QueryStats", "WalkConfig", "approx_contributions", "bippr_adaptive",
    "bippr_fixed", "chebyshev_walks", "default_budget", "detect_adaptive", "detect_known_npi",
    "empirical_variance_check", "exact_contributions", "exact_pagerank", "exact_ppr_matrix",
    "export_instance", "gen_contribution_hard", "gen_pagerank_family", "gen_pagerank_hard",
    "load_edge_list", "load_meta", "max_degrees", "mc_pagerank", "median_trials",
    "permuted_family", "ppr_apply", "residual_mass", "sample_node", "sample_walk", "stream",
    "validate_out_degrees", "walk_estimates", "write_edge_list", "write_scores_csv",
]
