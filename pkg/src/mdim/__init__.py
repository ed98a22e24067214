"""Metric-dimension toolkit for sparse random graphs.

Certified lower bounds (entropic certificates), constructive upper bounds
(randomized landmark sets with verification), exact solving for small
graphs, closed-form bound formulas, and a seeded Monte-Carlo experiment
harness, exposed through an HTTP service with a thin CLI client.
"""

from .bounds import (
    BoundReport,
    RegimeParams,
    binary_entropy,
    compute_regime,
    diameter_power_lower_bound,
    predicted_shell_tolerance,
    q_value,
    rate_function,
    simple_diameter_lower_bound,
    solve_alpha_beta,
    regime_bounds,
)
from .entropy import (
    EntropyCertificate,
    certify_md_lower_bound,
    column_entropy,
    entropic_width_bound,
)
from .exact import (
    PairCoverageMap,
    build_pair_coverage,
    exact_md,
    greedy_separator,
    is_separator_via_coverage,
)
from .graph import (
    UNREACHED,
    DistanceField,
    GnpParams,
    Graph,
    ShellDecomposition,
    bfs_distances,
    count_pairs_with_three_common_neighbors,
    diameter,
    distance_matrix,
    generate_gnp,
    is_connected,
    shells,
)
from .harness import ExperimentConfig, TrialRecord, run_single, run_sweep, validate_predictions
from .separator import (
    PairSeparationStats,
    SeparatorCertificate,
    construct_separator,
    landmark_count,
    min_sigma,
    pair_delta_at_tstar,
    pair_separation,
    verify_separator,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "DistanceField",
    "EntropyCertificate",
    "ExperimentConfig",
    "GnpParams",
    "Graph",
    "PairCoverageMap",
    "PairSeparationStats",
    "RegimeParams",
    "SeparatorCertificate",
    "ShellDecomposition",
    "TrialRecord",
    "UNREACHED",
    "bfs_distances",
    "binary_entropy",
    "build_pair_coverage",
    "certify_md_lower_bound",
    "column_entropy",
    "compute_regime",
    "construct_separator",
    "count_pairs_with_three_common_neighbors",
    "diameter",
    "distance_matrix",
    "entropic_width_bound",
    "exact_md",
    "generate_gnp",
    "greedy_separator",
    "is_connected",
    "is_separator_via_coverage",
    "diameter_power_lower_bound",
    "landmark_count",
    "min_sigma",
    "pair_delta_at_tstar",
    "pair_separation",
    "predicted_shell_tolerance",
    "q_value",
    "rate_function",
    "run_single",
    "run_sweep",
    "shells",
    "simple_diameter_lower_bound",
    "solve_alpha_beta",
    "regime_bounds",
    "validate_predictions",
    "verify_separator",
]
