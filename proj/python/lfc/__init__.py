"""Leader-following consensus toolkit: graph-theoretic stability margins and
delayed-dynamics simulation for second-order agent networks."""

from ._core import (
    AnalysisError,
    Arc,
    Error,
    LeaderTopology,
    ValidationError,
    WeightedDigraph,
    adjacency_matrix,
    analyze_fixed,
    analyze_switched,
    balanced_definiteness,
    builtin_scenario,
    builtin_scenario_names,
    control_input,
    eigenvalues,
    h_matrix,
    has_globally_reachable_node,
    is_balanced,
    is_positive_definite,
    is_positive_stable,
    is_strongly_connected,
    laplacian,
    leader_globally_reachable,
    run_scenario,
    solve_linear,
    solve_lyapunov,
    spectral_norm,
    strong_components,
    symmetric_eigenvalues,
)

__all__ = [
    "AnalysisError",
    "Arc",
    "Error",
    "LeaderTopology",
    "ValidationError",
    "WeightedDigraph",
    "adjacency_matrix",
    "analyze_fixed",
    "analyze_switched",
    "balanced_definiteness",
    "builtin_scenario",
    "builtin_scenario_names",
    "control_input",
    "eigenvalues",
    "h_matrix",
    "has_globally_reachable_node",
    "is_balanced",
    "is_positive_definite",
    "is_positive_stable",
    "is_strongly_connected",
    "laplacian",
    "leader_globally_reachable",
    "run_scenario",
    "solve_linear",
    "solve_lyapunov",
    "spectral_norm",
    "strong_components",
    "symmetric_eigenvalues",
]
