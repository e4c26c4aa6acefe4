"""Group-weighted conformal prediction.

Groups are 0-based; thresholds are floats, with ``math.inf`` for an
infinite threshold. Per-group rules are returned as a list with one
threshold per group.
"""

from ._gwcp import (
    GwcpError,
    HypothesisNotMetError,
    UndefinedWeightError,
    corollary_closed_bound,
    corollary_empirical_bound,
    corrected_gwcp_thresholds,
    estimated_weight_threshold,
    experiment_csv,
    gwcp_threshold,
    gwcp_unobserved_threshold,
    lei_bound_empirical,
    run_experiment,
    split_cp_threshold,
    thm1_bound,
    thm2_closed_bound,
    tight_example_coverage,
    weighted_quantile,
    wcp_threshold,
)

__all__ = [
    "GwcpError",
    "HypothesisNotMetError",
    "UndefinedWeightError",
    "corollary_closed_bound",
    "corollary_empirical_bound",
    "corrected_gwcp_thresholds",
    "estimated_weight_threshold",
    "experiment_csv",
    "gwcp_threshold",
    "gwcp_unobserved_threshold",
    "lei_bound_empirical",
    "run_experiment",
    "split_cp_threshold",
    "thm1_bound",
    "thm2_closed_bound",
    "tight_example_coverage",
    "weighted_quantile",
    "wcp_threshold",
]
