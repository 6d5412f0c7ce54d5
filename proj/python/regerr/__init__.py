"""Recover ensemble error moments from pairwise prediction differences."""

from ._regerr import (
    PairwiseStats,
    ParseError,
    RecoveryReport,
    compute_pairwise_stats,
    default_noise_budget,
    fuse,
    generate,
    inverse_variance_weights,
    moment_matrix_weights,
    read_prediction_csv,
    recover_bias,
    recover_moments_diagonal,
    recover_moments_full,
    run_cli,
)

__all__ = [
    "PairwiseStats",
    "ParseError",
    "RecoveryReport",
    "compute_pairwise_stats",
    "default_noise_budget",
    "fuse",
    "generate",
    "inverse_variance_weights",
    "moment_matrix_weights",
    "read_prediction_csv",
    "recover_bias",
    "recover_moments_diagonal",
    "recover_moments_full",
    "run_cli",
]
