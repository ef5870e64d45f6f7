"""Optimal transport and domain adaptation on the SPD manifold."""

from ._spdot import (
    ConvergenceFailure,
    DegeneratePlan,
    Error,
    InvalidInput,
    NotPositiveDefinite,
    NumericalFailure,
    UnsupportedInstance,
    __version__,
    adapt,
    adaptive_lambda,
    covariance,
    distance,
    exact_ot,
    exp_map,
    frechet_mean,
    geodesic,
    log_map,
    random_spd,
    sinkhorn,
)

__all__ = [
    "ConvergenceFailure",
    "DegeneratePlan",
    "Error",
    "InvalidInput",
    "NotPositiveDefinite",
    "NumericalFailure",
    "UnsupportedInstance",
    "__version__",
    "adapt",
    "adaptive_lambda",
    "covariance",
    "distance",
    "exact_ot",
    "exp_map",
    "frechet_mean",
    "geodesic",
    "log_map",
    "random_spd",
    "sinkhorn",
]
