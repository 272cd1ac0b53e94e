from ._core import (
    ConvergenceError,
    DataError,
    Distribution,
    DomainError,
    InfiniteMoment,
    InvalidParameter,
    __version__,
    coverage_probability,
    empirical_bound,
    fit_gpd_mle,
    fit_hill,
    fit_lpd,
    log_returns,
    min_n_for_max_exceeding,
    partial_mean_bound,
    residual_cv,
    run_cli,
    scaled_bound,
    select_threshold,
    simulate_table1,
)

__all__ = [
    "ConvergenceError",
    "DataError",
    "Distribution",
    "DomainError",
    "InfiniteMoment",
    "InvalidParameter",
    "__version__",
    "coverage_probability",
    "empirical_bound",
    "fit_gpd_mle",
    "fit_hill",
    "fit_lpd",
    "log_returns",
    "min_n_for_max_exceeding",
    "partial_mean_bound",
    "residual_cv",
    "run_cli",
    "scaled_bound",
    "select_threshold",
    "simulate_table1",
]
