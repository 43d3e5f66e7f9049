"""Python surface of the D2D offloading simulator core."""

from ._core import (
    __version__,
    build_table,
    chernoff_lower,
    chernoff_upper,
    closeness,
    exact_skellam_cdf,
    exact_skellam_pmf,
    expected_old_count,
    fit_gamma,
    ibp_replay_old_counts,
    reg_lower_inc_gamma,
    run_simulation,
    saddlepoint_cdf,
    saddlepoint_pmf,
    sweep,
)

__all__ = [
    "__version__",
    "build_table",
    "chernoff_lower",
    "chernoff_upper",
    "closeness",
    "exact_skellam_cdf",
    "exact_skellam_pmf",
    "expected_old_count",
    "fit_gamma",
    "ibp_replay_old_counts",
    "reg_lower_inc_gamma",
    "run_simulation",
    "saddlepoint_cdf",
    "saddlepoint_pmf",
    "sweep",
]
