"""Python access to the strip stationary-measure library."""

from ._core import (
    Model,
    StripError,
    check_cauchy_geometric,
    check_littlewood_geometric,
    geom_pmf,
    increment_chain,
    kpz_convergence,
    partition_function,
    partition_function_lg_n1,
    sample_stationary,
    stationarity_test,
    verify_quadratic_algebra,
)

__all__ = [
    "Model",
    "StripError",
    "check_cauchy_geometric",
    "check_littlewood_geometric",
    "geom_pmf",
    "increment_chain",
    "kpz_convergence",
    "partition_function",
    "partition_function_lg_n1",
    "sample_stationary",
    "stationarity_test",
    "verify_quadratic_algebra",
]
