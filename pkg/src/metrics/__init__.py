"""Front-quality metrics and performance profiles."""

from src.metrics.fronts import (
    DegenerateFront,
    EmptyFront,
    FrontArchive,
    MetricError,
    extreme_points,
    nondominated_filter,
    purity,
    reference_front,
    spread_metrics,
)
from src.metrics.profiles import (
    ProfileTable,
    metric_cost,
    metric_profile_table,
    performance_profile,
    rho_at,
)

__all__ = [
    "DegenerateFront",
    "EmptyFront",
    "FrontArchive",
    "MetricError",
    "ProfileTable",
    "extreme_points",
    "metric_cost",
    "metric_profile_table",
    "nondominated_filter",
    "performance_profile",
    "purity",
    "reference_front",
    "rho_at",
    "spread_metrics",
]
