"""Branch-indexed sums of geometric and related series via the complex Lambert W function."""

from .branch_sums import (
    BranchSum,
    DeltaValue,
    GeoSeries,
    delta,
    derivative_series,
    geo_sum_branch,
    phi_sum,
    reciprocal_geo_sum,
)
from .classifier import BranchSchedule, TrendReport, Verdict, classify
from .errors import ConvergenceError, DomainError, GeowsumError, PrecisionError
from .lambertw import WValue, lambert_w
from .precision import PrecisionContext, make_context

__version__ = "0.1.0"

__all__ = [
    "BranchSchedule",
    "BranchSum",
    "ConvergenceError",
    "DeltaValue",
    "DomainError",
    "GeoSeries",
    "GeowsumError",
    "PrecisionContext",
    "PrecisionError",
    "TrendReport",
    "Verdict",
    "WValue",
    "classify",
    "delta",
    "derivative_series",
    "geo_sum_branch",
    "lambert_w",
    "make_context",
    "phi_sum",
    "reciprocal_geo_sum",
]
