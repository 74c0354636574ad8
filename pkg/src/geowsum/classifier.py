"""Convergence diagnosis from the trajectory of branch sums.

Branches n and -(n+1) form a conjugate pair and share a tier keyed by
n >= 0.  Only tiers with key >= 10 count as asymptotic evidence; the small
branches are reported but never decide the verdict.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

import mpmath
from mpmath import mpc, mpf

from .branch_sums import GeoSeries, geo_sum_branch
from .errors import DomainError
from .precision import PrecisionContext, to_complex, working

DEFAULT_INDICES = (0, -1, 1, -2, 10, -11, 10**3, -(10**3 + 1), 10**6, -(10**6 + 1))
TIER_FACTOR = 10
FINAL_DISTANCE = mpf("1e-6")
ASYMPTOTIC_KEY = 10
MIN_LIMIT_BRANCH = 1000


def pair_key(n: int) -> int:
    return n if n >= 0 else -(n + 1)


@dataclass(frozen=True)
class BranchSchedule:
    indices: tuple = DEFAULT_INDICES

    def __post_init__(self):
        indices = tuple(int(n) for n in self.indices)
        object.__setattr__(self, "indices", indices)
        if not indices:
            raise DomainError("branch schedule is empty")
        keys = sorted({max(pair_key(n), 1) for n in indices})
        if keys[-1] < TIER_FACTOR * keys[0]:
            raise DomainError("branch schedule needs two magnitudes at least 10x apart")


class Verdict(enum.Enum):
    CONVERGES = "Converges"
    DIVERGES = "Diverges"
    INCONCLUSIVE = "Inconclusive"


class Sample(NamedTuple):
    branch: int
    value: mpc
    distance: mpf


@dataclass(frozen=True)
class TrendReport:
    verdict: Verdict
    limit: mpc | None
    samples: list = field(default_factory=list)
    rationale: str = ""


def _tiers(samples):
    tiers = {}
    for s in samples:
        tiers.setdefault(pair_key(s.branch), []).append(s)
    return [tiers[k] for k in sorted(tiers) if k >= ASYMPTOTIC_KEY]


def _show(values):
    return "[" + ", ".join(mpmath.nstr(v, 3) for v in values) + "]"


def _grows(values):
    return all(b >= TIER_FACTOR * a for a, b in zip(values, values[1:]))


def classify(series: GeoSeries, schedule: BranchSchedule | None = None, ctx: PrecisionContext | None = None) -> TrendReport:
    """Converges, Diverges or Inconclusive from branch sums over the schedule."""
    schedule = schedule or BranchSchedule()
    if ctx is None:
        raise DomainError("classify needs a precision context")
    with working(ctx):
        a, r = to_complex(series.a), to_complex(series.r)
        candidate = a / (1 - r)
        samples = []
        for n in schedule.indices:
            value = geo_sum_branch(series, n, ctx).value
            samples.append(Sample(n, value, abs(value - candidate)))

        tiers = _tiers(samples)
        if len(tiers) < 2:
            return TrendReport(Verdict.INCONCLUSIVE, None, samples, "fewer than two asymptotic tiers (|n| >= 10) in the schedule")
        # worst case inside each tier for convergence, best case for growth
        distances = [max(s.distance for s in tier) for tier in tiers]
        sizes = [min(abs(s.value) for s in tier) for tier in tiers]

        if all(d == 0 for d in distances) or (
            all(b * TIER_FACTOR <= a_ for a_, b in zip(distances, distances[1:])) and distances[-1] < FINAL_DISTANCE
        ):
            return TrendReport(
                Verdict.CONVERGES,
                candidate,
                samples,
                f"distance to a/(1-r) falls at least {TIER_FACTOR}x per tier to {mpmath.nstr(distances[-1], 3)}",
            )
        if all(s > 0 for s in sizes) and _grows(sizes):
            return TrendReport(
                Verdict.DIVERGES,
                None,
                samples,
                f"|sum| grows at least {TIER_FACTOR}x per tier to {mpmath.nstr(sizes[-1], 3)}",
            )
        return TrendReport(
            Verdict.INCONCLUSIVE,
            None,
            samples,
            f"neither criterion met: tier distances {_show(distances)}, tier sizes {_show(sizes)}",
        )


def limit_estimate(series: GeoSeries, n_big: int, ctx: PrecisionContext) -> mpc:
    """Branch sum at a large branch, as the extrapolated limit candidate."""
    if abs(int(n_big)) < MIN_LIMIT_BRANCH:
        raise DomainError(f"limit_estimate needs |n| >= {MIN_LIMIT_BRANCH}, got {n_big}")
    return geo_sum_branch(series, n_big, ctx).value
