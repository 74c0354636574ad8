"""Branch-indexed closed forms for geometric and derived series.

Every formula is driven by the tower constant

    delta_n = -W_n(-log 2) / log 2,

a fixed point of ``w -> 2**w``.  A geometric series ``a + a r + a r**2 + ...``
with ``r != 1`` is assigned the branch sum ``a (rho**delta_n - 1) / (r - 1)``
where ``rho = |r|`` for a negative real ratio and ``rho = r`` otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import mpmath
from mpmath import mp, mpc, mpf

from .errors import ConvergenceError, DomainError
from .lambertw import lambert_w
from .precision import PrecisionContext, is_negative_real, to_complex, working


@dataclass(frozen=True)
class GeoSeries:
    """First term ``a`` and ratio ``r`` of ``a + a r + a r**2 + ...``."""

    a: object
    r: object

    def __post_init__(self):
        if to_complex(self.r) == 1:
            raise DomainError("ratio r = 1 is excluded: the branch-sum formula holds for all r except 1")


@dataclass(frozen=True)
class DeltaValue:
    delta: mpc
    branch: int
    fixed_point_residual: mpf


@dataclass(frozen=True)
class BranchSum:
    value: mpc
    branch: int
    series: GeoSeries


class TetrationResult(NamedTuple):
    residual: mpf
    amplification: mpf


def w_log2(n, ctx: PrecisionContext) -> mpc:
    """W_n(-log 2)."""
    with working(ctx):
        return lambert_w(-mp.ln2, n, ctx).w


def delta(n, ctx: PrecisionContext) -> DeltaValue:
    with working(ctx):
        w = w_log2(n, ctx)
        d = -w / mp.ln2
        residual = abs(mpmath.exp(d * mp.ln2) - d)
        if residual > ctx.tol * max(1, abs(d)):
            raise ConvergenceError(f"delta_{n} fails the fixed point 2**delta = delta", residual=residual)
        return DeltaValue(d, int(n), residual)


def _delta(n, ctx):
    return delta(n, ctx).delta


def phi_sum(n, ctx: PrecisionContext) -> mpc:
    """Branch value of 1 + 2 + 4 + 8 + ...  (= delta_n - 1)."""
    with working(ctx):
        return _delta(n, ctx) - 1


def branch_power(x, d, shift: int = 0) -> mpc:
    """``x**(d + shift)`` under the series convention.

    Principal ``exp(d Log x)`` times the exact integer power ``x**shift``;
    for negative real ``x`` the non-integer part uses ``|x|``.
    """
    x = to_complex(x)
    if x == 0:
        if mpmath.re(d + shift) > 0:
            return mpc(0)
        raise DomainError(f"0**({d + shift}) is undefined")
    base = abs(x) if is_negative_real(x) else x
    return mpmath.exp(d * mpmath.log(base)) * x**shift


def geo_sum_branch(series: GeoSeries, n, ctx: PrecisionContext, negative_ratio: str = "absolute") -> BranchSum:
    """Branch sum of a geometric series.

    ``negative_ratio="principal"`` evaluates ``r**delta`` as the principal
    power ``exp(delta Log r)`` even for negative real ``r``;
    ``"principal_reciprocal"`` uses ``exp(-delta Log(1/r))`` instead.  The two
    differ for negative ``r`` and reproduce the uncorrected alternating tables.
    """
    if negative_ratio not in ("absolute", "principal", "principal_reciprocal"):
        raise ValueError(f"unknown negative_ratio convention {negative_ratio!r}")
    with working(ctx):
        a = to_complex(series.a)
        r = to_complex(series.r)
        if r == 1:
            raise DomainError("ratio r = 1 is excluded: the branch-sum formula holds for all r except 1")
        if r == 0:
            return BranchSum(a, int(n), series)
        if a == 0:
            return BranchSum(mpc(0), int(n), series)
        d = _delta(n, ctx)
        if negative_ratio == "principal":
            power = mpmath.exp(d * mpmath.log(r))
        elif negative_ratio == "principal_reciprocal":
            power = mpmath.exp(-d * mpmath.log(1 / r))
        else:
            power = branch_power(r, d)
        return BranchSum(a * (power - 1) / (r - 1), int(n), series)


def reciprocal_geo_sum(x, n, ctx: PrecisionContext) -> mpc:
    """1 + 1/x + 1/x**2 + ... as ``x/(x-1) - x**(1-delta)/(x-1)``."""
    with working(ctx):
        x = to_complex(x)
        if x == 0 or x == 1:
            raise DomainError("reciprocal series needs x not in {0, 1}")
        d = _delta(n, ctx)
        return (x - branch_power(x, -d, 1)) / (x - 1)


def derivative_series(x, n, ctx: PrecisionContext) -> mpc:
    """1 + 2x + 3x**2 + ... via the quotient rule on the branch sum."""
    with working(ctx):
        x = to_complex(x)
        if x == 1:
            raise DomainError("derivative series needs x != 1")
        d = _delta(n, ctx)
        if x == 0:
            return mpc(1)
        xd = branch_power(x, d)
        return (d * xd - d * xd / x - xd + 1) / (x - 1) ** 2


def weighted_derivative_series(x, n, ctx: PrecisionContext) -> mpc:
    """x + 2x**2 + 3x**3 + ..."""
    with working(ctx):
        x = to_complex(x)
        if x == 1:
            raise DomainError("weighted derivative series needs x != 1")
        if x == 0:
            return mpc(0)
        d = _delta(n, ctx)
        xd = branch_power(x, d)
        return (d * xd * x - d * xd - xd * x + x) / (x - 1) ** 2


def tail_coefficient_series(x, n, ctx: PrecisionContext) -> mpc:
    """x**(delta-2) + 2 x**(delta-3) + 3 x**(delta-4) + ..."""
    with working(ctx):
        x = to_complex(x)
        if x == 0 or x == 1:
            raise DomainError("tail coefficient series needs x not in {0, 1}")
        d = _delta(n, ctx)
        return (d - d * x + branch_power(x, d) - 1) / (x - 1) ** 2


def scaled_tail_coefficient_series(x, n, ctx: PrecisionContext) -> mpc:
    """1 + 2/x + 3/x**2 + ...  (the tail series divided by x**(delta-2))."""
    with working(ctx):
        x = to_complex(x)
        d = _delta(n, ctx)
        return tail_coefficient_series(x, n, ctx) / branch_power(x, d, -2)


def combined_phi_series(n, ctx: PrecisionContext) -> mpc:
    """2 + 5/2 + 17/4 + 65/8 + ...  =  sum of 2**k plus sum of 2**-k."""
    with working(ctx):
        w = w_log2(n, ctx)
        return 1 + 2 * mp.ln2 / w - w / mp.ln2


def sqrt2_ratio(n, ctx: PrecisionContext) -> mpc:
    """(sqrt2 + 2 sqrt2**2 + ...) / (1 + sqrt2 + sqrt2**2 + ...) as a quotient of branch sums."""
    with working(ctx):
        root2 = mpmath.sqrt(2)
        numerator = weighted_derivative_series(root2, n, ctx)
        denominator = geo_sum_branch(GeoSeries(1, root2), n, ctx).value
        if denominator == 0:
            raise DomainError(f"denominator series vanishes on branch {n}")
        return numerator / denominator


def sqrt2_ratio_simplified(n, ctx: PrecisionContext) -> mpc:
    """Index-law simplification using principal square roots of delta and 2 delta."""
    with working(ctx):
        d = _delta(n, ctx)
        root2 = mpmath.sqrt(2)
        sd = mpmath.sqrt(d)
        s2d = mpmath.sqrt(2 * d)
        return (1 + root2) * (d * s2d - d * sd - s2d + root2) / (sd - 1)


def principal_log_winding(n, ctx: PrecisionContext) -> int:
    """Integer k with ``delta log 2 = Log(delta) + 2 pi i k``.

    ``Log(delta)/delta = log 2`` holds exactly when k = 0; otherwise the two
    sides differ by ``2 pi i k / delta``.  The principal square root
    ``sqrt(delta)`` equals ``sqrt(2)**delta`` iff k is even.
    """
    with working(ctx):
        d = _delta(n, ctx)
        gap = (d * mp.ln2 - mpmath.log(d)) / (2j * mp.pi)
        k = int(mpmath.nint(gap.real))
        if abs(gap - k) > mpf(10) ** (-ctx.digits // 2):
            raise ConvergenceError(f"delta_{n} log 2 - Log(delta_{n}) is not a multiple of 2 pi i")
        return k


def tetration_check(n, depth: int, ctx: PrecisionContext) -> TetrationResult:
    """Iterate ``w -> 2**w`` ``depth`` times from delta_n; report drift and |d/dw 2**w|**depth."""
    if int(depth) != depth or depth < 1:
        raise DomainError(f"depth must be a positive integer, got {depth}")
    with working(ctx):
        d = _delta(n, ctx)
        w = d
        for step in range(int(depth)):
            w = mpmath.exp(w * mp.ln2)
            if not mpmath.isfinite(w.real) or abs(w - d) > abs(d):
                raise ConvergenceError(
                    f"tower iteration escaped from delta_{n} at step {step + 1} (repelling fixed point)",
                    residual=abs(w - d),
                )
        amplification = (mp.ln2 * abs(d)) ** int(depth)
        return TetrationResult(abs(w - d), amplification)


def log2_identity_residual(n, ctx: PrecisionContext) -> mpf:
    """|exp(delta log 2) - delta|, the branch-free form of log2 = log(delta)/delta."""
    with working(ctx):
        d = _delta(n, ctx)
        return abs(mpmath.exp(d * mp.ln2) - d)


def principal_log2_deviation(n, ctx: PrecisionContext) -> mpc:
    """Log(delta)/delta - log 2 with the principal logarithm."""
    with working(ctx):
        d = _delta(n, ctx)
        return mpmath.log(d) / d - mp.ln2
