"""Independent checks of the branch-sum identities.

Nothing here calls the closed forms in :mod:`geowsum.branch_sums`; only
``delta_n`` itself is shared.  Finite sums are accumulated term by term in
ascending order, integrals go through :mod:`geowsum.quadrature`, and the
constants have integer-arithmetic oracles of their own.
"""

from __future__ import annotations

from typing import NamedTuple

import mpmath
from mpmath import mp, mpc, mpf

from .branch_sums import GeoSeries, delta
from .errors import DomainError
from .precision import PrecisionContext, to_complex, to_real, working
from .quadrature import QuadratureSpec, gauss_legendre_panels, integrate, tanh_sinh
from .zeta import gamma_hp, zeta_dirichlet

# branches with |Im delta| above this integrate the delta part along a rotated ray
_ROTATE_ABOVE = 5
# Gauss-Legendre panel width, in units of the inverse decay rate
_PANEL_WIDTH = 4


class Hyp2F1(NamedTuple):
    value: mpc
    last_term: mpf


class SeriesComparison(NamedTuple):
    residual: mpf
    left: mpc
    right: mpc


def _real_power(x, d):
    # x in (0, 1): exp(d log x) with the real logarithm
    return mpmath.exp(d * mpmath.log(x))


# ---------------------------------------------------------------------------
# finite sums

def partial_sum_oracle(series: GeoSeries, N: int, ctx: PrecisionContext) -> mpc:
    """sum_{k<N} a r**k, accumulated term by term."""
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N}")
    with working(ctx):
        a, r = to_complex(series.a), to_complex(series.r)
        total, term = mpc(0), a
        for _ in range(int(N)):
            total += term
            term *= r
        return total


def partial_sum_raw(a, r, N: int, ctx: PrecisionContext) -> mpc:
    """Same as :func:`partial_sum_oracle` but allows r = 1."""
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N}")
    with working(ctx):
        a, r = to_complex(a), to_complex(r)
        total, term = mpc(0), a
        for _ in range(int(N)):
            total += term
            term *= r
        return total


def terms_for_tail(a, r, tol, ctx: PrecisionContext) -> int:
    """Smallest N with |a| |r|**N / (1 - |r|) <= tol, for |r| < 1."""
    with working(ctx):
        a, r = to_complex(a), to_complex(r)
        mod = abs(r)
        if mod >= 1:
            raise DomainError("tail bound needs |r| < 1")
        if a == 0 or mod == 0:
            return 1
        n = mpmath.log(mpf(tol) * (1 - mod) / abs(a)) / mpmath.log(mod)
        return max(1, int(mpmath.ceil(n)))


def hyp2f1_series(a, b, c, x, K: int, ctx: PrecisionContext) -> Hyp2F1:
    """K-term Gauss series with the magnitude of the last included term."""
    if int(K) != K or K < 1:
        raise DomainError(f"K must be a positive integer, got {K}")
    with working(ctx):
        a, b, c, x = (to_complex(v) for v in (a, b, c, x))
        if c.imag == 0 and c.real <= 0 and c.real == mpmath.floor(c.real):
            raise DomainError(f"c = {c} is a pole of the hypergeometric series")
        term = mpc(1)
        total = mpc(0)
        for k in range(int(K)):
            total += term
            last = abs(term)
            term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * x
        return Hyp2F1(total, last)


def delta_power_series(m, n, K: int, ctx: PrecisionContext) -> mpc:
    """sum_{k<K} m**(delta+1+k) / (delta+1+k)."""
    with working(ctx):
        m = to_real(m)
        d = delta(n, ctx).delta
        power = _real_power(m, d + 1)
        total = mpc(0)
        for k in range(int(K)):
            total += power / (d + 1 + k)
            power *= m
        return total


def _terms_for_ratio(m, ctx):
    # |m|**K below the working precision
    return int(ctx.work_dps * mpmath.log(10) / -mpmath.log(abs(m))) + 10


def integral_core_series(m, n, ctx: PrecisionContext, K=None) -> mpc:
    """-(m**(delta+1)/(delta+1)) 2F1(1, delta+1; delta+2; m) - log(1 - m)."""
    with working(ctx):
        m = to_real(m)
        if not 0 < m < 1:
            raise DomainError("need 0 < m < 1")
        d = delta(n, ctx).delta
        K = K or _terms_for_ratio(m, ctx)
        f = hyp2f1_series(1, d + 1, d + 2, m, K, ctx).value
        return -_real_power(m, d + 1) / (d + 1) * f - mpmath.log(1 - m)


# ---------------------------------------------------------------------------
# quadrature oracles

def default_spec(lo, hi, ctx: PrecisionContext, scheme: str = "tanh_sinh") -> QuadratureSpec:
    count = 4 * ctx.work_dps if scheme == "tanh_sinh" else max(16, ctx.work_dps)
    return QuadratureSpec(count, scheme, (lo, hi))


def _ray_integral(g, rate, ctx, count):
    """int_0^inf g(tau) dtau where g decays like exp(-Re(rate) tau)."""
    decay = mpmath.re(rate)
    if decay <= 0:
        raise DomainError("ray integrand does not decay")
    scale = _PANEL_WIDTH / abs(rate)
    reach = (ctx.work_dps + 10) * mpmath.log(10) / (decay * scale)
    edges = [scale * k for k in range(int(mpmath.ceil(reach)) + 1)]
    return gauss_legendre_panels(g, edges, count)


def integral_core_quadrature(m, n, spec: QuadratureSpec, ctx: PrecisionContext) -> mpc:
    """Numerical int (x**delta - 1)/(x - 1) over ``spec.interval`` inside (0, m).

    On the full interval (0, m) a strongly oscillating branch integrates the
    delta part along a rotated ray after ``x = m exp(-t)``; the rest of the
    integrand is elementary on every path.
    """
    with working(ctx):
        m = to_real(m)
        if not 0 < m < 1:
            raise DomainError("need 0 < m < 1")
        lo, hi = (to_real(v) for v in spec.interval)
        if lo < 0 or hi > m:
            raise DomainError(f"quadrature interval ({lo}, {hi}) lies outside (0, {m})")
        d = delta(n, ctx).delta
        if abs(d.imag) <= _ROTATE_ABOVE or lo != 0 or hi != m:
            return integrate(lambda x: (_real_power(x, d) - 1) / (x - 1), spec)
        # int_0^m x**d/(x-1) dx = m**(d+1) int_0^inf exp(-(d+1) t) / (m exp(-t) - 1) dt
        rotation = mpmath.expjpi(-mpmath.arg(d + 1) / (2 * mp.pi))
        rate = (d + 1) * rotation

        def g(tau):
            t = tau * rotation
            return mpmath.exp(-(d + 1) * t) / (m * mpmath.exp(-t) - 1)

        count = max(16, spec.node_count // 8)
        ray = _ray_integral(g, rate, ctx, count) * rotation
        return _real_power(m, d + 1) * ray - mpmath.log(1 - m)


def log_expansion_check(m, n, K: int, ctx: PrecisionContext) -> mpf:
    """|Log(m - 1) - (pi i - sum m**(delta+1+k)/(delta+1+k) - sum m**j / j)| with K terms each."""
    with working(ctx):
        m = to_real(m)
        if not 0 < abs(m) < 1:
            raise DomainError("need 0 < |m| < 1")
        lhs = mpc(mpmath.log(abs(m - 1)), mp.pi)
        d = delta(n, ctx).delta
        power = mpmath.exp((d + 1) * mpmath.log(mpc(m)))
        delta_sum = mpc(0)
        for k in range(int(K)):
            delta_sum += power / (d + 1 + k)
            power *= m
        plain = mpmath.fsum(m**j / j for j in range(1, int(K) + 1))
        return abs(lhs - (1j * mp.pi - delta_sum - plain))


def integrated_series_check(m, n, K: int, ctx: PrecisionContext) -> SeriesComparison:
    """Compare 1 + m/2 + m**2/3 + ... with m**(delta-1)/delta + m**(delta-2)/(delta-1) + ..."""
    with working(ctx):
        m = to_real(m)
        if not 0 < m < 1:
            raise DomainError("need 0 < m < 1")
        d = delta(n, ctx).delta
        left = mpc(mpmath.fsum(m**k / (k + 1) for k in range(int(K))))
        right = mpc(0)
        power = _real_power(m, d - 1)
        for k in range(1, int(K) + 1):
            denominator = d - k + 1
            if abs(denominator) > ctx.tol:
                right += power / denominator
            power /= m
        return SeriesComparison(abs(left - right), left, right)


def mellin_check(s, n, spec: QuadratureSpec, ctx: PrecisionContext) -> mpf:
    """|int u**(s-1) (1 - exp(-u delta)) / (exp(u) - 1) du - Gamma(s) zeta(s)|.

    ``spec.interval`` is the finite range (0, U] of the plain part; beyond U the
    integrand is bounded analytically.  The delta part runs along a ray rotated
    by -arg(delta)/2, where it decays without oscillating fast.
    """
    with working(ctx):
        s = to_complex(s)
        if s.real <= mpf("1.1"):
            raise DomainError("mellin_check needs Re(s) > 1.1")
        d = delta(n, ctx).delta
        if d.real <= 0:
            raise DomainError(f"Re(delta_{n}) <= 0: the delta term does not decay")
        lo, hi = (to_real(v) for v in spec.interval)
        if lo != 0:
            raise DomainError("the Mellin integral starts at 0")

        def plain(u):
            return mpmath.exp((s - 1) * mpmath.log(u)) / mpmath.expm1(u)

        # head (0, 1] by tanh-sinh for the u**(s-2) endpoint, unit panels on [1, U]
        cut = min(mpf(1), hi)
        smooth = tanh_sinh(plain, mpf(0), cut, spec.node_count)
        if hi > cut:
            edges = [cut + _PANEL_WIDTH * k for k in range(int(mpmath.ceil((hi - cut) / _PANEL_WIDTH)))] + [hi]
            smooth += gauss_legendre_panels(plain, edges, max(16, spec.node_count // 8))
        # int_U^inf u**(sigma-1) e**-u / (1 - e**-U) du <= bound
        sigma = s.real
        tail_bound = mpmath.gammainc(sigma, hi) / (1 - mpmath.exp(-hi))

        rotation = mpmath.expjpi(-mpmath.arg(d) / (2 * mp.pi))
        scale = 1 / abs(d)

        def shifted(v):
            u = v * scale * rotation
            return mpmath.exp((s - 1) * mpmath.log(u) - u * d) / mpmath.expm1(u)

        rate = d * rotation * scale
        head = tanh_sinh(shifted, mpf(0), mpf(1), spec.node_count)
        reach = (ctx.work_dps + 10) * mpmath.log(10) / mpmath.re(rate)
        edges = [mpf(1) + _PANEL_WIDTH * k for k in range(int(mpmath.ceil(reach / _PANEL_WIDTH)) + 1)]
        body = gauss_legendre_panels(shifted, edges, max(16, spec.node_count // 8))
        delta_part = (head + body) * scale * rotation

        quadrature = smooth - delta_part
        reference = gamma_hp(s, ctx) * zeta_dirichlet(s, ctx)
        if tail_bound > ctx.tol:
            # the truncation is part of the reported residual
            return abs(quadrature - reference) + tail_bound
        return abs(quadrature - reference)


def mellin_spec(ctx: PrecisionContext, node_count=None) -> QuadratureSpec:
    upper = int(ctx.work_dps * mpmath.log(10)) + 40
    return QuadratureSpec(node_count or 4 * ctx.work_dps, "tanh_sinh", (0, upper))


# ---------------------------------------------------------------------------
# constants from integer arithmetic

def _arctan_inverse(x: int, scale: int) -> int:
    # arctan(1/x) * scale
    total = term = scale // x
    x2 = x * x
    k = 1
    while term:
        term //= x2
        k += 2
        total += term // k if k % 4 == 1 else -(term // k)
    return total


def oracle_pi(digits: int) -> mpf:
    """Machin: pi = 16 arctan(1/5) - 4 arctan(1/239), in scaled integers."""
    guard = 10
    scale = 10 ** (digits + guard)
    value = 16 * _arctan_inverse(5, scale) - 4 * _arctan_inverse(239, scale)
    with mp.workdps(digits + guard):
        return mpf(value) / scale


def oracle_log2(digits: int) -> mpf:
    """log 2 = sum_{k>=1} 1 / (k 2**k), in scaled integers."""
    guard = 10
    scale = 10 ** (digits + guard)
    total, k, power = 0, 1, 2
    while True:
        term = scale // (k * power)
        if term == 0:
            break
        total += term
        k += 1
        power *= 2
    with mp.workdps(digits + guard):
        return mpf(total) / scale


def oracle_e(digits: int) -> mpf:
    """e = sum 1/k!, in scaled integers."""
    guard = 10
    scale = 10 ** (digits + guard)
    total, term, k = 0, scale, 0
    while term:
        total += term
        k += 1
        term //= k
    with mp.workdps(digits + guard):
        return mpf(total) / scale
