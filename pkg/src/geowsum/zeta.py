"""Zeta, eta and gamma evaluations tied to the tower constant delta_n.

``zeta_dirichlet`` sums the Dirichlet series directly when the tail bound
allows it and otherwise closes the sum with an Euler-Maclaurin tail; values
left of the critical strip come from the functional equation.  The gamma
function uses argument-shifted Stirling asymptotics.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import mpmath
from mpmath import mp, mpc, mpf

from .branch_sums import delta, geo_sum_branch, GeoSeries, w_log2
from .errors import DomainError
from .precision import PrecisionContext, to_complex, working

DIRICHLET_MARGIN = mpf("0.1")
# Direct summation is used while the integral-test truncation stays below this.
DIRECT_SUM_CAP = 5000


@dataclass(frozen=True)
class EtaFactor:
    exact: mpc
    classic: mpc
    branch: int


class HarmonicSum(NamedTuple):
    partial: mpc
    companion: mpc


def _is_integer(z) -> bool:
    return z.imag == 0 and z.real == mpmath.floor(z.real)


@lru_cache(maxsize=None)
def _bernoulli(k: int):
    b = mpmath.bernfrac(k)
    return int(b[0]), int(b[1])


def _bernoulli_mpf(k: int) -> mpf:
    p, q = _bernoulli(k)
    return mpf(p) / q


# ---------------------------------------------------------------------------
# zeta on Re s > 1

def _tail_terms_needed(sigma, digits):
    """Smallest N with N**(1 - sigma) / (sigma - 1) <= 10**-(digits + 5), or None."""
    target = -(digits + 5) * mpmath.log(10)
    # log bound(N) = (1 - sigma) log N - log(sigma - 1)
    log_n = (target + mpmath.log(sigma - 1)) / (1 - sigma)
    if log_n < 0:
        return 1
    if log_n > mpmath.log(DIRECT_SUM_CAP):
        return None
    return int(mpmath.ceil(mpmath.exp(log_n))) + 1


def _euler_maclaurin(s, digits):
    """sum_{k>=1} k**-s for Re s > 1 via Euler-Maclaurin at cut-off N."""
    eps = mpf(10) ** (-(digits + 5))
    n_cut = max(10, int(digits * 0.6 + abs(s.imag) / 3) + 10)
    head = mpmath.fsum(mpf(k) ** (-s) for k in range(1, n_cut))
    big_n = mpf(n_cut)
    total = head + big_n ** (1 - s) / (s - 1) + big_n ** (-s) / 2
    # B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N**(-s-2j+1)
    rising = s
    power = big_n ** (-s - 1)
    factorial = mpf(2)
    for j in range(1, 4 * digits):
        term = _bernoulli_mpf(2 * j) / factorial * rising * power
        total += term
        if abs(term) < eps * abs(total):
            return total
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        power /= big_n**2
        factorial *= (2 * j + 1) * (2 * j + 2)
    raise DomainError(f"Euler-Maclaurin tail did not settle for s = {s}")


def zeta_dirichlet(s, ctx: PrecisionContext) -> mpc:
    """zeta(s) for Re s > 1.1."""
    with working(ctx):
        s = to_complex(s)
        sigma = s.real
        if sigma <= 1 + DIRICHLET_MARGIN:
            raise DomainError(
                f"Dirichlet series needs Re(s) > 1.1, got Re(s) = {mpmath.nstr(sigma, 10)}; "
                "use zeta_functional for Re(s) < 0"
            )
        n_terms = _tail_terms_needed(sigma, ctx.work_dps)
        if n_terms is None:
            return _euler_maclaurin(s, ctx.work_dps)
        return mpmath.fsum(mpf(k) ** (-s) for k in range(n_terms, 0, -1))


# ---------------------------------------------------------------------------
# gamma

def _log_gamma_stirling(z, digits):
    eps = mpf(10) ** (-(digits + 5))
    total = (z - mpf(1) / 2) * mpmath.log(z) - z + mpmath.log(2 * mp.pi) / 2
    z2 = z * z
    zpow = z
    for k in range(1, 10 * digits):
        term = _bernoulli_mpf(2 * k) / (2 * k * (2 * k - 1) * zpow)
        total += term
        if abs(term) < eps:
            return total
        zpow *= z2
    raise DomainError(f"Stirling series did not converge at z = {z}")


def gamma_hp(s, ctx: PrecisionContext, shift_radius=None) -> mpc:
    """Gamma(s); ``shift_radius`` overrides the Stirling shift threshold."""
    with working(ctx):
        s = to_complex(s)
        if _is_integer(s):
            k = int(s.real)
            if k <= 0:
                raise DomainError(f"Gamma has a pole at s = {k}")
            return mpc(mpmath.factorial(k - 1))
        if s.real < mpf(1) / 2:
            # reflection: Gamma(s) Gamma(1-s) = pi / sin(pi s)
            return mp.pi / (mpmath.sinpi(s) * gamma_hp(1 - s, ctx, shift_radius))
        radius = shift_radius if shift_radius is not None else 0.4 * ctx.work_dps + 5
        digits = ctx.work_dps + 10
        with mp.workdps(digits):
            z = +s
            product = mpc(1)
            while abs(z) < radius:
                product *= z
                z += 1
            return +(mpmath.exp(_log_gamma_stirling(z, digits)) / product)


# ---------------------------------------------------------------------------
# functional equation

def zeta_functional(s, ctx: PrecisionContext) -> mpc:
    """zeta(s) for Re s < 0 via 2**s pi**(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)."""
    with working(ctx):
        s = to_complex(s)
        if s.real >= 0:
            raise DomainError("zeta_functional covers Re(s) < 0 only")
        if _is_integer(s) and int(s.real) % 2 == 0:
            return mpc(0)
        with working(ctx, extra_digits=10):
            value = (
                mpmath.exp(s * mp.ln2 + (s - 1) * mpmath.log(mp.pi))
                * mpmath.sinpi(s / 2)
                * gamma_hp(1 - s, ctx)
                * zeta_dirichlet(1 - s, ctx)
            )
        return +value


def zeta_ratio_root(s, ctx: PrecisionContext) -> mpc:
    """Principal s-th root of zeta(-s)/zeta(s)."""
    with working(ctx):
        s = to_complex(s)
        with working(ctx, extra_digits=10):
            ratio = zeta_functional(-s, ctx) / zeta_dirichlet(s, ctx)
            root = mpmath.exp(mpmath.log(ratio) / s)
        return +root


def zeta_ratio(s, ctx: PrecisionContext) -> mpc:
    with working(ctx):
        s = to_complex(s)
        return zeta_functional(-s, ctx) / zeta_dirichlet(s, ctx)


# ---------------------------------------------------------------------------
# eta and Euler product

def _pow2(x):
    return mpmath.exp(x * mp.ln2)


def eta_factor(s, n, ctx: PrecisionContext) -> EtaFactor:
    """Exact eta/zeta factor on branch n next to the classical 1 - 2**(1-s)."""
    with working(ctx):
        s = to_complex(s)
        if s.real <= 0:
            raise DomainError("eta_factor needs Re(s) > 0")
        d = delta(n, ctx).delta
        two_ds = _pow2(d * s)
        denominator = _pow2(s) * (two_ds - 1)
        if abs(two_ds - 1) <= ctx.tol:
            raise DomainError(f"degenerate point: 2**(delta s) = 1 at s = {s}, n = {n}")
        exact = (_pow2(s * (d + 1)) - 2 * two_ds + 1) / denominator
        rearranged = (1 - _pow2(1 - s) + _pow2(-s * (d + 1))) / (1 - _pow2(-d * s))
        if abs(exact - rearranged) > ctx.tol * max(1, abs(exact)):
            raise DomainError(f"eta factor forms disagree at s = {s}, n = {n}")
        return EtaFactor(exact, 1 - _pow2(1 - s), int(n))


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    witnesses = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in witnesses:
        if p % q == 0:
            return p == q
    # deterministic Miller-Rabin for p < 3.3e24
    d, r = p - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in witnesses:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(r - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


def euler_error_term(p: int, s, n, ctx: PrecisionContext) -> mpc:
    """Delta(p; s) = -p**(s(1-delta)) / (p**s - 1)."""
    if int(p) != p or not is_prime(int(p)):
        raise DomainError(f"{p} is not a prime")
    with working(ctx):
        s = to_complex(s)
        log_p = mpmath.log(int(p))
        ps = mpmath.exp(s * log_p)
        if abs(ps - 1) <= ctx.tol:
            raise DomainError(f"p**s = 1 at p = {p}, s = {s}")
        d = delta(n, ctx).delta
        return -mpmath.exp(s * (1 - d) * log_p) / (ps - 1)


def euler_factor_branch(p: int, s, n, ctx: PrecisionContext) -> mpc:
    """Branch sum of 1 + p**-s + p**-2s + ...  (the Euler factor on branch n)."""
    with working(ctx):
        s = to_complex(s)
        return geo_sum_branch(GeoSeries(1, mpmath.exp(-s * mpmath.log(int(p)))), n, ctx).value


# ---------------------------------------------------------------------------
# harmonic series and prime product

def harmonic_branch(n, ctx: PrecisionContext) -> mpc:
    """Branch value -2 (log 2 + W_n(-log 2)) of the harmonic series."""
    with working(ctx):
        return -2 * (mp.ln2 + w_log2(n, ctx))


def harmonic_reciprocal_sum(n, K: int, ctx: PrecisionContext) -> HarmonicSum:
    """K-term partial sum of -log2 / (W_n + k log 2) plus the companion 2 + 2 W_n / log 2."""
    if int(K) != K or K < 1:
        raise DomainError(f"K must be a positive integer, got {K}")
    with working(ctx):
        w = w_log2(n, ctx)
        terms = []
        for k in range(int(K)):
            denominator = w + k * mp.ln2
            if abs(denominator) <= ctx.tol:
                raise DomainError(f"degenerate point: delta_{n} + {k} vanishes")
            terms.append(-mp.ln2 / denominator)
        return HarmonicSum(mpmath.fsum(terms), 2 + 2 * w / mp.ln2)


def prime_product_rhs(n, ctx: PrecisionContext) -> mpc:
    """-2 pi**2 / (log 2 + W_n(-log 2)), using the regularized constant 4 pi**2."""
    with working(ctx):
        return -2 * mp.pi**2 / (mp.ln2 + w_log2(n, ctx))


def mellin_delta_factor(u, n, ctx: PrecisionContext) -> mpc:
    """1 - exp(-u delta_n), the branch factor in the Mellin integrand."""
    with working(ctx):
        d = delta(n, ctx).delta
        return 1 - mpmath.exp(-to_complex(u) * d)
