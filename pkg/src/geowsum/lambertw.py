"""Lambert W on an arbitrary branch, refined by Halley's method.

Branch cuts follow Corless, Gonnet, Hare, Jeffrey and Knuth (1996): on the
negative real axis left of -1/e the value is taken from the upper half-plane,
so at real ``z < -1/e`` the branches ``n`` and ``-(n+1)`` are conjugates.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp, mpc, mpf

from .errors import ConvergenceError, DomainError
from .precision import PrecisionContext, to_complex, working

MAX_BRANCH = 10**12
MAX_ITERATIONS = 200
STALL_LIMIT = 5
START_DPS = 40

# |z + 1/e| below this switches the n in {0, -1, 1} seeds to the branch-point series
_BRANCH_POINT_RADIUS = 0.5
# |n| from which the asymptotic seed is trusted to many digits
_ASYMPTOTIC_BRANCH = 10**6


@dataclass(frozen=True)
class WValue:
    w: mpc
    residual: mpf
    branch: int


def _check_branch(n) -> int:
    if int(n) != n:
        raise DomainError(f"branch index must be an integer, got {n!r}")
    n = int(n)
    if abs(n) > MAX_BRANCH:
        raise DomainError(f"branch index {n} exceeds the supported magnitude {MAX_BRANCH}")
    return n


def branch_strip(n: int):
    """Closed interval containing Im(W_n(z)) for every z (Corless et al. regions)."""
    pi = mp.pi
    if n == 0:
        return -pi, pi
    if n > 0:
        return (2 * n - 2) * pi, (2 * n + 1) * pi
    return (2 * n - 1) * pi, (2 * n + 2) * pi


def in_branch_strip(w, n: int, slack=None) -> bool:
    lo, hi = branch_strip(n)
    if slack is None:
        slack = mpf(10) ** (-mp.dps // 2) * (1 + abs(w))
    return lo - slack <= w.imag <= hi + slack


def _branch_point_series(z, sign):
    # W ~ -1 + p - p^2/3 + 11 p^3 / 72,  p = sqrt(2 (e z + 1))
    p = sign * mpmath.sqrt(2 * (mp.e * z + 1))
    return -1 + p - p**2 / 3 + 11 * p**3 / 72


def _asymptotic_seed(z, n):
    l1 = mpmath.log(z) + 2j * mp.pi * n
    l2 = mpmath.log(l1)
    return l1 - l2 + l2 / l1


def branch_seed(z, n, ctx: PrecisionContext) -> mpc:
    """Initial guess inside the basin of branch ``n``."""
    n = _check_branch(n)
    with working(ctx):
        z = to_complex(z)
        if z == 0:
            raise DomainError("no seed at z = 0")
        near_bp = abs(z + 1 / mp.e) < _BRANCH_POINT_RADIUS
        if n == 0:
            if near_bp:
                return _branch_point_series(z, 1)
            if abs(z) < 3:
                # Winitzki-type approximation, adequate for moderate |z|
                lz = mpmath.log(1 + z)
                return lz * (1 - mpmath.log(1 + lz) / (2 + lz))
            return _asymptotic_seed(z, 0)
        if near_bp and ((n == -1 and z.imag >= 0) or (n == 1 and z.imag < 0)):
            return _branch_point_series(z, -1)
        return _asymptotic_seed(z, n)


def _halley_step(w, z):
    ew = mpmath.exp(w)
    f = w * ew - z
    wp1 = w + 1
    if wp1 == 0:
        return f, mpc(0)
    return f, f / (ew * wp1 - (w + 2) * f / (2 * wp1))


def _refine(z, seed, n, target_dps, damping=1):
    """Halley iteration with a digit-doubling precision schedule."""
    extra = len(str(abs(n))) + 5
    levels = []
    dps = min(START_DPS, target_dps)
    while dps < target_dps:
        levels.append(dps)
        dps *= 2
    levels.append(target_dps)

    w = mpc(seed)
    iterations = 0
    stalled = 0
    last_step = None
    for level_index, level in enumerate(levels):
        final = level_index == len(levels) - 1
        with mp.workdps(level + extra):
            w = +w
            z_level = +z
            threshold = mpf(10) ** (-(level - 3 if final else level // 3))
            steps_here = 0
            while True:
                f, dw = _halley_step(w, z_level)
                if damping != 1 and iterations < 3:
                    dw *= damping
                w -= dw
                iterations += 1
                steps_here += 1
                size = abs(dw)
                if last_step is not None and size >= last_step and size > threshold * (1 + abs(w)):
                    stalled += 1
                    if stalled >= STALL_LIMIT:
                        raise ConvergenceError(
                            f"Halley iteration for W_{n} stalled after {iterations} steps",
                            residual=abs(f),
                        )
                else:
                    stalled = 0
                last_step = size
                if iterations >= MAX_ITERATIONS:
                    raise ConvergenceError(
                        f"Halley iteration for W_{n} did not converge in {MAX_ITERATIONS} steps",
                        residual=abs(f),
                    )
                min_steps = 2 if (final and abs(n) >= _ASYMPTOTIC_BRANCH) else 1
                if size <= threshold * (1 + abs(w)) and steps_here >= min_steps:
                    break
    return w


def lambert_w(z, n, ctx: PrecisionContext) -> WValue:
    """Solve ``w * exp(w) = z`` on branch ``n``."""
    n = _check_branch(n)
    with working(ctx):
        z = to_complex(z)
        if z == 0:
            if n == 0:
                return WValue(mpc(0), mpf(0), 0)
            raise DomainError(f"W_{n}(0) does not exist; only W_0(0) = 0 is defined")
        tol = ctx.tol
        attempts = [(branch_seed(z, n, ctx), 1), (_asymptotic_seed(z, n), mpf(0.5))]
        last_error = None
        for seed, damping in attempts:
            try:
                w = _refine(z, seed, n, ctx.work_dps, damping)
            except ConvergenceError as exc:
                last_error = exc
                continue
            with mp.workdps(ctx.work_dps + len(str(abs(n))) + 5):
                residual = abs(w * mpmath.exp(w) - z)
            if residual > tol:
                last_error = ConvergenceError(
                    f"W_{n}({z}) residual {mpmath.nstr(residual, 5)} exceeds tolerance",
                    residual=residual,
                )
                continue
            if not in_branch_strip(w, n):
                last_error = ConvergenceError(
                    f"iteration for W_{n} converged outside the branch strip (Im w = {mpmath.nstr(w.imag, 10)})",
                    residual=residual,
                )
                continue
            return WValue(w, residual, n)
        raise last_error
