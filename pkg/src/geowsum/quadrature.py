"""Gauss-Legendre and tanh-sinh quadrature at arbitrary precision."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath
from mpmath import mp, mpf

from .errors import DomainError

SCHEMES = ("gauss_legendre", "tanh_sinh")
MIN_NODES = 16


@dataclass(frozen=True)
class QuadratureSpec:
    node_count: int
    scheme: str
    interval: tuple

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise DomainError(f"unknown quadrature scheme {self.scheme!r}; expected one of {SCHEMES}")
        if int(self.node_count) != self.node_count or self.node_count < MIN_NODES:
            raise DomainError(f"node_count must be an integer >= {MIN_NODES}, got {self.node_count}")
        lo, hi = self.interval
        if not mpf(lo) < mpf(hi):
            raise DomainError(f"empty interval ({lo}, {hi})")

    def doubled(self) -> "QuadratureSpec":
        return QuadratureSpec(2 * self.node_count, self.scheme, self.interval)


@lru_cache(maxsize=64)
def _legendre_rule(count: int, dps: int):
    """Nodes and weights on [-1, 1]; Newton iteration on P_count from Chebyshev guesses."""
    with mp.workdps(dps + 10):
        nodes, weights = [], []
        eps = mpf(10) ** (-(dps + 5))
        for i in range(1, count // 2 + 1):
            x = mpmath.cos(mp.pi * (i - mpf(1) / 4) / (count + mpf(1) / 2))
            for _ in range(100):
                p0, p1 = mpf(1), x
                for k in range(2, count + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = count * (x * p1 - p0) / (x * x - 1)
                step = p1 / dp
                x -= step
                if abs(step) < eps:
                    break
            p0, p1 = mpf(1), x
            for k in range(2, count + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = count * (x * p1 - p0) / (x * x - 1)
            w = 2 / ((1 - x * x) * dp * dp)
            nodes += [x, -x]
            weights += [w, w]
        if count % 2:
            p0, p1 = mpf(1), mpf(0)
            for k in range(2, count + 1):
                p0, p1 = p1, (-(k - 1) * p0) / k
            dp = count * (-p0) / mpf(-1)
            nodes.append(mpf(0))
            weights.append(2 / (dp * dp))
        return tuple(nodes), tuple(weights)


def gauss_legendre(f, a, b, count: int):
    nodes, weights = _legendre_rule(int(count), mp.dps)
    half = (b - a) / 2
    mid = (a + b) / 2
    return half * mpmath.fsum(w * f(mid + half * x) for x, w in zip(nodes, weights))


def gauss_legendre_panels(f, edges, count: int):
    return mpmath.fsum(gauss_legendre(f, edges[i], edges[i + 1], count) for i in range(len(edges) - 1))


def _tanh_sinh_extent(dps: int) -> mpf:
    # beyond this |t| the weights fall under 10**-dps
    return mpmath.log(2 * dps * mpmath.log(10) / mp.pi) + 1


def tanh_sinh(f, a, b, count: int):
    """Integrate ``f`` over [a, b]; ``count`` nodes span t in [-T, T].

    The endpoint offsets are formed as ``(b - a) / (exp(2 v) + 1)`` so nodes next
    to a singular endpoint never round onto it.
    """
    extent = _tanh_sinh_extent(mp.dps)
    half_count = max(int(count) // 2, 1)
    h = extent / half_count
    width = b - a
    total = mpf(0)
    pi_half = mp.pi / 2
    for k in range(-half_count, half_count + 1):
        t = k * h
        v = pi_half * mpmath.sinh(t)
        ev = mpmath.exp(-2 * abs(v))
        gap = width * ev / (1 + ev)  # distance to the nearer endpoint
        x = a + gap if v < 0 else b - gap
        if gap == 0:
            continue
        weight = pi_half * mpmath.cosh(t) * 4 * ev / (1 + ev) ** 2 / 2
        total += weight * f(x)
    return total * width * h


def integrate(f, spec: QuadratureSpec):
    lo, hi = (mpf(x) for x in spec.interval)
    if spec.scheme == "gauss_legendre":
        return gauss_legendre(f, lo, hi, spec.node_count)
    return tanh_sinh(f, lo, hi, spec.node_count)
