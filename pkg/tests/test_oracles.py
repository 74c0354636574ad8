import random

import mpmath
import pytest
from mpmath import mp, mpc, mpf

from geowsum import oracles
from geowsum.branch_sums import GeoSeries, delta
from geowsum.errors import DomainError
from geowsum.precision import make_context, working
from geowsum.quadrature import QuadratureSpec, gauss_legendre, integrate, tanh_sinh
from geowsum.zeta import zeta_dirichlet

HALF = "1/2"


def half():
    return mpf(1) / 2


# ---------------------------------------------------------------------------
# quadrature rules

def test_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(8, "tanh_sinh", (0, 1))
    with pytest.raises(DomainError):
        QuadratureSpec(32, "simpson", (0, 1))
    with pytest.raises(DomainError):
        QuadratureSpec(32, "gauss_legendre", (1, 1))
    assert QuadratureSpec(32, "tanh_sinh", (0, 1)).doubled().node_count == 64


def test_gauss_legendre_is_exact_on_polynomials(hp):
    # 20 nodes integrate degree 39 exactly
    value = gauss_legendre(lambda x: x**39 + 3 * x**10, mpf(0), mpf(2), 20)
    assert abs(value - (mpf(2) ** 40 / 40 + 3 * mpf(2) ** 11 / 11)) <= hp.tol * value


def test_tanh_sinh_endpoint_singularities(hp):
    spec = QuadratureSpec(4 * hp.work_dps, "tanh_sinh", (0, 1))
    assert abs(integrate(lambda x: mpmath.log(x), spec) + 1) <= hp.tol
    assert abs(integrate(lambda x: 1 / mpmath.sqrt(x), spec) - 2) <= hp.tol


def test_tanh_sinh_against_mpmath(hp):
    f = lambda x: mpmath.exp(-x) * mpmath.sqrt(x * (1 - x))  # noqa: E731
    assert abs(tanh_sinh(f, mpf(0), mpf(1), 4 * hp.work_dps) - mpmath.quad(f, [0, 1])) <= hp.tol


# ---------------------------------------------------------------------------
# finite sums

def test_partial_sum_half(hp):
    value = oracles.partial_sum_oracle(GeoSeries(1, half()), 60, hp)
    assert abs(value - 2 * (1 - mpf(2) ** -60)) <= hp.tol


def test_partial_sum_ratio_one(hp):
    assert oracles.partial_sum_raw(1, 1, 7, hp) == 7


def test_partial_sum_eighth(hp):
    value = oracles.partial_sum_oracle(GeoSeries(mpf(1) / 8, mpf(1) / 8), 40, hp)
    assert abs(value - mpf(1) / 7) < mpf(8) ** -40


def test_partial_sum_matches_finite_closed_form(hp):
    rng = random.Random(99)
    for _ in range(40):
        a = mpc(rng.uniform(-3, 3), rng.uniform(-3, 3))
        r = mpc(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        N = rng.randint(1, 80)
        closed = a * (1 - r**N) / (1 - r)
        value = oracles.partial_sum_oracle(GeoSeries(a, r), N, hp)
        assert abs(value - closed) <= hp.tol * max(1, abs(closed), abs(a) * abs(r) ** N)


def test_partial_sum_domain(hp):
    with pytest.raises(DomainError):
        oracles.partial_sum_oracle(GeoSeries(1, half()), 0, hp)


def test_terms_for_tail(hp):
    N = oracles.terms_for_tail(1, half(), mpf(10) ** -30, hp)
    assert mpf(2) ** -N * 2 <= mpf(10) ** -30 < mpf(2) ** -(N - 1) * 2
    with pytest.raises(DomainError):
        oracles.terms_for_tail(1, 2, mpf(10) ** -30, hp)


# ---------------------------------------------------------------------------
# hypergeometric series

def test_hyp2f1_log(hp):
    result = oracles.hyp2f1_series(1, 1, 2, half(), 400, hp)
    assert abs(result.value - 2 * mp.ln2) <= 2 * result.last_term


def test_hyp2f1_at_zero(hp):
    assert oracles.hyp2f1_series(mpc(2, 1), 3, 5, 0, 25, hp).value == 1


def test_hyp2f1_pole(hp):
    with pytest.raises(DomainError):
        oracles.hyp2f1_series(1, 1, -2, half(), 10, hp)


def test_hyp2f1_reduction_to_delta_powers(hp):
    d = delta(0, hp).delta
    m, K = half(), 300
    f = oracles.hyp2f1_series(1, d + 1, d + 2, m, K, hp).value
    scaled = mpmath.exp((d + 1) * mpmath.log(m)) / (d + 1) * f
    assert abs(scaled - oracles.delta_power_series(m, 0, K, hp)) <= hp.tol


@pytest.mark.parametrize(
    "params",
    [(1, 1, 2, "0.5"), ("0.5", "1.5", "2.5", "0.3"), (1, "delta", "delta+1", "0.5"), ("2+1j", "1-1j", "3", "-0.4")],
)
def test_hyp2f1_truncation_bound(hp, params):
    d = delta(0, hp).delta
    names = {"delta": d + 1, "delta+1": d + 2}
    a, b, c, x = (names[p] if p in names else mpmath.mpmathify(str(p)) for p in params)
    full = oracles.hyp2f1_series(a, b, c, x, 2000, hp).value
    for K in (10, 40, 90):
        head = oracles.hyp2f1_series(a, b, c, x, K, hp).value
        omitted = oracles.hyp2f1_series(a, b, c, x, K + 1, hp).value - head
        assert abs(full - head) <= 2 * abs(omitted)


# ---------------------------------------------------------------------------
# integral chain

def test_integral_series_vs_quadrature(hp):
    m = half()
    series = oracles.integral_core_series(m, 0, hp)
    quad = oracles.integral_core_quadrature(m, 0, oracles.default_spec(0, m, hp), hp)
    assert abs(series - quad) < mpf(10) ** -30


@pytest.mark.parametrize("n", [1, 3, -4, 40])
def test_integral_series_vs_quadrature_other_branches(hp, n):
    m = half()
    series = oracles.integral_core_series(m, n, hp)
    quad = oracles.integral_core_quadrature(m, n, oracles.default_spec(0, m, hp), hp)
    assert abs(series - quad) < mpf(10) ** -30


def test_integral_small_m(hp):
    m = mpf(10) ** -10
    quad = oracles.integral_core_quadrature(m, 0, oracles.default_spec(0, m, hp), hp)
    # (1 - x**delta)/(1 - x) = 1 + x - x**delta + ...; Re(delta_0) + 1 is about 1.82
    d = delta(0, hp).delta
    leading = m + m**2 / 2 - mpmath.exp((d + 1) * mpmath.log(m)) / (d + 1)
    assert abs(quad - leading) < abs(mpmath.exp((d + 2) * mpmath.log(m)))
    assert abs(quad - oracles.integral_core_series(m, 0, hp)) < mpf(10) ** -30


@pytest.mark.parametrize("n", [10**6, -(10**6)])
def test_integral_large_branch(hp, n):
    m = half()
    quad = oracles.integral_core_quadrature(m, n, oracles.default_spec(0, m, hp), hp)
    assert abs(quad - mp.ln2) < mpf("1e-8")
    assert abs(quad - oracles.integral_core_series(m, n, hp)) < mpf(10) ** -30


def test_integral_interval_check(hp):
    with pytest.raises(DomainError):
        oracles.integral_core_quadrature(half(), 0, oracles.default_spec(0, 1, hp), hp)
    with pytest.raises(DomainError):
        oracles.integral_core_series(mpf(2), 0, hp)


@pytest.mark.parametrize("n", [0, 2, 10**6])
def test_quadrature_doubling_is_stable(hp, n):
    m = half()
    spec = oracles.default_spec(0, m, hp)
    a = oracles.integral_core_quadrature(m, n, spec, hp)
    b = oracles.integral_core_quadrature(m, n, spec.doubled(), hp)
    assert abs(a - b) < mpf(10) ** -(hp.digits // 2)


def test_sub_interval_uses_direct_rule(hp):
    m = half()
    spec = QuadratureSpec(4 * hp.work_dps, "gauss_legendre", (mpf(1) / 8, mpf(1) / 4))
    d = delta(0, hp).delta
    f = lambda x: (mpmath.exp(d * mpmath.log(x)) - 1) / (x - 1)  # noqa: E731
    assert abs(oracles.integral_core_quadrature(m, 0, spec, hp) - mpmath.quad(f, [spec.interval[0], spec.interval[1]])) <= hp.tol


# ---------------------------------------------------------------------------
# logarithm expansion and integrated series

@pytest.mark.parametrize("n", [10**6, -(10**6)])
def test_log_expansion_large_branch(hp, n):
    assert oracles.log_expansion_check(half(), n, 400, hp) < mpf("1e-8")


def test_log_expansion_small_m(hp):
    for n in (0, 1, -5, 10**6):
        assert oracles.log_expansion_check(mpf(10) ** -6, n, 50, hp) < mpf("1e-8")


def test_log_expansion_principal_branch_is_reported(hp):
    residual = oracles.log_expansion_check(half(), 0, 400, hp)
    # the delta sum does not vanish on the principal branch
    assert residual > mpf("1e-3")


def test_integrated_series_left_side(hp):
    result = oracles.integrated_series_check(half(), 0, 200, hp)
    assert abs(result.left - 2 * mp.ln2) < mpf(10) ** -50


def test_integrated_series_recorded(hp):
    principal = oracles.integrated_series_check(half(), 0, 50, hp)
    assert mpmath.isfinite(principal.residual)
    # the right side is a rearrangement whose partial sums drift with K on every branch
    for n in (10**6, -(10**6)):
        a = oracles.integrated_series_check(half(), n, 50, hp).right
        b = oracles.integrated_series_check(half(), n, 60, hp).right
        assert abs(b) > abs(a)


# ---------------------------------------------------------------------------
# Mellin identity

@pytest.mark.slow
@pytest.mark.parametrize("n", [10**6, -(10**6)])
def test_mellin_two(ctx, n):
    residual = oracles.mellin_check(2, n, oracles.mellin_spec(ctx), ctx)
    assert residual < mpf("1e-6")


@pytest.mark.slow
def test_mellin_three(ctx):
    with working(ctx):
        assert abs(2 * zeta_dirichlet(3, ctx) - 2 * mpmath.zeta(3)) <= ctx.tol
    assert oracles.mellin_check(3, 10**6, oracles.mellin_spec(ctx), ctx) < mpf("1e-6")


def test_mellin_principal_branch_residual_is_measurable(ctx40):
    residual = oracles.mellin_check(2, 0, oracles.mellin_spec(ctx40), ctx40)
    assert residual > mpf("1e-3")


def test_mellin_residual_is_the_delta_part(ctx40):
    # with the delta part removed the quadrature matches Gamma(s) zeta(s)
    ctx = ctx40
    with working(ctx):
        d = delta(5, ctx).delta
        s = mpf(2)
        # int u**(s-1) exp(-u delta)/(exp(u) - 1) du = Gamma(s) zeta(s, delta + 1)
        expected = abs(mpmath.gamma(s) * mpmath.zeta(s, d + 1))
    residual = oracles.mellin_check(2, 5, oracles.mellin_spec(ctx), ctx)
    assert abs(residual / expected - 1) < mpf(10) ** -30


def test_mellin_domain(ctx40):
    with pytest.raises(DomainError):
        oracles.mellin_check(1, 10**6, oracles.mellin_spec(ctx40), ctx40)
