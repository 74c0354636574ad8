import mpmath
import pytest
from mpmath import mp, mpc, mpf

from geowsum.errors import DomainError
from geowsum.lambertw import MAX_BRANCH, branch_seed, branch_strip, in_branch_strip, lambert_w
from geowsum.precision import make_context, working

BRANCHES = [0, 1, -1, 2, -2, 10, -10, 1000, -1000, 10**6, -(10**6), 10**10, -(10**10)]

# W_0(-log 2), from mpmath.lambertw at 70 digits
W0_REF = (
    "-0.571623609126653510236963835575938105166620142492669902577989",
    "1.08646115736547042446528302545275216254192668431621345053229",
)


def test_w_of_e(ctx):
    with working(ctx):
        assert abs(lambert_w(mp.e, 0, ctx).w - 1) <= ctx.tol


def test_w_of_zero(ctx):
    assert lambert_w(0, 0, ctx).w == 0
    with pytest.raises(DomainError, match="W_1"):
        lambert_w(0, 1, ctx)


def test_principal_value(ctx):
    with working(ctx):
        w = lambert_w(-mp.ln2, 0, ctx).w
        assert abs(w - mpc(*W0_REF)) < mpf(10) ** -58


@pytest.mark.parametrize("n", BRANCHES)
def test_residual_and_strip(ctx, n):
    with working(ctx):
        z = -mp.ln2
        value = lambert_w(z, n, ctx)
        assert value.branch == n
        assert value.residual <= ctx.tol
        with mp.workdps(ctx.work_dps + 15):
            assert abs(value.w * mpmath.exp(value.w) - z) <= ctx.tol
        assert in_branch_strip(value.w, n)


@pytest.mark.parametrize("n", [0, 1, 2, 10, 1000, 10**6, 10**10])
def test_conjugate_symmetry(ctx, n):
    with working(ctx):
        a = lambert_w(-mp.ln2, n, ctx).w
        b = lambert_w(-mp.ln2, -(n + 1), ctx).w
        assert abs(a - mpmath.conj(b)) <= ctx.tol * max(1, abs(a))


def test_against_mpmath_oracle(ctx40):
    ctx = ctx40
    with working(ctx):
        for z in (mpc(-mp.ln2), mpc(3, 4), mpc(-0.2, 0.01), mpc(100, -50)):
            for n in (-3, -1, 0, 1, 5, 1000):
                ours = lambert_w(z, n, ctx).w
                ref = mpmath.lambertw(z, n)
                assert abs(ours - ref) <= mpf(10) ** -35 * max(1, abs(ref))


def test_near_branch_point(ctx):
    with working(ctx):
        z = -1 / mp.e + mpf(10) ** -30
        w = lambert_w(z, 0, ctx)
        assert w.residual <= ctx.tol
        assert abs(w.w + 1) < mpf(10) ** -14


def test_imaginary_part_grows(ctx40):
    with working(ctx40):
        values = [abs(lambert_w(-mp.ln2, n, ctx40).w.imag) for n in (1, 2, 5, 10, 100, 10**4, 10**8)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_seed_tracks_branch(ctx):
    with working(ctx):
        seed = branch_seed(-mp.ln2, 1000, ctx)
        assert abs(seed.imag - 2 * mp.pi * 1000) < 20
        seed = branch_seed(mp.e, 0, ctx)
        assert abs(seed - 1) < mpf("0.5")


def test_strips_tile_the_plane():
    with mp.workdps(30):
        assert branch_strip(0) == (-mp.pi, mp.pi)
        lo, hi = branch_strip(3)
        assert lo == 4 * mp.pi and hi == 7 * mp.pi
        lo, hi = branch_strip(-3)
        assert lo == -7 * mp.pi and hi == -4 * mp.pi


def test_branch_bounds(ctx):
    with pytest.raises(DomainError):
        lambert_w(1, MAX_BRANCH + 1, ctx)
    with pytest.raises(DomainError):
        lambert_w(1, 1.5, ctx)


def test_deterministic(ctx):
    with working(ctx):
        a = lambert_w(-mp.ln2, 7, ctx).w
        b = lambert_w(-mp.ln2, 7, ctx).w
    assert a == b
