import mpmath
import pytest

from geowsum.precision import make_context, working


@pytest.fixture(scope="session")
def ctx():
    return make_context(80)


@pytest.fixture(scope="session")
def ctx40():
    return make_context(40)


@pytest.fixture
def hp(ctx):
    with working(ctx):
        yield ctx


def close(a, b, tol):
    return abs(mpmath.mpc(a) - mpmath.mpc(b)) <= tol
