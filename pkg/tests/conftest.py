import pytest
from hypothesis import HealthCheck, settings

from qlambda.algebra import IntPolynomial, make_context

settings.register_profile("qlambda", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("qlambda")


@pytest.fixture(scope="session")
def golden():
    """lambda = 1 + phi, root of x^2 - 3x + 1; its conjugate 2 - phi lies in (0, 1)."""
    return make_context(IntPolynomial([1, -3, 1]), 2.618)


@pytest.fixture(scope="session")
def c13():
    """lambda = -(3 + sqrt 13)/2."""
    return make_context(IntPolynomial([-1, 3, 1]), -3.3)


@pytest.fixture(scope="session")
def c17():
    """lambda = -(3 + sqrt 17)/2."""
    return make_context(IntPolynomial([-2, 3, 1]), -3.56)


@pytest.fixture(scope="session")
def cubic():
    """Complex lambda with x^3 + x^2 - 1; one real conjugate in (0, 1)."""
    return make_context(IntPolynomial([-1, 0, 1, 1]), complex(-0.877, 0.745))


@pytest.fixture(scope="session")
def quartic():
    return make_context(IntPolynomial([1, -3, 4, -2, 1]), complex(0.5, 1.5388))
