import pytest

from indmom import JacobiCoefficients, TruncationPolicy


@pytest.fixture(scope="session")
def src():
    return JacobiCoefficients.power_law(2.0)


@pytest.fixture(scope="session")
def pol():
    return TruncationPolicy()
