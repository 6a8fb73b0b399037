import pytest

from liebeq import Params, QuadratureSpec


@pytest.fixture
def p_half():
    return Params(1, 0.5)


@pytest.fixture
def quad():
    return QuadratureSpec()
