import numpy as np
import pytest

from quenchecho import Chain, IntegratorConfig


@pytest.fixture(scope="session")
def chain50():
    return Chain(50, 1.0)


@pytest.fixture(scope="session")
def chain10():
    return Chain(10, 1.0)


@pytest.fixture(scope="session")
def icfg():
    return IntegratorConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
