"""
Shared fixtures: small rings built once per session under test-sized caps
"""

import pytest

from algebra.ringkit import build_ring
from config.config import TestingConfig
from config.dynamic_config import configure

TEST_OVERRIDES = {
    'ring_size_cap': TestingConfig.RING_SIZE_CAP,
    'group_size_cap': TestingConfig.GROUP_SIZE_CAP,
    'basis_size_cap': TestingConfig.BASIS_SIZE_CAP,
    'bar_samples': TestingConfig.BAR_SAMPLES,
    'database_path': '',
}

_rings = {}


@pytest.fixture(autouse=True)
def testing_config():
    return configure(TEST_OVERRIDES)


@pytest.fixture(scope='session')
def ring():
    """Factory returning one shared FiniteRing per spec"""
    def get(spec: str):
        if spec not in _rings:
            configure(TEST_OVERRIDES)
            _rings[spec] = build_ring(spec)
        return _rings[spec]
    return get


@pytest.fixture(scope='session')
def gf2(ring):
    return ring('GF(2)')


@pytest.fixture(scope='session')
def gf3(ring):
    return ring('GF(3)')


@pytest.fixture(scope='session')
def gf4(ring):
    return ring('GF(4)')


@pytest.fixture(scope='session')
def gf5(ring):
    return ring('GF(5)')


@pytest.fixture(scope='session')
def gf7(ring):
    return ring('GF(7)')


@pytest.fixture(scope='session')
def z4(ring):
    return ring('Z/4')


@pytest.fixture(scope='session')
def z8(ring):
    return ring('Z/8')
