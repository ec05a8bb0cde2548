from __future__ import annotations

import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from orbitspace import GroupRep, InvariantBasis, Polynomial, Session, discover_invariants
from orbitspace.catalog import catalog_names

settings.register_profile('default', derandomize=True, max_examples=50, deadline=None)
settings.register_profile(
    'ci', max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get('HYPOTHESIS_PROFILE', 'default'))

ROTATION = [[0, -1], [1, 0]]
S1_GENERATOR = [
    [0, 1, 0, 0],
    [-1, 0, 0, 0],
    [0, 0, 0, 1],
    [0, 0, -1, 0],
]
S1_NAMES = ['q1', 'p1', 'q2', 'p2']
S1_GENERATORS = [
    '1/2 * q1^2 + 1/2 * p1^2',
    '1/2 * q2^2 + 1/2 * p2^2',
    'q1*q2 + p1*p2',
    'q1*p2 - p1*q2',
]


@pytest.fixture(scope='session')
def z2() -> GroupRep:
    return GroupRep.close([[[-1]]])


@pytest.fixture(scope='session')
def so2() -> GroupRep:
    return GroupRep(2, torus_generators=[ROTATION])


@pytest.fixture(scope='session')
def s1() -> GroupRep:
    return GroupRep(4, torus_generators=[S1_GENERATOR])


@pytest.fixture(scope='session')
def d3() -> GroupRep:
    return GroupRep.close(
        [[['-1/2', '-3/2'], ['1/2', '-1/2']], [[1, 0], [0, -1]]],
        metric=[[1, 0], [0, 3]],
    )


@pytest.fixture(scope='session')
def z2_basis(z2: GroupRep) -> InvariantBasis:
    return discover_invariants(z2, 4)


@pytest.fixture(scope='session')
def so2_basis(so2: GroupRep) -> InvariantBasis:
    return discover_invariants(so2, 4)


@pytest.fixture(scope='session')
def s1_basis(s1: GroupRep) -> InvariantBasis:
    generators = [Polynomial.parse(text, S1_NAMES) for text in S1_GENERATORS]
    return InvariantBasis(generators, group=s1)


@pytest.fixture(scope='session')
def sessions() -> dict:
    """One session per catalog entry, shared so cached artifacts are computed once."""
    return {name: Session(name, seed=0) for name in catalog_names()}


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
