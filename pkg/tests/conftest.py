"""
Shared fixtures: root systems, levels and a small-horizon oracle.
"""
import random

import pytest

from app.models.level_model import Level
from app.repositories.root_system_repository import root_system_repository
from app.services.shapovalov_service import OracleConfig, ShapovalovService


@pytest.fixture(scope="session")
def a1():
    return root_system_repository.find_by_code("A1")


@pytest.fixture(scope="session")
def a2():
    return root_system_repository.find_by_code("A2")


@pytest.fixture(scope="session")
def b2():
    return root_system_repository.find_by_code("B2")


@pytest.fixture(scope="session")
def g2():
    return root_system_repository.find_by_code("G2")


@pytest.fixture(scope="session")
def small_types(a1, a2, b2, g2):
    return [a1, a2, b2, g2]


@pytest.fixture
def generic():
    return Level.generic()


@pytest.fixture
def rng():
    return random.Random(1729)


@pytest.fixture(scope="session")
def oracle():
    return ShapovalovService(OracleConfig(depth_cap=2, height_cap=4, max_workers=1))
