# Shared fixtures for the test suite
import os
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings

project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from app.algebra.poly import Polynomial, x, y
from app.services.maps import map_service

hypothesis_settings.register_profile(
    "deterministic",
    derandomize=True,
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
hypothesis_settings.load_profile("deterministic")


@pytest.fixture
def X() -> Polynomial:
    return x()


@pytest.fixture
def Y() -> Polynomial:
    return y()


@pytest.fixture
def F():
    """The BF-Pinchuk map."""
    return map_service.get_map("F")


@pytest.fixture
def phi():
    return map_service.get_map("phi")


@pytest.fixture
def psi():
    return map_service.get_map("psi")


@pytest.fixture
def Ftilde():
    return map_service.get_map("Ftilde")


@pytest.fixture
def origin():
    return (Fraction(0), Fraction(0))
