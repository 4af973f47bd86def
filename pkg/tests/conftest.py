import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from sendov.instance import build_instance

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def roots_of_unity_zeros(n=9):
    return [np.exp(2j * np.pi * k / n) for k in range(1, n)]


@pytest.fixture(scope="session")
def rou():
    """a = 1 with the other zeros at the remaining 9th roots of unity: p = z^9 - 1."""
    return build_instance(1.0, roots_of_unity_zeros())


@pytest.fixture(scope="session")
def golden():
    """a = 0.5 with eight zeros at -0.5: p' = 9 (z + 0.5)^7 (z - 7/18)."""
    return build_instance(0.5, [-0.5] * 8)
