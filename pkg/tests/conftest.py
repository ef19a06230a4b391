import mpmath
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def rel_err(value, reference):
    reference = float(reference)
    if reference == 0:
        return abs(value)
    return abs(value - reference) / abs(reference)


@pytest.fixture
def mp200():
    # 200-digit working precision for oracle values, restored afterwards.
    with mpmath.workdps(200):
        yield mpmath.mp
