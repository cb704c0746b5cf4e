import os

import pytest
from hypothesis import HealthCheck, settings

import certpoly.domain as domain

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("HYPOTHESIS_EXAMPLES", "60")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _debug_checks():
    # internal consistency checks stay on for the whole suite
    old = domain.DEBUG
    domain.DEBUG = True
    yield
    domain.DEBUG = old
