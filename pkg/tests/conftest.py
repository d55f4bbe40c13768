import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from helpers import fixture_map  # noqa: E402

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_MAP_CACHE = {}
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def fmap():
    """fmap("ex51") -> the LorenzMap of a bundled fixture (cached for the session)."""

    def get(fid):
        if fid not in _MAP_CACHE:
            _MAP_CACHE[fid] = fixture_map(fid)
        return _MAP_CACHE[fid]

    return get


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
