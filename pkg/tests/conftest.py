from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

from dezacodes.deza import build_family  # noqa: E402
from dezacodes.gf import make_field  # noqa: E402


@pytest.fixture(scope="session")
def families():
    cache = {}

    def get(p: int, m: int = 1):
        if (p, m) not in cache:
            cache[p, m] = build_family(make_field(p, m))
        return cache[p, m]

    return get
