import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "lab",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "lab"))

PROGRAMS = Path(__file__).resolve().parent.parent / "demos" / "programs"


@pytest.fixture
def programs_dir():
    return PROGRAMS
