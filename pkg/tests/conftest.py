import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

# JIT warm-up on first kernel use makes wall-clock deadlines meaningless.
settings.register_profile(
    "pkg",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("pkg")

sys.path.insert(0, str(Path(__file__).parent))
