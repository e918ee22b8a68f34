import numpy as np
import pytest
from hypothesis import HealthCheck, settings

# numerical property tests do real FFT work per example; wall-clock
# deadlines only make them flaky
settings.register_profile(
    "numeric",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    max_examples=50,
)
settings.load_profile("numeric")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
