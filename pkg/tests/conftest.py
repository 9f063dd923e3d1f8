import numpy as np
import pytest

from tranchelab import lifting


@pytest.fixture(scope="session")
def model():
    """Shared depth model; the table build is the slow part, so every
    test that needs chart data reuses one instance."""
    return lifting.default_model()


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)
