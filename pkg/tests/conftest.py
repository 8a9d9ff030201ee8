"""Shared fixtures."""
import numpy as np
import pytest

from qvis.schemas.optimizer import OptimizerConfig
from qvis.services import states


@pytest.fixture
def bell_state():
    return states.from_amplitudes(np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0))


@pytest.fixture
def product_state():
    return states.from_amplitudes([1.0, 0.0, 0.0, 0.0])


@pytest.fixture
def haar_states():
    return states.sample_haar(seed=7, count=25)


@pytest.fixture
def light_cfg():
    """Few restarts, for unit tests on small problems."""
    return OptimizerConfig(restarts=3, max_iterations=2000, polish_rounds=2, seed=11)
