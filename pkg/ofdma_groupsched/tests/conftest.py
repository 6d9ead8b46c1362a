"""Shared fixtures for the scheduler tests"""

import numpy as np
import pytest

from ofdma_groupsched.config import SimConfig
from ofdma_groupsched.example import WORKED_RATES


@pytest.fixture
def worked_rates():
    return np.array(WORKED_RATES)


@pytest.fixture
def small_config():
    """Fast configuration: 4 users, 32 subcarriers in 8 groups, 20 slots"""
    return SimConfig(users=4, subcarriers=32, group_size=4, alpha=(1, 2, 1, 4), slots=20, snr_db=(10.0,))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
