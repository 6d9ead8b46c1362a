"""OFDMA grouped-subcarrier scheduling package"""
__version__ = "1.0.0"
__author__ = "ofdma_groupsched developers"

from ofdma_groupsched.allocator import (  # noqa: E402
    Allocation,
    FairnessWeights,
    allocate_variance,
    power_allocate,
)
from ofdma_groupsched.baselines import (  # noqa: E402
    allocate_best_gain,
    allocate_decentralized,
    allocate_superiority,
)
from ofdma_groupsched.config import SimConfig, build_config  # noqa: E402
from ofdma_groupsched.exceptions import (  # noqa: E402
    ConfigError,
    DomainError,
    GroupschedError,
    OracleSizeError,
)
from ofdma_groupsched.metrics import AggregateMetrics, jain_index  # noqa: E402
from ofdma_groupsched.oracle import oracle_exhaustive  # noqa: E402
from ofdma_groupsched.sim import run_experiment, run_slot, sweep  # noqa: E402

__all__ = [
    "AggregateMetrics",
    "Allocation",
    "ConfigError",
    "DomainError",
    "FairnessWeights",
    "GroupschedError",
    "OracleSizeError",
    "SimConfig",
    "allocate_best_gain",
    "allocate_decentralized",
    "allocate_superiority",
    "allocate_variance",
    "build_config",
    "jain_index",
    "oracle_exhaustive",
    "power_allocate",
    "run_experiment",
    "run_slot",
    "sweep",
]
