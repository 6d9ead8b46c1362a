"""
Presets - Default experiment parameters and figure sweep presets
"""

import logging
from typing import Dict, List

logger = logging.getLogger(__name__)


# Downlink single-cell set-up used for the headline experiments
DEFAULTS: Dict = {
    "users": 8,
    "subcarriers": 128,
    "group_size": 4,
    "epsilon": 0.5,
    "gap": None,
    "ber": None,
    "l_param": None,
    "alpha": (2, 1, 3, 1, 2, 2, 4, 4),
    "slots": 200,
    "snr_db": (10.0,),
    "algo": "variance",
    "seed": 7,
    "total_power": 1.0,
    "max_it": None,
    "channel_model": "iid_exp",
    "grouping": "interleaved",
    "taps": 6,
    "delay_spread": 1.0,
}

# Used when neither a gap nor a BER target is configured
DEFAULT_GAP = 1.0


SWEEP_PRESETS: List[Dict] = [
    {
        "name": "group_size",
        "axis": "ng",
        "values": [1, 2, 4, 8],
        "snr_db": (0.0, 10.0, 20.0),
        "algos": ["variance"],
        "metric": "throughput",
    },
    {
        "name": "l_param",
        "axis": "l",
        "values": [1, 2, 4, 8],
        "snr_db": (0.0, 5.0, 10.0, 15.0, 20.0),
        "algos": ["variance"],
        "metric": "throughput",
    },
    {
        "name": "baselines",
        "axis": "snr",
        "values": [0.0, 5.0, 10.0, 15.0, 20.0],
        "snr_db": None,
        "algos": ["variance", "decentralized", "superiority"],
        "metric": "throughput",
    },
    {
        "name": "fairness",
        "axis": "users",
        "values": [8, 12, 16, 20, 24],
        "snr_db": (10.0,),
        "algos": ["variance", "superiority"],
        "metric": "jain",
    },
]


def get_preset(name: str) -> Dict:
    """Return a copy of a named sweep preset"""
    for preset in SWEEP_PRESETS:
        if preset["name"] == name:
            return dict(preset)

    logger.warning(f"Unknown sweep preset requested: {name}")
    raise KeyError(name)
