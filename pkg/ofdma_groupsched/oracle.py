"""
Oracle - Exhaustive optimum for desk-scale instances
"""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ofdma_groupsched.allocator import UNASSIGNED
from ofdma_groupsched.exceptions import OracleSizeError

logger = logging.getLogger(__name__)

MAX_USERS = 4
MAX_GROUPS = 8


@dataclass(frozen=True)
class OracleResult:
    value: float
    owner: Tuple[int, ...]


def oracle_exhaustive(rates, caps: Sequence[int], group_size: int = 1) -> OracleResult:
    """Maximum total rate over all assignments where user k owns at most caps[k] groups.

    Users are tried before UNASSIGNED for every group, so among equal optima
    the returned one leaves a group empty only once every user is at cap.
    """
    rates = np.asarray(rates, dtype=float)
    K, M_g = rates.shape
    if K > MAX_USERS or M_g > MAX_GROUPS:
        raise OracleSizeError(
            f"oracle limited to K <= {MAX_USERS} and M_g <= {MAX_GROUPS}, got K={K}, M_g={M_g}"
        )
    if len(caps) != K:
        raise OracleSizeError(f"{len(caps)} caps for {K} users")

    left = [int(c) for c in caps]
    owner = [UNASSIGNED] * M_g
    best_value = -1.0
    best_owner = tuple(owner)

    # upper bound on what groups m.. can still add, for pruning
    tail_bound = np.concatenate([np.cumsum(rates.max(axis=0)[::-1])[::-1], [0.0]])

    def search(m: int, value: float):
        nonlocal best_value, best_owner
        if value + tail_bound[m] <= best_value:
            return
        if m == M_g:
            best_value = value
            best_owner = tuple(owner)
            return

        for k in range(K):
            if left[k] < 1:
                continue
            left[k] -= 1
            owner[m] = k
            search(m + 1, value + rates[k, m])
            left[k] += 1
        owner[m] = UNASSIGNED
        search(m + 1, value)

    search(0, 0.0)
    logger.debug(f"Oracle optimum {best_value:.6f} for {K}x{M_g} instance")
    return OracleResult(value=best_value * group_size, owner=best_owner)
