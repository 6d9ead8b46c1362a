"""
Baselines - Best-gain, decentralized and comparative-superiority comparators
"""

import logging
from typing import List, Optional

import numpy as np

from ofdma_groupsched.allocator import (
    UNASSIGNED,
    Allocation,
    FairnessWeights,
    Phase,
    quotas,
)
from ofdma_groupsched.link import ReportSet

logger = logging.getLogger(__name__)

# swaps must gain more than float noise to be accepted
SWAP_TOLERANCE = 1e-12


def allocate_best_gain(rates, cap: Optional[int] = None, group_size: int = 1) -> Allocation:
    """Each group, in index order, to its highest-rate user that is still under ``cap``"""
    rates = np.asarray(rates, dtype=float)
    K, M_g = rates.shape
    alloc = Allocation.empty(K, M_g, group_size)

    for m in range(M_g):
        eligible = [k for k in range(K) if cap is None or alloc.counts[k] < cap]
        if not eligible:
            break
        best = max(eligible, key=lambda k: (rates[k, m], -k))
        alloc.assign(m, best, rates[best, m], Phase.BASELINE)

    return alloc


def _claim_rounds(rates: np.ndarray, weights: FairnessWeights, group_size: int) -> Allocation:
    """Users with quota left claim their best free group; clashes go to the higher rate"""
    K, M_g = rates.shape
    alloc = Allocation.empty(K, M_g, group_size, quotas(weights, M_g))
    free = np.ones(M_g, dtype=bool)

    rounds = 0
    while free.any():
        claims = {}
        for k in range(K):
            if alloc.quota_left[k] < 1:
                continue
            available = np.flatnonzero(free)
            m = int(available[np.argmax(rates[k, available])])
            claims.setdefault(m, []).append(k)

        if not claims:
            break

        for m in sorted(claims):
            winner = max(claims[m], key=lambda k: (rates[k, m], -k))
            alloc.assign(m, winner, rates[winner, m], Phase.BASELINE)
            alloc.quota_left[winner] -= 1
            free[m] = False
        rounds += 1

    logger.debug(f"Claim resolution finished after {rounds} rounds")
    return alloc


def allocate_decentralized(rates, weights: FairnessWeights, group_size: int = 1) -> Allocation:
    rates = np.asarray(rates, dtype=float)
    return _claim_rounds(rates, weights, group_size)


def swap_improve(
    alloc: Allocation,
    rates,
    max_scans: Optional[int] = None,
    trace: Optional[List[float]] = None,
) -> Allocation:
    """Pairwise swaps of groups between owners while the sum rate strictly increases.

    A scan visits every pair of owned groups once; scanning stops at a fixed
    point or after ``max_scans`` scans (default M_g**2). Group counts never
    change, so quotas met before the search are still met after it.
    """
    rates = np.asarray(rates, dtype=float)
    alloc = alloc.copy()
    M_g = alloc.num_groups
    max_scans = M_g * M_g if max_scans is None else max_scans

    if trace is not None:
        trace.append(alloc.total_rate)

    scans = 0
    improved = True
    while improved and scans < max_scans:
        improved = False
        scans += 1
        for a in range(M_g):
            for b in range(a + 1, M_g):
                u, v = alloc.owner[a], alloc.owner[b]
                if u == UNASSIGNED or v == UNASSIGNED or u == v:
                    continue
                gain = rates[u, b] + rates[v, a] - rates[u, a] - rates[v, b]
                if gain <= SWAP_TOLERANCE:
                    continue

                alloc.release(a, rates[u, a])
                alloc.release(b, rates[v, b])
                alloc.assign(a, v, rates[v, a], Phase.BASELINE)
                alloc.assign(b, u, rates[u, b], Phase.BASELINE)
                improved = True
                if trace is not None:
                    trace.append(alloc.total_rate)

    logger.debug(f"Swap search stopped after {scans} scans")
    return alloc


def allocate_superiority(
    rates,
    weights: FairnessWeights,
    group_size: int = 1,
    max_scans: Optional[int] = None,
) -> Allocation:
    """Highest-rate conflict resolution followed by the pairwise swap search"""
    rates = np.asarray(rates, dtype=float)
    initial = _claim_rounds(rates, weights, group_size)
    return swap_improve(initial, rates, max_scans)


# Hook adapters: baselines work on full-CSI mean rates and ignore the report mask
# and the rates carried over from earlier slots


def run_best_gain(reports: ReportSet, weights: FairnessWeights, l_param: int, max_it: int, prior_rates=None) -> Allocation:
    return allocate_best_gain(reports.mean_rate, group_size=reports.group_size)


def run_decentralized(reports: ReportSet, weights: FairnessWeights, l_param: int, max_it: int, prior_rates=None) -> Allocation:
    return allocate_decentralized(reports.mean_rate, weights, group_size=reports.group_size)


def run_superiority(reports: ReportSet, weights: FairnessWeights, l_param: int, max_it: int, prior_rates=None) -> Allocation:
    return allocate_superiority(reports.mean_rate, weights, group_size=reports.group_size)
