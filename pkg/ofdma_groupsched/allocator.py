"""
Allocator - Variance-based two-step group allocation, fairness quotas and equal power split
"""

import logging
import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Dict, Optional

import numpy as np

from ofdma_groupsched.channel import GroupMap
from ofdma_groupsched.exceptions import DomainError
from ofdma_groupsched.link import ReportSet, sample_variance

logger = logging.getLogger(__name__)

UNASSIGNED = -1
QUOTA_RTOL = 1e-12


class Phase(IntEnum):
    NONE = 0
    PREASSIGN = 1
    STEP1 = 2
    STEP2 = 3
    BASELINE = 4


@dataclass(frozen=True)
class FairnessWeights:
    """Proportional fairness coefficients, normalised to sum 1"""

    alpha: np.ndarray

    def __post_init__(self):
        alpha = np.atleast_1d(np.asarray(self.alpha, dtype=float))
        if alpha.size < 1 or np.any(~np.isfinite(alpha)) or np.any(alpha <= 0):
            raise DomainError("fairness weights must be positive and finite")
        object.__setattr__(self, "alpha", alpha / alpha.sum())

    @property
    def users(self) -> int:
        return self.alpha.size


@dataclass(frozen=True)
class Quotas:
    """Step-1 cap M_k = floor(alpha_k * M_g) per user"""

    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass
class Allocation:
    """Group ownership plus per-user accumulated rate and group count.

    ``rates`` accumulates mean per-subcarrier rate x N_g for every owned
    group. ``quota_left`` is the remaining step-1 budget.
    """

    owner: np.ndarray
    rates: np.ndarray
    counts: np.ndarray
    phase: np.ndarray
    quota_left: np.ndarray
    group_size: int = 1
    step1_iterations: int = 0

    @classmethod
    def empty(cls, users: int, num_groups: int, group_size: int = 1, quotas: Quotas = None) -> "Allocation":
        quota_left = quotas.counts.copy() if quotas is not None else np.zeros(users, dtype=int)
        return cls(
            owner=np.full(num_groups, UNASSIGNED, dtype=int),
            rates=np.zeros(users),
            counts=np.zeros(users, dtype=int),
            phase=np.full(num_groups, Phase.NONE, dtype=int),
            quota_left=quota_left,
            group_size=group_size,
        )

    @property
    def users(self) -> int:
        return self.rates.size

    @property
    def num_groups(self) -> int:
        return self.owner.size

    @property
    def total_rate(self) -> float:
        return float(self.rates.sum())

    @property
    def assigned(self) -> int:
        return int(np.count_nonzero(self.owner != UNASSIGNED))

    def groups_of(self, user: int) -> np.ndarray:
        return np.flatnonzero(self.owner == user)

    def assign(self, group: int, user: int, mean_rate: float, phase: Phase):
        if self.owner[group] != UNASSIGNED:
            raise DomainError(f"group {group} already owned by user {self.owner[group]}")
        self.owner[group] = user
        self.rates[user] += mean_rate * self.group_size
        self.counts[user] += 1
        self.phase[group] = phase

    def release(self, group: int, mean_rate: float):
        user = self.owner[group]
        if user == UNASSIGNED:
            return
        self.owner[group] = UNASSIGNED
        self.rates[user] -= mean_rate * self.group_size
        self.counts[user] -= 1
        self.phase[group] = Phase.NONE

    def phase_counts(self) -> Dict[str, int]:
        return {phase.name.lower(): int(np.count_nonzero(self.phase == phase)) for phase in Phase if phase}

    def copy(self) -> "Allocation":
        return Allocation(
            owner=self.owner.copy(),
            rates=self.rates.copy(),
            counts=self.counts.copy(),
            phase=self.phase.copy(),
            quota_left=self.quota_left.copy(),
            group_size=self.group_size,
            step1_iterations=self.step1_iterations,
        )


@dataclass(frozen=True)
class PowerMap:
    """Per-user power P_k and per-subcarrier power p[k, m] (K x M) under budget P_t"""

    user_power: np.ndarray
    subcarrier_power: np.ndarray
    total_power: float

    @property
    def used_power(self) -> float:
        return float(self.user_power.sum())


def default_l(users: int) -> int:
    """max(1, K/4 rounded half-up)"""
    return max(1, math.floor(users / 4 + 0.5))


def quotas(weights: FairnessWeights, num_groups: int) -> Quotas:
    if num_groups < 1:
        raise DomainError(f"group count must be >= 1, got {num_groups}")
    products = weights.alpha * num_groups
    # snap only float noise around an integer, relative to the product
    nearest = np.rint(products)
    exact = np.isclose(products, nearest, rtol=QUOTA_RTOL, atol=0.0)
    counts = np.where(exact, nearest, np.floor(products)).astype(int)
    return Quotas(counts=counts)


def preassign_unconflicted(reports: ReportSet, quota: Quotas) -> Allocation:
    """Give every group reported by exactly one user to that user, within quota.

    A user's solo groups are taken best rate first; ties go to the lower group index.
    """
    alloc = Allocation.empty(reports.users, reports.num_groups, reports.group_size, quota)
    solo = np.flatnonzero(reports.mask.sum(axis=0) == 1)

    for k in range(reports.users):
        mine = [int(m) for m in solo if reports.mask[k, m]]
        mine.sort(key=lambda m: (-reports.mean_rate[k, m], m))
        for m in mine:
            if alloc.quota_left[k] < 1:
                break
            alloc.assign(m, k, reports.mean_rate[k, m], Phase.PREASSIGN)
            alloc.quota_left[k] -= 1

    logger.debug(f"Pre-assigned {np.count_nonzero(alloc.phase == Phase.PREASSIGN)} unconflicted groups")
    return alloc


def _remaining_variance(rates: np.ndarray, remaining: np.ndarray) -> float:
    values = rates[remaining]
    if values.size < 2:
        return 0.0
    return sample_variance(values)


def step1_variance(reports: ReportSet, partial: Allocation, max_it: Optional[int] = None) -> Allocation:
    """Highest-variance user picks its best remaining reported group, within quota.

    Every iteration either assigns a group or retires the picked user. The
    loop stops after ``max_it`` iterations (default M_g), or earlier when no
    group remains or no active user has two or more remaining groups.
    """
    alloc = partial.copy()
    rates = reports.mean_rate
    max_it = reports.num_groups if max_it is None else max_it

    remaining = reports.mask.copy()
    remaining[:, alloc.owner != UNASSIGNED] = False

    active = [k for k in range(reports.users) if reports.mask[k].any()]
    variances = {k: _remaining_variance(rates[k], remaining[k]) for k in active}

    iterations = 0
    while iterations < max_it:
        sizes = {k: int(remaining[k].sum()) for k in active}
        if not any(sizes.values()) or all(n < 2 for n in sizes.values()):
            break

        k_s = None
        for k in active:
            if sizes[k] and (k_s is None or variances[k] > variances[k_s]):
                k_s = k

        if alloc.quota_left[k_s] >= 1:
            candidates = np.flatnonzero(remaining[k_s])
            m = int(candidates[np.argmax(rates[k_s, candidates])])
            alloc.assign(m, k_s, rates[k_s, m], Phase.STEP1)
            alloc.quota_left[k_s] -= 1

            affected = [k for k in active if remaining[k, m]]
            remaining[:, m] = False
            for k in affected:
                variances[k] = _remaining_variance(rates[k], remaining[k])
        else:
            active.remove(k_s)

        iterations += 1

    alloc.step1_iterations = iterations
    logger.debug(f"Step 1 finished after {iterations} iterations, {alloc.assigned} groups owned")
    return alloc


def _prior(prior_rates: Optional[np.ndarray], users: int) -> np.ndarray:
    if prior_rates is None:
        return np.zeros(users)
    prior = np.asarray(prior_rates, dtype=float)
    if prior.shape != (users,):
        raise DomainError(f"prior rates must have one entry per user ({users}), got shape {prior.shape}")
    if np.any(prior < 0) or np.any(~np.isfinite(prior)):
        raise DomainError("prior rates must be finite and >= 0")
    return prior


def step2_fairness(
    reports: ReportSet,
    partial: Allocation,
    weights: FairnessWeights,
    l_param: int,
    prior_rates: Optional[np.ndarray] = None,
) -> Allocation:
    """Each unassigned group goes to the min R_k/alpha_k user among its L best reporters.

    R_k is the rate already delivered to user k in earlier slots
    (``prior_rates``, zero when omitted) plus what this slot has given it so far.
    """
    if not 1 <= l_param <= reports.users:
        raise DomainError(f"L must be in [1, {reports.users}], got {l_param}")

    alloc = partial.copy()
    rates = reports.mean_rate
    alpha = weights.alpha
    carried = _prior(prior_rates, reports.users)

    for m in range(reports.num_groups):
        if alloc.owner[m] != UNASSIGNED:
            continue
        candidates = reports.reporters(m)
        if not candidates:
            continue

        candidates.sort(key=lambda k: (-rates[k, m], k))
        shortlist = candidates[:l_param]
        chosen = min(shortlist, key=lambda k: ((carried[k] + alloc.rates[k]) / alpha[k], k))
        alloc.assign(m, chosen, rates[chosen, m], Phase.STEP2)

    return alloc


def allocate_variance(
    reports: ReportSet,
    weights: FairnessWeights,
    l_param: Optional[int] = None,
    max_it: Optional[int] = None,
    prior_rates: Optional[np.ndarray] = None,
) -> Allocation:
    """Quotas, unconflicted pre-assignment, variance-ordered step 1, fairness step 2"""
    if weights.users != reports.users:
        raise DomainError(f"{weights.users} fairness weights for {reports.users} users")

    quota = quotas(weights, reports.num_groups)
    alloc = preassign_unconflicted(reports, quota)
    alloc = step1_variance(reports, alloc, max_it)
    l_param = default_l(reports.users) if l_param is None else l_param
    return step2_fairness(reports, alloc, weights, l_param, prior_rates)


def run_variance(
    reports: ReportSet,
    weights: FairnessWeights,
    l_param: int,
    max_it: int,
    prior_rates: Optional[np.ndarray] = None,
) -> Allocation:
    return allocate_variance(reports, weights, l_param=l_param, max_it=max_it, prior_rates=prior_rates)


def power_allocate(alloc: Allocation, total_power: float, group_map: GroupMap) -> PowerMap:
    """P_k = P_t M_gk / M_g, split equally over the user's subcarriers (P_t / M each)"""
    if not total_power > 0:
        raise DomainError(f"total power must be > 0, got {total_power}")
    if group_map.num_groups != alloc.num_groups:
        raise DomainError(f"allocation has {alloc.num_groups} groups, map has {group_map.num_groups}")

    user_power = total_power * alloc.counts / alloc.num_groups
    subcarrier_power = np.zeros((alloc.users, group_map.subcarriers))

    for k in range(alloc.users):
        if alloc.counts[k] == 0:
            continue
        per_subcarrier = user_power[k] / (alloc.counts[k] * group_map.group_size)
        members = group_map.membership[alloc.groups_of(k)].ravel()
        subcarrier_power[k, members] = per_subcarrier

    return PowerMap(user_power=user_power, subcarrier_power=subcarrier_power, total_power=total_power)

