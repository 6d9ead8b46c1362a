"""
Link - SNR gap, transmissible rates, per-group statistics and the CSI reporting rule
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from ofdma_groupsched.channel import GroupMap, SnrMatrix
from ofdma_groupsched.exceptions import DomainError

logger = logging.getLogger(__name__)

# BER at which the QAM gap approximation reaches zero
MAX_BER = 0.2


@dataclass(frozen=True)
class LinkParams:
    gamma_gap: float
    ber: Optional[float] = None

    def __post_init__(self):
        if not self.gamma_gap > 0:
            raise DomainError(f"SNR gap must be > 0, got {self.gamma_gap}")

    @classmethod
    def from_ber(cls, ber: float) -> "LinkParams":
        return cls(gamma_gap=snr_gap_from_ber(ber), ber=ber)


def snr_gap_from_ber(ber: float) -> float:
    """Gap approximation for Gray-mapped square QAM: -ln(5 BER) / 1.6"""
    if not 0 < ber <= MAX_BER:
        raise DomainError(f"BER must be in (0, {MAX_BER}], got {ber}")
    # max() folds the -0.0 produced at the upper bound
    return max(0.0, -math.log(5 * ber) / 1.6)


def rate(snr, gap: float):
    """log2(1 + snr/gap) in bits/s/Hz; works on scalars and arrays"""
    return np.log2(1.0 + np.asarray(snr, dtype=float) / gap)


def sample_variance(values: Sequence[float]) -> float:
    """Unbiased sample variance (n - 1 denominator)"""
    arr = np.asarray(values, dtype=float)
    if arr.size < 2:
        raise DomainError(f"sample variance needs at least 2 values, got {arr.size}")
    if np.all(arr == arr[0]):
        return 0.0
    return float(np.var(arr, ddof=1))


@dataclass(frozen=True)
class GroupStats:
    """Per (user, group) statistics of within-group subcarrier gains, K x M_g each"""

    mean_rate: np.ndarray
    mean_gain: np.ndarray
    variance: np.ndarray
    group_size: int


def group_stats(snr: SnrMatrix, group_map: GroupMap, link: LinkParams) -> GroupStats:
    if snr.subcarriers != group_map.subcarriers:
        raise DomainError(
            f"SNR matrix has {snr.subcarriers} subcarriers, group map expects {group_map.subcarriers}"
        )

    # K x M_g x N_g
    gains = snr.values[:, group_map.membership]
    mean_gain = gains.mean(axis=2)
    mean_rate = rate(gains, link.gamma_gap).mean(axis=2)

    if group_map.group_size < 2:
        variance = np.zeros_like(mean_gain)
    else:
        variance = gains.var(axis=2, ddof=1)
        constant = gains.max(axis=2) == gains.min(axis=2)
        variance[constant] = 0.0

    return GroupStats(
        mean_rate=mean_rate,
        mean_gain=mean_gain,
        variance=variance,
        group_size=group_map.group_size,
    )


@dataclass(frozen=True)
class ReportSet:
    """Groups each user reports, with the mean per-subcarrier rates the scheduler sees.

    ``mask[k, m]`` is True when user k reported group m. ``mean_rate`` covers
    every group (full CSI); allocators that honour the reporting rule only
    read the masked entries.
    """

    mask: np.ndarray
    mean_rate: np.ndarray
    group_size: int = 1

    @property
    def users(self) -> int:
        return self.mask.shape[0]

    @property
    def num_groups(self) -> int:
        return self.mask.shape[1]

    def reported(self, user: int) -> List[int]:
        return [int(m) for m in np.flatnonzero(self.mask[user])]

    def reporters(self, group: int) -> List[int]:
        return [int(k) for k in np.flatnonzero(self.mask[:, group])]

    @classmethod
    def report_all(cls, rates, group_size: int = 1) -> "ReportSet":
        """Every user reports every group"""
        rates = np.asarray(rates, dtype=float)
        return cls(mask=np.ones(rates.shape, dtype=bool), mean_rate=rates, group_size=group_size)


def report_set(stats: GroupStats, epsilon: float) -> ReportSet:
    """Report group m for user k iff V[k, m] <= epsilon * mean_gain[k, m]**2"""
    if math.isnan(epsilon) or epsilon < 0:
        raise DomainError(f"reporting threshold must be >= 0, got {epsilon}")

    if math.isinf(epsilon):
        mask = np.ones(stats.variance.shape, dtype=bool)
    else:
        mask = stats.variance <= epsilon * stats.mean_gain**2

    return ReportSet(mask=mask, mean_rate=stats.mean_rate, group_size=stats.group_size)
