"""
Channel - Subcarrier grouping, multipath frequency response and SNR generation
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ofdma_groupsched.exceptions import ConfigError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroupMap:
    """Partition of M subcarriers into M_g groups of N_g subcarriers.

    ``membership[m]`` holds the subcarrier indices of group ``m`` in
    ascending order. Interleaved groups use stride M_g, contiguous groups
    are adjacent blocks.
    """

    subcarriers: int
    group_size: int
    membership: np.ndarray
    interleaved: bool = True

    @property
    def num_groups(self) -> int:
        return self.subcarriers // self.group_size


def make_group_map(M: int, N_g: int, interleaved: bool = True) -> GroupMap:
    """Build the group map; group m = {m, m+M_g, ..., m+(N_g-1)M_g} when interleaved"""
    if M < 1 or N_g < 1 or M % N_g:
        raise ConfigError(
            f"group size N_g={N_g} does not divide subcarrier count M={M}", field="group_size"
        )

    M_g = M // N_g
    if interleaved:
        membership = np.arange(M_g)[:, None] + M_g * np.arange(N_g)[None, :]
    else:
        membership = np.arange(M).reshape(M_g, N_g)

    return GroupMap(subcarriers=M, group_size=N_g, membership=membership, interleaved=interleaved)


@dataclass(frozen=True)
class TapSet:
    """Multipath taps (complex amplitude, delay in seconds) sampled at one instant"""

    gains: np.ndarray
    delays: np.ndarray
    subcarrier_spacing: float
    symbol_period: float

    def __post_init__(self):
        gains = np.atleast_1d(np.asarray(self.gains, dtype=complex))
        delays = np.atleast_1d(np.asarray(self.delays, dtype=float))
        object.__setattr__(self, "gains", gains)
        object.__setattr__(self, "delays", delays)

        if gains.size < 1:
            raise DomainError("a tap set needs at least one path")
        if gains.shape != delays.shape:
            raise DomainError(f"{gains.size} tap gains but {delays.size} delays")
        if np.any(delays < 0):
            raise DomainError("tap delays must be non-negative")
        if not self.subcarrier_spacing > 0:
            raise DomainError(f"subcarrier spacing must be positive, got {self.subcarrier_spacing}")


@dataclass(frozen=True)
class SnrMatrix:
    """K x M linear per-subcarrier SNRs of one slot"""

    values: np.ndarray
    mean_snr: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise DomainError(f"SNR matrix must be 2-D, got shape {values.shape}")
        if np.any(values < 0):
            raise DomainError("SNR values must be non-negative")
        object.__setattr__(self, "values", values)

    @property
    def users(self) -> int:
        return self.values.shape[0]

    @property
    def subcarriers(self) -> int:
        return self.values.shape[1]


def freq_response(taps: TapSet, M: int) -> np.ndarray:
    """H[m] = sum_l h_l exp(-j 2 pi m df tau_l) for m in [0, M)"""
    freqs = np.arange(M) * taps.subcarrier_spacing
    phase = np.exp(-2j * np.pi * np.outer(freqs, taps.delays))
    return phase @ taps.gains


def snr_from_response(gains: Sequence[complex], rho: float) -> np.ndarray:
    if rho < 0:
        raise DomainError(f"power-to-noise ratio must be >= 0, got {rho}")
    return rho * np.abs(np.asarray(gains, dtype=complex)) ** 2


def substream(seed: int, slot: int, user: int) -> np.random.Generator:
    """Independent generator for one (slot, user) pair of a master seed"""
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(slot, user))
    return np.random.Generator(np.random.PCG64(sequence))


def gen_iid_exp_snr(K: int, M: int, mean_snr: float, seed: int, slot: int = 0) -> SnrMatrix:
    """i.i.d. exponential SNRs (Rayleigh fading under power control).

    Row k is drawn from the (slot, k) substream as a unit-mean draw scaled
    by ``mean_snr``, so every SNR point of a run sees the same fading.
    """
    if not mean_snr > 0:
        raise DomainError(f"mean SNR must be positive, got {mean_snr}")

    values = np.empty((K, M))
    for k in range(K):
        values[k] = substream(seed, slot, k).standard_exponential(M)

    return SnrMatrix(values=values * mean_snr, mean_snr=mean_snr)


def gen_rayleigh_taps(
    num_taps: int,
    delay_spread: float,
    subcarrier_spacing: float,
    M: int,
    rng: np.random.Generator,
) -> TapSet:
    """Sample-spaced taps with an exponential power-delay profile of unit total power.

    ``delay_spread`` is in units of the sample period 1/(M df).
    """
    if num_taps < 1:
        raise DomainError(f"need at least one tap, got {num_taps}")

    sample_period = 1.0 / (M * subcarrier_spacing)
    index = np.arange(num_taps)
    pdp = np.exp(-index / delay_spread)
    pdp /= pdp.sum()

    gains = np.sqrt(pdp / 2) * (rng.standard_normal(num_taps) + 1j * rng.standard_normal(num_taps))
    return TapSet(
        gains=gains,
        delays=index * sample_period,
        subcarrier_spacing=subcarrier_spacing,
        symbol_period=M * sample_period,
    )


def gen_multipath_snr(
    K: int,
    M: int,
    mean_snr: float,
    seed: int,
    slot: int = 0,
    num_taps: int = 6,
    delay_spread: float = 1.0,
    subcarrier_spacing: float = 15e3,
) -> SnrMatrix:
    """Frequency-selective Rayleigh SNRs from per-user multipath taps; E[gamma] = mean_snr"""
    if not mean_snr > 0:
        raise DomainError(f"mean SNR must be positive, got {mean_snr}")

    values = np.empty((K, M))
    for k in range(K):
        taps = gen_rayleigh_taps(num_taps, delay_spread, subcarrier_spacing, M, substream(seed, slot, k))
        values[k] = snr_from_response(freq_response(taps, M), mean_snr)

    return SnrMatrix(values=values, mean_snr=mean_snr)
