"""
Metrics - Slot and aggregate throughput metrics, weighted Jain fairness index
"""

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from ofdma_groupsched.exceptions import DomainError

if TYPE_CHECKING:
    from ofdma_groupsched.config import SimConfig

logger = logging.getLogger(__name__)

CONFIDENCE = 0.95


def jain_index(R: Sequence[float], alpha: Sequence[float]) -> Optional[float]:
    """(sum x)^2 / (K sum x^2) with x_k = R_k / alpha_k; None when every R_k is zero"""
    R = np.asarray(R, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    if R.shape != alpha.shape:
        raise DomainError(f"{R.size} rates but {alpha.size} weights")
    if np.any(alpha <= 0):
        raise DomainError("fairness weights must be positive")

    x = R / alpha
    denominator = x.size * np.sum(x * x)
    if denominator == 0:
        return None
    return float(np.sum(x) ** 2 / denominator)


@dataclass(frozen=True)
class SlotMetrics:
    slot: int
    user_rates: np.ndarray
    group_counts: np.ndarray
    assigned_fraction: float
    phase_counts: Dict[str, int] = field(default_factory=dict)
    no_data: bool = False
    report_fraction: float = 1.0  # reported (user, group) pairs / (K * M_g)

    @property
    def sum_rate(self) -> float:
        return float(self.user_rates.sum())


@dataclass(frozen=True)
class AggregateMetrics:
    """Time-averaged results of one algorithm at one SNR point"""

    config: "SimConfig"
    snr_db: float
    slots: int
    user_totals: np.ndarray
    throughput_per_subcarrier: float
    jain_index: Optional[float]
    shares: np.ndarray
    assigned_fraction: float
    throughput_sem: float = 0.0
    throughput_ci: Tuple[float, float] = (0.0, 0.0)
    mean_phase_counts: Dict[str, float] = field(default_factory=dict)
    no_data_slots: int = 0
    report_fraction: float = 1.0

    @property
    def algo(self) -> str:
        return self.config.algo

    @property
    def total_rate(self) -> float:
        return float(self.user_totals.sum())

    def stats(self) -> Dict:
        """Statistics kept out of the fixed CSV schema"""
        return {
            "algo": self.algo,
            "snr_db": self.snr_db,
            "throughput_per_subcarrier": self.throughput_per_subcarrier,
            "throughput_sem": self.throughput_sem,
            "throughput_ci": list(self.throughput_ci),
            "jain_index": self.jain_index,
            "mean_phase_counts": dict(self.mean_phase_counts),
            "no_data_slots": self.no_data_slots,
            "report_fraction": self.report_fraction,
        }

    def summary(self) -> str:
        jain = "NA" if self.jain_index is None else f"{self.jain_index:.4f}"
        lo, hi = self.throughput_ci
        phases = ", ".join(f"{name}={count:.2f}" for name, count in self.mean_phase_counts.items())
        return (
            f"{self.algo} @ {self.snr_db:g} dB: {self.throughput_per_subcarrier:.4f} b/s/Hz per subcarrier "
            f"(95% CI {lo:.4f}..{hi:.4f}), Jain {jain}, assigned {self.assigned_fraction:.3f}, "
            f"no-data slots {self.no_data_slots}/{self.slots}, reported pairs {self.report_fraction:.3f}"
            + (f", groups per slot: {phases}" if phases else "")
        )


def aggregate(config: "SimConfig", snr_db: float, slot_metrics: List[SlotMetrics]) -> AggregateMetrics:
    """Reduce slot metrics in slot order so the result does not depend on execution order"""
    if not slot_metrics:
        raise DomainError("cannot aggregate zero slots")

    slot_metrics = sorted(slot_metrics, key=lambda s: s.slot)
    T = len(slot_metrics)
    subcarriers = config.subcarriers

    user_rates = np.vstack([s.user_rates for s in slot_metrics])
    user_totals = user_rates.sum(axis=0)
    total = float(user_totals.sum())

    per_slot = user_rates.sum(axis=1) / subcarriers
    throughput = total / (T * subcarriers)

    if T > 1:
        sem = float(stats.sem(per_slot))
    else:
        sem = 0.0
    if sem > 0:
        lo, hi = stats.t.interval(CONFIDENCE, T - 1, loc=throughput, scale=sem)
        ci = (float(lo), float(hi))
    else:
        ci = (throughput, throughput)

    shares = user_totals / total if total > 0 else np.zeros_like(user_totals)

    phases = pd.DataFrame([s.phase_counts for s in slot_metrics]).fillna(0)
    mean_phase_counts = {str(name): float(value) for name, value in phases.mean().items()}

    return AggregateMetrics(
        config=config,
        snr_db=snr_db,
        slots=T,
        user_totals=user_totals,
        throughput_per_subcarrier=throughput,
        jain_index=jain_index(user_totals, config.alpha),
        shares=shares,
        assigned_fraction=float(np.mean([s.assigned_fraction for s in slot_metrics])),
        throughput_sem=sem,
        throughput_ci=ci,
        mean_phase_counts=mean_phase_counts,
        no_data_slots=sum(1 for s in slot_metrics if s.no_data),
        report_fraction=float(np.mean([s.report_fraction for s in slot_metrics])),
    )
