"""
Example - Two-user, four-group walk-through of variance ordering vs best gain
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ofdma_groupsched.allocator import FairnessWeights, allocate_variance
from ofdma_groupsched.baselines import allocate_best_gain
from ofdma_groupsched.link import ReportSet, sample_variance

logger = logging.getLogger(__name__)

# transmissible rate of each user on groups G1..G4
WORKED_RATES = (
    (90.0, 60.0, 20.0, 10.0),
    (100.0, 90.0, 70.0, 70.0),
)
BEST_GAIN_CAP = 2

EXPECTED_VARIANCES = (1366.67, 225.0)
EXPECTED_VARIANCE_TOTAL = 290.0
EXPECTED_BEST_GAIN_TOTAL = 220.0

VARIANCE_TOLERANCE = 0.5
TOTAL_TOLERANCE = 1e-9


@dataclass
class ExampleReport:
    variances: Tuple[float, ...]
    variance_total: float
    best_gain_total: float
    variance_owner: Tuple[int, ...]
    best_gain_owner: Tuple[int, ...]
    mismatches: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def line(self) -> str:
        variances = " ".join(f"V{k + 1}={v:.2f}" for k, v in enumerate(self.variances))
        return f"{variances} R_var={self.variance_total:g} R_best={self.best_gain_total:g}"


def run_example(rates: Optional[Sequence[Sequence[float]]] = None) -> ExampleReport:
    """Run the table (default: the built-in one) through both allocators and compare"""
    rates = np.asarray(WORKED_RATES if rates is None else rates, dtype=float)
    K = rates.shape[0]

    variances = tuple(sample_variance(rates[k]) for k in range(K))
    reports = ReportSet.report_all(rates)
    weights = FairnessWeights(np.ones(K))

    by_variance = allocate_variance(reports, weights)
    by_gain = allocate_best_gain(rates, cap=BEST_GAIN_CAP)

    report = ExampleReport(
        variances=variances,
        variance_total=by_variance.total_rate,
        best_gain_total=by_gain.total_rate,
        variance_owner=tuple(int(k) for k in by_variance.owner),
        best_gain_owner=tuple(int(k) for k in by_gain.owner),
    )

    if len(variances) != len(EXPECTED_VARIANCES):
        report.mismatches.append(f"expected {len(EXPECTED_VARIANCES)} users, table has {len(variances)}")
    else:
        for k, (got, want) in enumerate(zip(variances, EXPECTED_VARIANCES)):
            if abs(got - want) > VARIANCE_TOLERANCE:
                report.mismatches.append(f"V{k + 1}: expected {want:.2f}, got {got:.2f}")
    if abs(report.variance_total - EXPECTED_VARIANCE_TOTAL) > TOTAL_TOLERANCE:
        report.mismatches.append(f"R_var: expected {EXPECTED_VARIANCE_TOTAL:g}, got {report.variance_total:g}")
    if abs(report.best_gain_total - EXPECTED_BEST_GAIN_TOTAL) > TOTAL_TOLERANCE:
        report.mismatches.append(f"R_best: expected {EXPECTED_BEST_GAIN_TOTAL:g}, got {report.best_gain_total:g}")

    for mismatch in report.mismatches:
        logger.warning(f"Worked example mismatch: {mismatch}")
    return report
