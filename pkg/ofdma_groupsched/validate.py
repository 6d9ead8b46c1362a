"""
Validate - Oracle equivalence, invariant and determinism suites with a machine-readable summary
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from ofdma_groupsched.allocator import (
    UNASSIGNED,
    Allocation,
    FairnessWeights,
    Quotas,
    allocate_variance,
    power_allocate,
    preassign_unconflicted,
    quotas,
    step1_variance,
)
from ofdma_groupsched.baselines import allocate_decentralized, allocate_superiority, swap_improve
from ofdma_groupsched.channel import make_group_map
from ofdma_groupsched.config import SimConfig
from ofdma_groupsched.example import WORKED_RATES
from ofdma_groupsched.export_manager import ExportManager, RunManifest
from ofdma_groupsched.link import ReportSet, sample_variance
from ofdma_groupsched.metrics import jain_index
from ofdma_groupsched.oracle import oracle_exhaustive
from ofdma_groupsched.sim import run_experiment

logger = logging.getLogger(__name__)

DEFAULT_CASES = 1000
DEFAULT_INSTANCES = 500
ORACLE_MAX_USERS = 3
ORACLE_MAX_GROUPS = 6
MAX_REPORTED_FAILURES = 10

DETERMINISM_CONFIG = dict(users=4, subcarriers=32, group_size=4, alpha=(1, 2, 1, 4), slots=24, snr_db=(0.0, 10.0))
DETERMINISM_THREADS = 8


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: List[str] = field(default_factory=list)
    details: Dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, message: str):
        self.failures.append(message)

    def to_dict(self) -> Dict:
        data = asdict(self)
        data["passed"] = self.passed
        data["failure_count"] = len(self.failures)
        data["failures"] = self.failures[:MAX_REPORTED_FAILURES]
        return data


class AllocationValidator:
    """Structural checks on one allocation"""

    @staticmethod
    def validate_exclusivity(alloc: Allocation) -> Tuple[bool, List[str]]:
        errors = []

        owned = alloc.owner[alloc.owner != UNASSIGNED]
        if np.any((owned < 0) | (owned >= alloc.users)):
            errors.append(f"owner out of range: {alloc.owner.tolist()}")
        elif not np.array_equal(np.bincount(owned, minlength=alloc.users), alloc.counts):
            errors.append(f"counts {alloc.counts.tolist()} disagree with owners {alloc.owner.tolist()}")

        if int(alloc.counts.sum()) > alloc.num_groups:
            errors.append(f"{int(alloc.counts.sum())} ownerships for {alloc.num_groups} groups")

        return len(errors) == 0, errors

    @staticmethod
    def validate_quota(alloc: Allocation, quota: Quotas) -> Tuple[bool, List[str]]:
        errors = []

        over = np.flatnonzero(alloc.counts > quota.counts)
        for k in over:
            errors.append(f"user {k} owns {alloc.counts[k]} groups, quota {quota.counts[k]}")

        return len(errors) == 0, errors

    @staticmethod
    def validate_reported(alloc: Allocation, reports: ReportSet) -> Tuple[bool, List[str]]:
        errors = []

        for m in np.flatnonzero(alloc.owner != UNASSIGNED):
            k = alloc.owner[m]
            if not reports.mask[k, m]:
                errors.append(f"group {m} given to user {k}, who did not report it")

        return len(errors) == 0, errors


def _random_weights(rng: np.random.Generator, users: int) -> FairnessWeights:
    return FairnessWeights(rng.integers(1, 5, size=users).astype(float))


def _random_reports(rng: np.random.Generator, users: int, groups: int) -> ReportSet:
    rates = rng.exponential(1.0, size=(users, groups))
    mask = rng.random((users, groups)) < rng.uniform(0.2, 1.0)
    return ReportSet(mask=mask, mean_rate=rates)


class Validator:
    """Runs every suite from one master seed; each suite gets its own substream"""

    def __init__(self, seed: int = 7, cases: int = DEFAULT_CASES, instances: int = DEFAULT_INSTANCES):
        self.seed = seed
        self.cases = cases
        self.instances = instances

    def _rng(self, suite: int) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=self.seed, spawn_key=(suite,))))

    def oracle_equivalence(self) -> SuiteResult:
        """Variance allocation never beats the optimum under its own realised group counts"""
        result = SuiteResult("oracle_equivalence")
        rng = self._rng(0)

        worked = oracle_exhaustive(WORKED_RATES, [2, 2])
        if abs(worked.value - 290.0) > 1e-9:
            result.fail(f"worked example optimum {worked.value:g}, expected 290")

        ratios = []
        for i in range(self.instances):
            K = int(rng.integers(1, ORACLE_MAX_USERS + 1))
            M_g = int(rng.integers(1, ORACLE_MAX_GROUPS + 1))
            rates = rng.exponential(1.0, size=(K, M_g))

            alloc = allocate_variance(ReportSet.report_all(rates), _random_weights(rng, K))
            best = oracle_exhaustive(rates, alloc.counts)
            if alloc.total_rate > best.value + 1e-9:
                result.fail(f"instance {i}: allocation {alloc.total_rate:.9f} > oracle {best.value:.9f}")
            ratios.append(alloc.total_rate / best.value if best.value > 0 else 1.0)

        result.cases = self.instances + 1
        result.details = {
            "mean_optimality_ratio": float(np.mean(ratios)) if ratios else None,
            "min_optimality_ratio": float(np.min(ratios)) if ratios else None,
            "optimal_fraction": float(np.mean(np.isclose(ratios, 1.0))) if ratios else None,
        }
        return result

    def quota_safety(self) -> SuiteResult:
        result = SuiteResult("quota_safety", cases=self.cases)
        rng = self._rng(1)

        for i in range(self.cases):
            K = int(rng.integers(1, 7))
            M_g = int(rng.integers(1, 13))
            reports = _random_reports(rng, K, M_g)
            quota = quotas(_random_weights(rng, K), M_g)

            alloc = step1_variance(reports, preassign_unconflicted(reports, quota))
            ok, errors = AllocationValidator.validate_quota(alloc, quota)
            if not ok:
                result.fail(f"case {i}: {errors[0]}")
        return result

    def exclusivity(self) -> SuiteResult:
        result = SuiteResult("exclusivity", cases=self.cases)
        rng = self._rng(2)

        for i in range(self.cases):
            K = int(rng.integers(1, 7))
            M_g = int(rng.integers(1, 13))
            reports = _random_reports(rng, K, M_g)
            weights = _random_weights(rng, K)

            alloc = allocate_variance(reports, weights, l_param=int(rng.integers(1, K + 1)))
            for check in (
                AllocationValidator.validate_exclusivity(alloc),
                AllocationValidator.validate_reported(alloc, reports),
                AllocationValidator.validate_exclusivity(allocate_superiority(reports.mean_rate, weights)),
            ):
                ok, errors = check
                if not ok:
                    result.fail(f"case {i}: {errors[0]}")
        return result

    def power_split(self) -> SuiteResult:
        """Every assigned subcarrier gets exactly P_t / M"""
        result = SuiteResult("power_split", cases=self.cases)
        rng = self._rng(3)

        for i in range(self.cases):
            K = int(rng.integers(1, 7))
            M_g = int(rng.integers(1, 17))
            N_g = int(rng.integers(1, 5))
            M = M_g * N_g
            P_t = float(rng.uniform(0.1, 10.0))
            group_map = make_group_map(M, N_g, interleaved=bool(rng.integers(0, 2)))

            alloc = allocate_variance(_random_reports(rng, K, M_g), _random_weights(rng, K))
            power = power_allocate(alloc, P_t, group_map)

            served = power.subcarrier_power > 0
            if np.any(served.sum(axis=0) > 1):
                result.fail(f"case {i}: a subcarrier is powered for two users")
            if not np.allclose(power.subcarrier_power[served], P_t / M, rtol=1e-12, atol=0.0):
                result.fail(f"case {i}: per-subcarrier power differs from P_t/M")
            if power.used_power > P_t * (1 + 1e-12):
                result.fail(f"case {i}: used power {power.used_power} exceeds budget {P_t}")
        return result

    def jain_properties(self) -> SuiteResult:
        """Bounds [1/K, 1] and invariance under scaling of every rate"""
        result = SuiteResult("jain_properties", cases=self.cases)
        rng = self._rng(4)

        for i in range(self.cases):
            K = int(rng.integers(1, 25))
            R = rng.exponential(1.0, size=K)
            alpha = rng.uniform(0.1, 5.0, size=K)
            c = float(10.0 ** rng.uniform(-3, 3))

            value = jain_index(R, alpha)
            if value is None or not 1.0 / K - 1e-12 <= value <= 1.0 + 1e-12:
                result.fail(f"case {i}: index {value} outside [1/{K}, 1]")
                continue
            scaled = jain_index(c * R, alpha)
            if abs(scaled - value) > 1e-12:
                result.fail(f"case {i}: scaling by {c:g} moved index by {abs(scaled - value):.3e}")
        return result

    def variance_laws(self) -> SuiteResult:
        """Var(x + c) = Var(x) and Var(a x) = a^2 Var(x)"""
        result = SuiteResult("variance_laws", cases=self.cases)
        rng = self._rng(5)

        for i in range(self.cases):
            x = rng.uniform(0.0, 10.0, size=int(rng.integers(2, 17)))
            c = float(rng.uniform(-10.0, 10.0))
            a = float(rng.uniform(-5.0, 5.0))

            base = sample_variance(x)
            if not math.isclose(sample_variance(x + c), base, rel_tol=1e-9, abs_tol=1e-9):
                result.fail(f"case {i}: translation by {c:g} changed the variance")
            if not math.isclose(sample_variance(a * x), a * a * base, rel_tol=1e-9, abs_tol=1e-9):
                result.fail(f"case {i}: scaling by {a:g} broke Var(ax) = a^2 Var(x)")
        return result

    def swap_monotonicity(self) -> SuiteResult:
        result = SuiteResult("swap_monotonicity", cases=self.cases)
        rng = self._rng(6)

        for i in range(self.cases):
            K = int(rng.integers(2, 5))
            M_g = int(rng.integers(2, 9))
            rates = rng.exponential(1.0, size=(K, M_g))

            initial = allocate_decentralized(rates, _random_weights(rng, K))
            trace: List[float] = []
            final = swap_improve(initial, rates, trace=trace)

            if any(b <= a for a, b in zip(trace, trace[1:])):
                result.fail(f"case {i}: swap trace not strictly increasing")
            if not np.array_equal(final.counts, initial.counts):
                result.fail(f"case {i}: swaps changed group counts")
            if final.total_rate < initial.total_rate - 1e-12:
                result.fail(f"case {i}: swap search lowered the sum rate")
        return result

    def determinism(self) -> SuiteResult:
        """Serial and threaded runs render the same CSV bytes"""
        result = SuiteResult("determinism", cases=3)
        config = SimConfig(seed=self.seed, **DETERMINISM_CONFIG)
        exporter = ExportManager()
        manifest = RunManifest(command="validate", configs=[config.to_dict()], seed=self.seed)

        renders = [
            exporter.render_csv(run_experiment(config, threads=1), manifest),
            exporter.render_csv(run_experiment(config, threads=1), manifest),
            exporter.render_csv(run_experiment(config, threads=DETERMINISM_THREADS), manifest),
        ]
        if renders[0] != renders[1]:
            result.fail("two serial runs differ")
        if renders[0] != renders[2]:
            result.fail(f"serial and {DETERMINISM_THREADS}-thread runs differ")
        return result

    def run_all(self) -> Dict:
        suites = [
            self.oracle_equivalence(),
            self.quota_safety(),
            self.exclusivity(),
            self.power_split(),
            self.jain_properties(),
            self.variance_laws(),
            self.swap_monotonicity(),
            self.determinism(),
        ]
        for suite in suites:
            level = logging.INFO if suite.passed else logging.WARNING
            logger.log(level, f"Suite {suite.name}: {suite.cases} cases, {len(suite.failures)} failures")

        return {
            "seed": self.seed,
            "cases": self.cases,
            "instances": self.instances,
            "passed": all(s.passed for s in suites),
            "suites": [s.to_dict() for s in suites],
        }
