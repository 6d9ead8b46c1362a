"""
Sim - Monte-Carlo driver: channel draw, reporting, allocation, power and metrics per slot
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ofdma_groupsched.allocator import FairnessWeights, power_allocate
from ofdma_groupsched.channel import SnrMatrix, gen_iid_exp_snr, gen_multipath_snr, make_group_map
from ofdma_groupsched.config import SimConfig, default_threads
from ofdma_groupsched.exceptions import DomainError
from ofdma_groupsched.hooks import allocator_hooks, channel_hooks, get_hook
from ofdma_groupsched.link import LinkParams, ReportSet, group_stats, rate, report_set
from ofdma_groupsched.metrics import AggregateMetrics, SlotMetrics, aggregate

logger = logging.getLogger(__name__)


def db_to_linear(snr_db: float) -> float:
    return float(10.0 ** (snr_db / 10.0))


def draw_iid_exp(config: SimConfig, mean_snr: float, slot: int) -> SnrMatrix:
    return gen_iid_exp_snr(config.users, config.subcarriers, mean_snr, config.seed, slot)


def draw_multipath(config: SimConfig, mean_snr: float, slot: int) -> SnrMatrix:
    return gen_multipath_snr(
        config.users,
        config.subcarriers,
        mean_snr,
        config.seed,
        slot,
        num_taps=config.taps,
        delay_spread=config.delay_spread,
    )


@dataclass(frozen=True)
class SlotDraw:
    """Channel realisation and feedback of one slot, before scheduling"""

    slot: int
    snr: SnrMatrix
    reports: ReportSet


def draw_slot(config: SimConfig, slot_index: int, snr_db: Optional[float] = None) -> SlotDraw:
    """Channel and reporting for one slot; deterministic in (seed, slot_index, snr_db)"""
    snr_db = config.snr_db[0] if snr_db is None else snr_db
    group_map = make_group_map(config.subcarriers, config.group_size, config.grouping == "interleaved")

    snr = get_hook(channel_hooks, config.channel_model)(config, db_to_linear(snr_db), slot_index)
    reports = report_set(group_stats(snr, group_map, LinkParams(config.gamma_gap)), config.epsilon)
    return SlotDraw(slot=slot_index, snr=snr, reports=reports)


def schedule_slot(config: SimConfig, draw: SlotDraw, prior_rates: Optional[np.ndarray] = None) -> SlotMetrics:
    """Allocate, split power and score one drawn slot.

    ``prior_rates`` is the per-user rate delivered in the earlier slots of the run.
    """
    group_map = make_group_map(config.subcarriers, config.group_size, config.grouping == "interleaved")
    reports = draw.reports

    allocator = get_hook(allocator_hooks, config.algo)
    alloc = allocator(reports, FairnessWeights(config.alpha), config.l_value, config.max_iterations, prior_rates)
    power = power_allocate(alloc, config.total_power, group_map)

    # equal per-subcarrier power is already folded into the SNR normalisation
    served = power.subcarrier_power > 0
    user_rates = np.where(served, rate(draw.snr.values, config.gamma_gap), 0.0).sum(axis=1)

    return SlotMetrics(
        slot=draw.slot,
        user_rates=user_rates,
        group_counts=alloc.counts.copy(),
        assigned_fraction=alloc.assigned / alloc.num_groups,
        phase_counts=alloc.phase_counts(),
        no_data=not reports.mask.any(),
        report_fraction=float(reports.mask.mean()),
    )


def run_slot(
    config: SimConfig,
    slot_index: int,
    snr_db: Optional[float] = None,
    prior_rates: Optional[np.ndarray] = None,
) -> SlotMetrics:
    """One scheduling interval; deterministic in (seed, slot_index, snr_db, prior_rates)"""
    return schedule_slot(config, draw_slot(config, slot_index, snr_db), prior_rates)


def run_experiment(config: SimConfig, threads: Optional[int] = None) -> List[AggregateMetrics]:
    """Average T slots per SNR point; one AggregateMetrics per SNR point, in config order.

    Channel draws run on ``threads`` workers. Scheduling walks the slots in
    order, carrying each user's delivered rate into the next slot.
    """
    threads = default_threads() if threads is None else threads
    if threads < 1:
        raise DomainError(f"thread count must be >= 1, got {threads}")

    results = []
    for snr_db in config.snr_db:
        logger.info(f"Running {config.algo}: K={config.users} M={config.subcarriers} N_g={config.group_size} "
                    f"L={config.l_value} at {snr_db:g} dB over {config.slots} slots")

        def work(slot: int) -> SlotDraw:
            return draw_slot(config, slot, snr_db)

        if threads == 1:
            draws = [work(t) for t in range(config.slots)]
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                draws = list(pool.map(work, range(config.slots)))

        delivered = np.zeros(config.users)
        slot_metrics = []
        for draw in draws:
            metrics = schedule_slot(config, draw, delivered)
            delivered = delivered + metrics.user_rates
            slot_metrics.append(metrics)

        result = aggregate(config, snr_db, slot_metrics)
        logger.info(result.summary())
        results.append(result)

    return results


def sweep(configs: List[SimConfig], threads: Optional[int] = None) -> List[AggregateMetrics]:
    """One row per (config, SNR point), in input order"""
    if not configs:
        raise DomainError("sweep needs at least one config")

    rows = []
    for i, config in enumerate(configs, start=1):
        logger.info(f"Sweep point {i}/{len(configs)}")
        rows.extend(run_experiment(config, threads))
    return rows
