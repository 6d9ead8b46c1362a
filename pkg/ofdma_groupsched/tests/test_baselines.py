import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ofdma_groupsched.allocator import UNASSIGNED, Allocation, FairnessWeights, Phase
from ofdma_groupsched.baselines import (
    allocate_best_gain,
    allocate_decentralized,
    allocate_superiority,
    run_best_gain,
    swap_improve,
)
from ofdma_groupsched.link import ReportSet


def test_best_gain_with_cap(worked_rates):
    alloc = allocate_best_gain(worked_rates, cap=2)
    assert alloc.owner.tolist() == [1, 1, 0, 0]
    assert alloc.total_rate == pytest.approx(220.0, abs=1e-9)


def test_best_gain_uncapped(worked_rates):
    alloc = allocate_best_gain(worked_rates)
    assert alloc.owner.tolist() == [1, 1, 1, 1]
    assert alloc.total_rate == pytest.approx(330.0)


def test_best_gain_stops_when_everyone_capped():
    alloc = allocate_best_gain(np.ones((2, 5)), cap=2)
    assert alloc.owner.tolist() == [0, 0, 1, 1, UNASSIGNED]


def test_decentralized_disjoint_bests():
    rates = np.array([[9.0, 1.0], [1.0, 9.0]])
    alloc = allocate_decentralized(rates, FairnessWeights(np.ones(2)))
    assert alloc.owner.tolist() == [0, 1]


def test_decentralized_conflict_goes_to_higher_rate():
    rates = np.array([[5.0], [7.0]])
    alloc = allocate_decentralized(rates, FairnessWeights(np.array([1.0, 1.0])))
    # quotas floor(0.5) are zero for both users, so nobody claims
    assert alloc.owner.tolist() == [UNASSIGNED]

    rates = np.array([[5.0, 1.0], [7.0, 2.0]])
    alloc = allocate_decentralized(rates, FairnessWeights(np.ones(2)))
    assert alloc.owner.tolist() == [1, 0]


def test_decentralized_worked_example(worked_rates):
    alloc = allocate_decentralized(worked_rates, FairnessWeights(np.ones(2)))
    # user 1 wins both contested claims, user 0 is left with the two weak groups
    assert alloc.owner.tolist() == [1, 1, 0, 0]
    assert alloc.total_rate == pytest.approx(220.0)


def test_swap_two_by_two():
    rates = np.array([[10.0, 1.0], [9.0, 8.0]])
    start = Allocation.empty(2, 2)
    start.assign(1, 0, rates[0, 1], Phase.BASELINE)
    start.assign(0, 1, rates[1, 0], Phase.BASELINE)
    assert start.total_rate == pytest.approx(10.0)

    trace = []
    improved = swap_improve(start, rates, trace=trace)
    assert improved.owner.tolist() == [0, 1]
    assert improved.total_rate == pytest.approx(18.0)
    assert trace == pytest.approx([10.0, 18.0])
    # input is left untouched
    assert start.owner.tolist() == [1, 0]


def test_swap_fixed_point_unchanged():
    rates = np.array([[10.0, 1.0], [9.0, 8.0]])
    optimal = Allocation.empty(2, 2)
    optimal.assign(0, 0, 10.0, Phase.BASELINE)
    optimal.assign(1, 1, 8.0, Phase.BASELINE)
    assert swap_improve(optimal, rates).owner.tolist() == [0, 1]


def test_superiority_beats_best_gain_on_worked_example(worked_rates):
    alloc = allocate_superiority(worked_rates, FairnessWeights(np.ones(2)))
    assert alloc.total_rate >= 220.0
    assert alloc.total_rate == pytest.approx(290.0)
    assert alloc.counts.tolist() == [2, 2]


def test_hook_adapter_ignores_report_mask(worked_rates):
    reports = ReportSet(mask=np.zeros((2, 4), dtype=bool), mean_rate=worked_rates)
    alloc = run_best_gain(reports, FairnessWeights(np.ones(2)), 1, 4)
    assert alloc.assigned == 4


@settings(max_examples=200, deadline=None)
@given(
    st.integers(min_value=2, max_value=4),
    st.integers(min_value=2, max_value=8),
    st.integers(min_value=0, max_value=2**32 - 1),
)
def test_swap_search_monotone(users, groups, seed):
    gen = np.random.default_rng(seed)
    rates = gen.exponential(1.0, size=(users, groups))
    weights = FairnessWeights(gen.integers(1, 5, size=users).astype(float))

    initial = allocate_decentralized(rates, weights)
    trace = []
    final = swap_improve(initial, rates, trace=trace)

    assert all(b > a for a, b in zip(trace, trace[1:]))
    assert final.total_rate >= initial.total_rate - 1e-12
    assert final.counts.tolist() == initial.counts.tolist()
    assert final.total_rate == pytest.approx(allocate_superiority(rates, weights).total_rate)
