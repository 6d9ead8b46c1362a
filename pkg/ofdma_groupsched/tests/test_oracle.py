import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ofdma_groupsched.allocator import UNASSIGNED, FairnessWeights, allocate_variance
from ofdma_groupsched.exceptions import OracleSizeError
from ofdma_groupsched.link import ReportSet
from ofdma_groupsched.oracle import oracle_exhaustive


def test_worked_example_optimum(worked_rates):
    result = oracle_exhaustive(worked_rates, [2, 2])
    assert result.value == pytest.approx(290.0)
    assert result.owner == (0, 0, 1, 1)


def test_unassigned_only_when_capped():
    result = oracle_exhaustive(np.ones((2, 3)), [1, 1])
    assert result.value == pytest.approx(2.0)
    assert result.owner.count(UNASSIGNED) == 1


def test_group_size_scales_value(worked_rates):
    assert oracle_exhaustive(worked_rates, [2, 2], group_size=4).value == pytest.approx(4 * 290.0)


def test_size_limits():
    with pytest.raises(OracleSizeError):
        oracle_exhaustive(np.ones((5, 2)), [1] * 5)
    with pytest.raises(OracleSizeError):
        oracle_exhaustive(np.ones((2, 9)), [9, 9])
    with pytest.raises(OracleSizeError):
        oracle_exhaustive(np.ones((2, 2)), [1])


def _brute_force(rates, caps):
    K, M_g = rates.shape
    best = 0.0
    for owner in itertools.product([UNASSIGNED, *range(K)], repeat=M_g):
        counts = [owner.count(k) for k in range(K)]
        if any(c > cap for c, cap in zip(counts, caps)):
            continue
        best = max(best, sum(rates[k, m] for m, k in enumerate(owner) if k != UNASSIGNED))
    return best


@settings(max_examples=100, deadline=None)
@given(
    st.integers(min_value=1, max_value=3),
    st.integers(min_value=1, max_value=5),
    st.integers(min_value=0, max_value=2**32 - 1),
)
def test_matches_brute_force(users, groups, seed):
    gen = np.random.default_rng(seed)
    rates = gen.exponential(1.0, size=(users, groups))
    caps = gen.integers(0, groups + 1, size=users).tolist()
    assert oracle_exhaustive(rates, caps).value == pytest.approx(_brute_force(rates, caps), rel=1e-12)


@settings(max_examples=300, deadline=None)
@given(
    st.integers(min_value=1, max_value=3),
    st.integers(min_value=1, max_value=6),
    st.integers(min_value=0, max_value=2**32 - 1),
)
def test_variance_allocation_never_beats_oracle(users, groups, seed):
    gen = np.random.default_rng(seed)
    rates = gen.exponential(1.0, size=(users, groups))
    alloc = allocate_variance(ReportSet.report_all(rates), FairnessWeights(gen.integers(1, 5, size=users)))

    assert alloc.total_rate <= oracle_exhaustive(rates, alloc.counts).value + 1e-9
