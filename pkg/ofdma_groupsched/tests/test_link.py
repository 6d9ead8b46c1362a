import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ofdma_groupsched.channel import SnrMatrix, make_group_map
from ofdma_groupsched.exceptions import DomainError
from ofdma_groupsched.link import (
    LinkParams,
    ReportSet,
    group_stats,
    rate,
    report_set,
    sample_variance,
    snr_gap_from_ber,
)


def test_snr_gap_from_ber():
    assert snr_gap_from_ber(0.2) == 0.0
    # -ln(5e-3) / 1.6
    assert snr_gap_from_ber(1e-3) == pytest.approx(3.3114, abs=1e-4)
    assert snr_gap_from_ber(math.exp(-1.6) / 5) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("ber", [0.0, -1e-3, 0.25, 1.0, float("nan")])
def test_snr_gap_rejects_out_of_range(ber):
    with pytest.raises(DomainError):
        snr_gap_from_ber(ber)


def test_link_params():
    assert LinkParams.from_ber(1e-3).gamma_gap == pytest.approx(snr_gap_from_ber(1e-3))
    with pytest.raises(DomainError):
        LinkParams(0.0)
    with pytest.raises(DomainError):
        LinkParams.from_ber(0.2)


def test_rate_values():
    assert rate(0.0, 2.5) == 0.0
    assert rate(3.0, 1.0) == pytest.approx(2.0)
    assert rate(15.0, 1.0) == pytest.approx(4.0)
    np.testing.assert_allclose(rate(np.array([0.0, 3.0, 15.0]), 1.0), [0.0, 2.0, 4.0])


@given(
    st.floats(min_value=0, max_value=1e6),
    st.floats(min_value=0, max_value=1e6),
    st.floats(min_value=0.01, max_value=100),
)
def test_rate_monotone_in_snr(a, b, gap):
    lo, hi = sorted((a, b))
    assert rate(lo, gap) <= rate(hi, gap)
    if hi > 1e-6:
        assert rate(hi, gap) > 0


@given(st.floats(min_value=1e-3, max_value=1e6), st.floats(min_value=0.01, max_value=10))
def test_rate_decreasing_in_gap(snr, gap):
    assert rate(snr, gap * 2) < rate(snr, gap)


def test_sample_variance_worked_values():
    assert sample_variance([90, 60, 20, 10]) == pytest.approx(1366.6667, abs=1e-3)
    assert sample_variance([100, 90, 70, 70]) == pytest.approx(225.0)
    assert sample_variance([3.3, 3.3, 3.3]) == 0.0


def test_sample_variance_needs_two_values():
    with pytest.raises(DomainError):
        sample_variance([1.0])


values = st.lists(st.floats(min_value=-1e3, max_value=1e3), min_size=2, max_size=32)


@given(values, st.floats(min_value=-1e3, max_value=1e3))
def test_variance_translation_invariant(x, c):
    x = np.array(x)
    assert sample_variance(x + c) == pytest.approx(sample_variance(x), rel=1e-9, abs=1e-6)


@given(values, st.floats(min_value=-100, max_value=100))
def test_variance_scaling(x, a):
    x = np.array(x)
    assert sample_variance(a * x) == pytest.approx(a * a * sample_variance(x), rel=1e-9, abs=1e-6)


def _stats_for(gains, epsilon=0.5):
    snr = SnrMatrix(values=np.array([gains], dtype=float), mean_snr=1.0)
    stats = group_stats(snr, make_group_map(len(gains), len(gains)), LinkParams(1.0))
    return stats, report_set(stats, epsilon)


def test_group_stats_two_values():
    stats, reports = _stats_for([4.0, 6.0])
    assert stats.mean_gain[0, 0] == pytest.approx(5.0)
    assert stats.variance[0, 0] == pytest.approx(2.0)
    assert reports.mask[0, 0]


def test_report_threshold_rejects_spread_group():
    stats, reports = _stats_for([1.0, 9.0])
    assert stats.variance[0, 0] == pytest.approx(32.0)
    assert not reports.mask[0, 0]


def test_single_subcarrier_groups_have_zero_variance():
    snr = SnrMatrix(values=np.array([[1.0, 5.0, 2.0]]), mean_snr=1.0)
    stats = group_stats(snr, make_group_map(3, 1), LinkParams(1.0))
    assert np.all(stats.variance == 0)
    np.testing.assert_allclose(stats.mean_gain, [[1.0, 5.0, 2.0]])
    assert report_set(stats, 0.0).mask.all()


def test_group_stats_matches_recomputation(rng):
    values = rng.exponential(10.0, size=(3, 24))
    group_map = make_group_map(24, 4)
    stats = group_stats(SnrMatrix(values=values, mean_snr=10.0), group_map, LinkParams(2.0))

    for k in range(3):
        for m in range(group_map.num_groups):
            g = values[k, group_map.membership[m]]
            assert stats.mean_gain[k, m] == pytest.approx(g.mean(), rel=1e-12)
            assert stats.variance[k, m] == pytest.approx(np.var(g, ddof=1), rel=1e-12)
            assert stats.mean_rate[k, m] == pytest.approx(np.mean(np.log2(1 + g / 2.0)), rel=1e-12)


def test_report_all_and_report_none(rng):
    values = rng.exponential(1.0, size=(2, 16))
    values[0, [0, 8]] = 3.0
    stats = group_stats(SnrMatrix(values=values, mean_snr=1.0), make_group_map(16, 2), LinkParams(1.0))

    assert report_set(stats, float("inf")).mask.all()

    constant_only = report_set(stats, 0.0)
    assert constant_only.mask[0, 0]
    assert constant_only.mask.sum() == 1


def test_report_set_rejects_bad_threshold():
    stats, _ = _stats_for([1.0, 2.0])
    with pytest.raises(DomainError):
        report_set(stats, -0.1)
    with pytest.raises(DomainError):
        report_set(stats, float("nan"))


def test_report_set_accessors():
    reports = ReportSet(mask=np.array([[True, False, True], [True, True, False]]), mean_rate=np.ones((2, 3)))
    assert reports.users == 2
    assert reports.num_groups == 3
    assert reports.reported(0) == [0, 2]
    assert reports.reporters(0) == [0, 1]
    assert reports.reporters(2) == [0]
