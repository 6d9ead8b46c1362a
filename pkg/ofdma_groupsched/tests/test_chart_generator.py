import pandas as pd
import pytest

from ofdma_groupsched.chart_generator import ChartGenerator, axis_value, export_plot_data
from ofdma_groupsched.sim import sweep


@pytest.fixture
def ng_rows(small_config):
    configs = [small_config.replace(algo=algo, group_size=n, slots=3) for algo in ("variance", "best_gain") for n in (1, 4)]
    return sweep(configs)


def test_axis_value(ng_rows):
    assert [axis_value(r, "ng") for r in ng_rows] == [1, 4, 1, 4]
    assert axis_value(ng_rows[0], "snr") == 10.0
    assert axis_value(ng_rows[0], "users") == 4
    with pytest.raises(ValueError):
        axis_value(ng_rows[0], "power")


def test_throughput_series_per_algorithm(ng_rows):
    chart = ChartGenerator("ng").generate("throughput", ng_rows)
    assert [d["label"] for d in chart["datasets"]] == ["variance", "best_gain"]
    assert chart["datasets"][0]["x"] == [1, 4]


def test_shares_pair_each_result_with_weights(ng_rows):
    chart = ChartGenerator("ng").generate("shares", ng_rows[:1])
    labels = [d["label"] for d in chart["datasets"]]
    assert labels == ["share", "alpha"]
    assert sum(chart["datasets"][1]["data"]) == pytest.approx(1.0)


def test_long_format_plot_data(tmp_path, ng_rows):
    path = tmp_path / "plot.csv"
    result = export_plot_data(ng_rows, "ng", "jain", str(path))
    assert result["success"]

    df = pd.read_csv(path)
    assert df.columns.tolist() == ["series", "x", "y"]
    assert len(df) == 4
    assert set(df["series"]) == {"variance", "best_gain"}


def test_unknown_axis_and_metric(ng_rows):
    with pytest.raises(ValueError):
        ChartGenerator("power")
    with pytest.raises(ValueError):
        ChartGenerator("ng").generate("latency", ng_rows)
