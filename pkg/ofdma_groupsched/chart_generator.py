"""
Chart Generator - Plot-data series for throughput, fairness and user-share figures
"""

import logging
from typing import Dict, List

import pandas as pd

from ofdma_groupsched.export_manager import FLOAT_FORMAT, NA_MARKER
from ofdma_groupsched.metrics import AggregateMetrics

logger = logging.getLogger(__name__)

AXES = ("ng", "l", "snr", "users")
METRICS = ("throughput", "jain", "shares")


def axis_value(result: AggregateMetrics, axis: str) -> float:
    """The swept parameter of one aggregate row"""
    config = result.config
    if axis == "ng":
        return config.group_size
    if axis == "l":
        return config.l_value
    if axis == "snr":
        return result.snr_db
    if axis == "users":
        return config.users
    raise ValueError(f"unknown sweep axis '{axis}'")


def _series_name(result: AggregateMetrics, axis: str, multi_snr: bool) -> str:
    if axis != "snr" and multi_snr:
        return f"{result.algo}@{result.snr_db:g}dB"
    return result.algo


class ChartGenerator:
    """Chart descriptions (labels + datasets) built from sweep rows"""

    def __init__(self, axis: str):
        if axis not in AXES:
            raise ValueError(f"unknown sweep axis '{axis}'")
        self.axis = axis

    def _grouped(self, results: List[AggregateMetrics]) -> Dict[str, List[AggregateMetrics]]:
        multi_snr = len({r.snr_db for r in results}) > 1
        grouped: Dict[str, List[AggregateMetrics]] = {}
        for result in results:
            grouped.setdefault(_series_name(result, self.axis, multi_snr), []).append(result)
        return grouped

    def generate_throughput(self, results: List[AggregateMetrics]) -> Dict:
        """Throughput per subcarrier against the swept parameter, one line per algorithm"""
        datasets = []
        for name, rows in self._grouped(results).items():
            datasets.append({
                "label": name,
                "x": [axis_value(r, self.axis) for r in rows],
                "data": [r.throughput_per_subcarrier for r in rows],
            })
        return {
            "type": "line",
            "title": f"Throughput per subcarrier vs {self.axis}",
            "y_label": "bit/s/Hz",
            "datasets": datasets,
        }

    def generate_jain(self, results: List[AggregateMetrics]) -> Dict:
        datasets = []
        for name, rows in self._grouped(results).items():
            datasets.append({
                "label": name,
                "x": [axis_value(r, self.axis) for r in rows],
                "data": [r.jain_index for r in rows],
            })
        return {
            "type": "line",
            "title": f"Modified Jain index vs {self.axis}",
            "y_label": "F_I",
            "datasets": datasets,
        }

    def generate_shares(self, results: List[AggregateMetrics]) -> Dict:
        """Normalised per-user throughput next to the target alpha share, per user"""
        datasets = []
        multi = len(results) > 1
        for result in results:
            prefix = f"{result.algo}@{self.axis}={axis_value(result, self.axis):g}:" if multi else ""
            users = list(range(len(result.shares)))
            datasets.append({
                "label": f"{prefix}share",
                "x": users,
                "data": [float(s) for s in result.shares],
            })
            datasets.append({
                "label": f"{prefix}alpha",
                "x": users,
                "data": [float(a) for a in result.config.weights],
            })
        return {
            "type": "bar",
            "title": "Per-user throughput share",
            "y_label": "share",
            "datasets": datasets,
        }

    def generate(self, metric: str, results: List[AggregateMetrics]) -> Dict:
        if metric == "throughput":
            return self.generate_throughput(results)
        if metric == "jain":
            return self.generate_jain(results)
        if metric == "shares":
            return self.generate_shares(results)
        raise ValueError(f"unknown plot metric '{metric}'")

    def to_frame(self, chart: Dict) -> pd.DataFrame:
        """Long format: one (series, x, y) row per point"""
        records = []
        for dataset in chart["datasets"]:
            for x, y in zip(dataset["x"], dataset["data"]):
                records.append({"series": dataset["label"], "x": x, "y": y})
        return pd.DataFrame(records, columns=["series", "x", "y"])

    def export_plot_data(self, metric: str, results: List[AggregateMetrics], file_path: str) -> Dict:
        try:
            chart = self.generate(metric, results)
            df = self.to_frame(chart)
            df.to_csv(file_path, index=False, float_format=FLOAT_FORMAT, na_rep=NA_MARKER, lineterminator="\n")

            return {
                "success": True,
                "file_path": file_path,
                "series": len(chart["datasets"]),
                "points": len(df),
            }

        except Exception as e:
            logger.error(f"Error writing plot data: {str(e)}")
            return {"success": False, "error": str(e)}


def export_plot_data(results: List[AggregateMetrics], axis: str, metric: str, file_path: str) -> Dict:
    generator = ChartGenerator(axis)
    return generator.export_plot_data(metric, results, file_path)
