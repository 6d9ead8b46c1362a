"""
Export Manager - Aggregate CSV emission with embedded run manifest
"""

import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Dict, List, Optional

import pandas as pd

from ofdma_groupsched import __version__
from ofdma_groupsched.metrics import AggregateMetrics

logger = logging.getLogger(__name__)

TOOL_NAME = "ofdma-groupsched"

CSV_COLUMNS = [
    "algo",
    "snr_db",
    "users",
    "subcarriers",
    "group_size",
    "epsilon",
    "gap",
    "l_param",
    "slots",
    "seed",
    "throughput_per_subcarrier",
    "jain_index",
    "assigned_fraction",
]

FLOAT_FORMAT = "%.12g"
NA_MARKER = "NA"


@dataclass
class RunManifest:
    """Provenance of one CLI invocation"""

    command: str
    configs: List[Dict]
    seed: int
    version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))
    outputs: List[str] = field(default_factory=list)
    statistics: List[Dict] = field(default_factory=list)

    def comment_lines(self) -> List[str]:
        """Deterministic subset embedded in CSV output (no timestamp)"""
        lines = [
            f"# tool: {TOOL_NAME}",
            f"# version: {self.version}",
            f"# command: {self.command}",
            f"# seed: {self.seed}",
        ]
        for i, config in enumerate(self.configs):
            lines.append(f"# config[{i}]: {json.dumps(config, sort_keys=True)}")
        return lines


class ExportManager:
    """Turn aggregate results into the fixed-schema CSV"""

    def to_row(self, result: AggregateMetrics) -> Dict:
        config = result.config
        row = {
            "algo": config.algo,
            "snr_db": result.snr_db,
            "users": config.users,
            "subcarriers": config.subcarriers,
            "group_size": config.group_size,
            "epsilon": config.epsilon,
            "gap": config.gamma_gap,
            "l_param": config.l_value,
            "slots": result.slots,
            "seed": config.seed,
            "throughput_per_subcarrier": result.throughput_per_subcarrier,
            "jain_index": result.jain_index,
            "assigned_fraction": result.assigned_fraction,
        }
        for k, share in enumerate(result.shares):
            row[f"share_user_{k}"] = float(share)
        return row

    def to_frame(self, results: List[AggregateMetrics]) -> pd.DataFrame:
        users = max((len(r.shares) for r in results), default=0)
        columns = CSV_COLUMNS + [f"share_user_{k}" for k in range(users)]
        return pd.DataFrame([self.to_row(r) for r in results], columns=columns)

    def render_csv(self, results: List[AggregateMetrics], manifest: RunManifest) -> str:
        df = self.to_frame(results)
        body = df.to_csv(index=False, float_format=FLOAT_FORMAT, na_rep=NA_MARKER, lineterminator="\n")
        return "\n".join(manifest.comment_lines()) + "\n" + body

    def export_csv(self, results: List[AggregateMetrics], manifest: RunManifest, file_path: Optional[str] = None) -> Dict:
        """Write CSV to ``file_path`` or stdout"""
        try:
            text = self.render_csv(results, manifest)

            if file_path:
                with open(file_path, "w", encoding="utf-8", newline="") as f:
                    f.write(text)
                manifest.outputs.append(os.path.abspath(file_path))
            else:
                sys.stdout.write(text)
                sys.stdout.flush()

            return {
                "success": True,
                "file_path": file_path,
                "rows": len(results),
                "format": "csv",
            }

        except Exception as e:
            logger.error(f"Error exporting CSV: {str(e)}")
            return {"success": False, "error": str(e)}

    def export_manifest(self, manifest: RunManifest, file_path: str) -> Dict:
        """Full manifest, timestamp included, as JSON"""
        try:
            with open(file_path, "w", encoding="utf-8", newline="") as f:
                json.dump(asdict(manifest), f, indent=2, sort_keys=True)
                f.write("\n")

            return {"success": True, "file_path": file_path, "format": "json"}

        except Exception as e:
            logger.error(f"Error writing manifest: {str(e)}")
            return {"success": False, "error": str(e)}
