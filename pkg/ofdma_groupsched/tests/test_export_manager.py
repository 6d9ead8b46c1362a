import json

import pytest

from ofdma_groupsched.export_manager import CSV_COLUMNS, ExportManager, RunManifest
from ofdma_groupsched.sim import run_experiment

HEADER = (
    "algo,snr_db,users,subcarriers,group_size,epsilon,gap,l_param,slots,seed,"
    "throughput_per_subcarrier,jain_index,assigned_fraction"
)


@pytest.fixture
def results(small_config):
    return run_experiment(small_config.replace(slots=5))


@pytest.fixture
def manifest(small_config):
    return RunManifest(command="run", configs=[small_config.to_dict()], seed=small_config.seed)


def _body(text):
    return [line for line in text.split("\n") if line and not line.startswith("#")]


def test_header_and_share_columns(results, manifest):
    text = ExportManager().render_csv(results, manifest)
    lines = _body(text)
    assert lines[0] == HEADER + ",share_user_0,share_user_1,share_user_2,share_user_3"
    assert len(lines) == 2
    assert lines[1].startswith("variance,10,4,32,4,0.5,1,1,5,7,")
    assert ",".join(CSV_COLUMNS) == HEADER


def test_manifest_lines_precede_header(results, manifest):
    text = ExportManager().render_csv(results, manifest)
    lines = text.split("\n")
    assert lines[0] == "# tool: ofdma-groupsched"
    assert lines[1].startswith("# version: ")
    assert "# seed: 7" in lines
    assert lines[4].startswith("# config[0]: {")
    assert lines[5] == _body(text)[0]
    assert "\r" not in text
    assert "timestamp" not in text


def test_sweep_pads_share_columns(small_config):
    narrow = run_experiment(small_config.replace(users=2, alpha=(1, 1), slots=3))
    wide = run_experiment(small_config.replace(slots=3))
    manifest = RunManifest(command="sweep", configs=[], seed=7)
    lines = _body(ExportManager().render_csv(narrow + wide, manifest))

    assert lines[0].endswith("share_user_3")
    assert lines[1].endswith(",NA,NA")


def test_no_data_jain_written_as_na(small_config, manifest):
    results = run_experiment(small_config.replace(epsilon=0.0, slots=2))
    row = _body(ExportManager().render_csv(results, manifest))[1].split(",")
    assert row[CSV_COLUMNS.index("jain_index")] == "NA"
    assert row[CSV_COLUMNS.index("throughput_per_subcarrier")] == "0"


def test_export_to_file_and_manifest(tmp_path, results, manifest):
    exporter = ExportManager()
    csv_path = tmp_path / "out.csv"
    json_path = tmp_path / "out.json"

    written = exporter.export_csv(results, manifest, str(csv_path))
    assert written["success"]
    assert written["rows"] == 1
    assert csv_path.read_text().startswith("# tool: ofdma-groupsched\n")

    sidecar = exporter.export_manifest(manifest, str(json_path))
    assert sidecar["success"]
    data = json.loads(json_path.read_text())
    assert data["seed"] == 7
    assert data["outputs"] == [str(csv_path)]
    assert "timestamp" in data


def test_export_failure_is_reported(tmp_path, results, manifest):
    written = ExportManager().export_csv(results, manifest, str(tmp_path / "missing" / "out.csv"))
    assert not written["success"]
    assert "error" in written
