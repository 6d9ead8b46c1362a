import math

import pytest

from ofdma_groupsched.config import (
    THREADS_ENV,
    SimConfig,
    build_config,
    default_threads,
    load_config_file,
    merge_layers,
    parse_value,
    resolve_values,
    tile_alpha,
)
from ofdma_groupsched.exceptions import ConfigError
from ofdma_groupsched.presets import DEFAULT_GAP, SWEEP_PRESETS, get_preset


def test_defaults_are_headline_parameters():
    config = SimConfig()
    assert (config.users, config.subcarriers, config.group_size) == (8, 128, 4)
    assert config.num_groups == 32
    assert config.gamma_gap == DEFAULT_GAP
    assert config.l_value == 2
    assert config.max_iterations == 32
    assert config.weights.sum() == pytest.approx(1.0)
    assert config.weights[0] == pytest.approx(2 / 19)


def test_group_size_must_divide_subcarriers():
    with pytest.raises(ConfigError) as excinfo:
        SimConfig(group_size=5)
    assert excinfo.value.field == "group_size"
    assert "does not divide" in str(excinfo.value)


@pytest.mark.parametrize(
    "changes, field",
    [
        ({"users": 3}, "alpha"),
        ({"alpha": (1, 1, 1, 1, 1, 1, 1, 0)}, "alpha"),
        ({"slots": 0}, "slots"),
        ({"snr_db": ()}, "snr_db"),
        ({"epsilon": -1.0}, "epsilon"),
        ({"gap": 1.0, "ber": 1e-3}, "ber"),
        ({"gap": 0.0}, "gap"),
        ({"ber": 0.5}, "ber"),
        ({"ber": 0.2}, "ber"),
        ({"l_param": 9}, "l_param"),
        ({"algo": "random"}, "algo"),
        ({"channel_model": "awgn"}, "channel_model"),
        ({"grouping": "random"}, "grouping"),
        ({"total_power": 0.0}, "total_power"),
    ],
)
def test_invalid_configs_name_the_field(changes, field):
    with pytest.raises(ConfigError) as excinfo:
        SimConfig(**changes)
    assert excinfo.value.field == field


def test_ber_sets_gap():
    assert SimConfig(ber=1e-3).gamma_gap == pytest.approx(-math.log(5e-3) / 1.6)


def test_infinite_epsilon_allowed():
    assert math.isinf(SimConfig(epsilon=float("inf")).epsilon)


def test_parse_value_types():
    assert parse_value("users", "12") == 12
    assert parse_value("epsilon", "inf") == float("inf")
    assert parse_value("alpha", "2,1,3") == (2.0, 1.0, 3.0)
    assert parse_value("snr_db", 10) == (10.0,)
    assert parse_value("snr_db", [0, 10]) == (0.0, 10.0)
    assert parse_value("l_param", "auto") is None
    assert parse_value("algo", " superiority ") == "superiority"


def test_parse_value_errors():
    with pytest.raises(ConfigError) as excinfo:
        parse_value("users", "eight")
    assert excinfo.value.field == "users"
    with pytest.raises(ConfigError):
        parse_value("colour", "blue")


def test_key_value_file(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("# headline run\nusers = 4\ngroup-size=2\nalpha = 1,1,2,4  # weights\nber=1e-3\n")
    values = load_config_file(str(path))
    assert values == {"users": 4, "group_size": 2, "alpha": (1.0, 1.0, 2.0, 4.0), "ber": 1e-3}


def test_yaml_file(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("users: 4\nalpha: [1, 1, 2, 4]\nsnr-db: [0, 10]\n")
    assert build_config(config_file=str(path)).snr_db == (0.0, 10.0)


def test_bad_config_files(tmp_path):
    missing = tmp_path / "missing.conf"
    with pytest.raises(ConfigError):
        load_config_file(str(missing))

    bad = tmp_path / "bad.conf"
    bad.write_text("users 4\n")
    with pytest.raises(ConfigError):
        load_config_file(str(bad))

    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigError):
        load_config_file(str(listing))


def test_flags_override_file(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("gap = 2\nslots = 50\n")
    config = build_config({"ber": 1e-3, "slots": 10}, str(path))
    assert config.gap is None
    assert config.ber == 1e-3
    assert config.slots == 10


def test_merge_layers_rejects_gap_and_ber_together():
    with pytest.raises(ConfigError):
        merge_layers({"gap": 1.0, "ber": 1e-3})


def test_unknown_key_rejected():
    with pytest.raises(ConfigError):
        resolve_values({"colour": "blue"})


def test_tile_alpha():
    assert tile_alpha((2.0, 1.0, 3.0), 7) == (2.0, 1.0, 3.0, 2.0, 1.0, 3.0, 2.0)
    assert tile_alpha((2.0, 1.0, 3.0), 2) == (2.0, 1.0)
    with pytest.raises(ConfigError):
        tile_alpha((), 2)


def test_default_threads(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert default_threads() == 1
    monkeypatch.setenv(THREADS_ENV, "6")
    assert default_threads() == 6
    monkeypatch.setenv(THREADS_ENV, "many")
    assert default_threads() == 1


def test_presets():
    names = [p["name"] for p in SWEEP_PRESETS]
    assert names == ["group_size", "l_param", "baselines", "fairness"]
    assert get_preset("fairness")["axis"] == "users"
    with pytest.raises(KeyError):
        get_preset("missing")


def test_to_dict_round_trip():
    config = SimConfig(users=2, alpha=(1, 3), snr_db=(0.0, 5.0))
    assert SimConfig(**config.to_dict()) == config
