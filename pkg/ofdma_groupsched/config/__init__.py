"""
Config - Simulation configuration, config-file loading and environment defaults
"""

import dataclasses
import logging
import math
import os
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np
import yaml

from ofdma_groupsched.exceptions import ConfigError
from ofdma_groupsched.presets import DEFAULT_GAP, DEFAULTS

logger = logging.getLogger(__name__)

THREADS_ENV = "OFDMA_GROUPSCHED_THREADS"

INT_KEYS = ("users", "subcarriers", "group_size", "l_param", "slots", "seed", "max_it", "taps")
FLOAT_KEYS = ("epsilon", "gap", "ber", "total_power", "delay_spread")
LIST_KEYS = ("snr_db", "alpha")
STR_KEYS = ("algo", "channel_model", "grouping")


@dataclass(frozen=True)
class SimConfig:
    """Experiment parameters for one algorithm over a list of SNR points"""

    users: int = DEFAULTS["users"]
    subcarriers: int = DEFAULTS["subcarriers"]
    group_size: int = DEFAULTS["group_size"]
    epsilon: float = DEFAULTS["epsilon"]
    gap: Optional[float] = DEFAULTS["gap"]
    ber: Optional[float] = DEFAULTS["ber"]
    l_param: Optional[int] = DEFAULTS["l_param"]
    alpha: Tuple[float, ...] = DEFAULTS["alpha"]
    slots: int = DEFAULTS["slots"]
    snr_db: Tuple[float, ...] = DEFAULTS["snr_db"]
    algo: str = DEFAULTS["algo"]
    seed: int = DEFAULTS["seed"]
    total_power: float = DEFAULTS["total_power"]
    max_it: Optional[int] = DEFAULTS["max_it"]
    channel_model: str = DEFAULTS["channel_model"]
    grouping: str = DEFAULTS["grouping"]
    taps: int = DEFAULTS["taps"]
    delay_spread: float = DEFAULTS["delay_spread"]

    def __post_init__(self):
        from ofdma_groupsched.hooks import allocator_hooks, channel_hooks

        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))

        if self.users < 1:
            raise ConfigError(f"users must be >= 1, got {self.users}", field="users")
        if self.subcarriers < 1:
            raise ConfigError(f"subcarriers must be >= 1, got {self.subcarriers}", field="subcarriers")
        if self.group_size < 1 or self.subcarriers % self.group_size:
            raise ConfigError(
                f"group-size {self.group_size} does not divide subcarriers {self.subcarriers}",
                field="group_size",
            )
        if self.slots < 1:
            raise ConfigError(f"slots must be >= 1, got {self.slots}", field="slots")
        if not self.snr_db:
            raise ConfigError("snr-db list is empty", field="snr_db")
        if len(self.alpha) != self.users:
            raise ConfigError(
                f"alpha has {len(self.alpha)} weights but users is {self.users}", field="alpha"
            )
        if any(a <= 0 or not math.isfinite(a) for a in self.alpha):
            raise ConfigError("alpha weights must be positive", field="alpha")
        if math.isnan(self.epsilon) or self.epsilon < 0:
            raise ConfigError(f"epsilon must be >= 0, got {self.epsilon}", field="epsilon")
        if self.gap is not None and self.ber is not None:
            raise ConfigError("give either gap or ber, not both", field="ber")
        if self.gap is not None and not self.gap > 0:
            raise ConfigError(f"gap must be > 0, got {self.gap}", field="gap")
        if self.l_param is not None and not 1 <= self.l_param <= self.users:
            raise ConfigError(f"l-param must be in [1, {self.users}], got {self.l_param}", field="l_param")
        if self.max_it is not None and self.max_it < 0:
            raise ConfigError(f"max-it must be >= 0, got {self.max_it}", field="max_it")
        if not self.total_power > 0:
            raise ConfigError(f"total-power must be > 0, got {self.total_power}", field="total_power")
        if self.algo not in allocator_hooks:
            raise ConfigError(f"unknown algo '{self.algo}'", field="algo")
        if self.channel_model not in channel_hooks:
            raise ConfigError(f"unknown channel-model '{self.channel_model}'", field="channel_model")
        if self.grouping not in ("interleaved", "contiguous"):
            raise ConfigError(f"unknown grouping '{self.grouping}'", field="grouping")
        if self.taps < 1:
            raise ConfigError(f"taps must be >= 1, got {self.taps}", field="taps")
        if not self.delay_spread > 0:
            raise ConfigError(f"delay-spread must be > 0, got {self.delay_spread}", field="delay_spread")

        # gap validity is checked eagerly so a bad BER fails at parse time
        self.gamma_gap

    @property
    def num_groups(self) -> int:
        return self.subcarriers // self.group_size

    @property
    def gamma_gap(self) -> float:
        from ofdma_groupsched.exceptions import DomainError
        from ofdma_groupsched.link import snr_gap_from_ber

        if self.gap is not None:
            return float(self.gap)
        if self.ber is not None:
            try:
                gap = snr_gap_from_ber(self.ber)
            except DomainError as e:
                raise ConfigError(str(e), field="ber")
            if not gap > 0:
                raise ConfigError(f"ber {self.ber} gives a non-positive SNR gap", field="ber")
            return gap
        return DEFAULT_GAP

    @property
    def l_value(self) -> int:
        from ofdma_groupsched.allocator import default_l

        return self.l_param if self.l_param is not None else default_l(self.users)

    @property
    def max_iterations(self) -> int:
        return self.max_it if self.max_it is not None else self.num_groups

    @property
    def weights(self) -> np.ndarray:
        alpha = np.asarray(self.alpha, dtype=float)
        return alpha / alpha.sum()

    def replace(self, **changes) -> "SimConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        data = dataclasses.asdict(self)
        data["alpha"] = list(self.alpha)
        data["snr_db"] = list(self.snr_db)
        return data


def normalize_key(key: str) -> str:
    return key.strip().lstrip("-").replace("-", "_")


def parse_value(key: str, raw: Any) -> Any:
    """Convert a raw file/flag value into the SimConfig field type"""
    if raw is None:
        return None
    if isinstance(raw, str):
        raw = raw.strip()
        if raw.lower() in ("", "none", "null", "auto"):
            return None

    try:
        if key in INT_KEYS:
            return int(raw)
        if key in FLOAT_KEYS:
            return float(raw)
        if key in LIST_KEYS:
            if isinstance(raw, (list, tuple)):
                return tuple(float(v) for v in raw)
            if isinstance(raw, (int, float)):
                return (float(raw),)
            return tuple(float(v) for v in raw.split(",") if v.strip())
        if key in STR_KEYS:
            return str(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"invalid value for {key.replace('_', '-')}: {raw!r}", field=key)

    raise ConfigError(f"unknown config key '{key}'", field=key)


def load_config_file(path: str) -> Dict[str, Any]:
    """Read key=value (or YAML) configuration into a field dict"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}", field="config")

    if path.endswith((".yaml", ".yml")):
        try:
            raw = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"invalid YAML in {path}: {e}", field="config")
        if not isinstance(raw, dict):
            raise ConfigError(f"{path} must contain a mapping", field="config")
        items = raw.items()
    else:
        items = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value", field="config")
            key, value = line.split("=", 1)
            items.append((key, value))

    values = {}
    for key, value in items:
        key = normalize_key(str(key))
        values[key] = parse_value(key, value)

    logger.debug(f"Loaded {len(values)} config values from {path}")
    return values


def merge_layers(*layers: Dict[str, Any]) -> Dict[str, Any]:
    """Merge config layers, later layers winning; gap and ber replace each other"""
    merged: Dict[str, Any] = {}
    for layer in layers:
        layer = {k: v for k, v in layer.items() if v is not None}
        if "gap" in layer and "ber" in layer:
            raise ConfigError("give either gap or ber, not both", field="ber")
        if "gap" in layer:
            merged.pop("ber", None)
        if "ber" in layer:
            merged.pop("gap", None)
        merged.update(layer)
    return merged


def resolve_values(overrides: Dict[str, Any] = None, config_file: str = None) -> Dict[str, Any]:
    """Field values from config file then explicit overrides; presets fill the rest at construction"""
    file_values = load_config_file(config_file) if config_file else {}
    values = merge_layers(file_values, overrides or {})

    known = {f.name for f in dataclasses.fields(SimConfig)}
    unknown = set(values) - known
    if unknown:
        name = sorted(unknown)[0]
        raise ConfigError(f"unknown config key '{name}'", field=name)
    return values


def build_config(overrides: Dict[str, Any] = None, config_file: str = None) -> SimConfig:
    """Presets, then config file, then explicit overrides"""
    return SimConfig(**resolve_values(overrides, config_file))


def tile_alpha(alpha: Tuple[float, ...], users: int) -> Tuple[float, ...]:
    """Repeat a weight pattern cyclically to cover `users` entries"""
    if not alpha:
        raise ConfigError("alpha is empty", field="alpha")
    return tuple(alpha[k % len(alpha)] for k in range(users))


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        logger.warning(f"Ignoring non-integer {THREADS_ENV}={raw!r}")
        return 1
