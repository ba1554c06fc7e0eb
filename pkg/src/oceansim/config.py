"""Scenario configuration and the key = value file format.

A scenario file is flat text: one `key = value` per line, `#` starts a
comment, blank lines are ignored.  Keys match ScenarioConfig field
names exactly; unknown keys and unparseable values are hard errors
carrying the offending line number, because a silently ignored typo in
an experiment config costs hours of compute.
"""

from dataclasses import dataclass, fields, replace

from . import adversary, ocean


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    # clock and population
    sim_duration: float = 1000.0
    n_nodes: int = 40
    # arena and movement
    arena_width: float = 1500.0
    arena_height: float = 300.0
    pause_time: float = 0.0
    max_speed: float = 20.0
    min_speed: float = 0.1
    # radio
    tx_power: float = 0.281838
    gain_tx: float = 1.0
    gain_rx: float = 1.0
    height_tx: float = 1.5
    height_rx: float = 1.5
    wavelength: float = 0.328
    rx_threshold: float = 3.652e-10
    link_rate: float = 2.0e6
    # energy
    initial_energy: float = 5.0
    p_tx: float = 31.32e-3
    p_rx: float = 35.28e-3
    p_idle: float = 712e-6
    p_sleep: float = 144e-9
    # traffic
    n_connections: int = 20
    send_rate: float = 4.0              # packets per second per connection
    data_size: int = 512
    start_window: float = 10.0
    # source routing
    buffer_capacity: int = 64
    buffer_timeout: float = 30.0
    rreq_retry_base: float = 0.5
    rreq_retry_factor: float = 2.0
    rreq_max_retries: int = 3
    rreq_hop_limit: int = 16
    control_size: int = 64
    discovery_holdoff: float = 1.0
    discovery_holdoff_cap: float = 2.0
    # adversaries
    malicious_fraction: float = 0.0
    adversary_kind: str = adversary.MISLEADING
    drop_prob: float = 1.0
    protect_endpoints: bool = True
    # cooperation enforcement
    ocean_enabled: bool = True
    faulty_threshold: float = -40.0
    second_chance_timeout: float = 30.0
    reentry_rating: float = -30.0
    rating_positive: float = 1.0
    rating_negative: float = -2.0
    watch_timeout: float = 1e-3
    chip_scheme: str = ocean.PESSIMISTIC
    chip_initial: float = 50.0
    chip_debit: float = 0.0
    chip_credit: float = 1.0
    chip_accrual_rate: float = 0.1
    chip_cap: float = 100.0
    chip_tick_interval: float = 10.0
    # experiment batching
    base_seed: int = 1
    n_runs: int = 5

    def validate(self):
        if self.sim_duration <= 0:
            raise ConfigError(f"sim_duration must be positive: {self.sim_duration}")
        if self.n_nodes < 2:
            raise ConfigError(f"need at least two nodes: {self.n_nodes}")
        if self.arena_width <= 0 or self.arena_height <= 0:
            raise ConfigError("arena dimensions must be positive")
        if self.pause_time < 0:
            raise ConfigError(f"pause_time must be >= 0: {self.pause_time}")
        if not 0 < self.min_speed <= self.max_speed:
            raise ConfigError(
                f"need 0 < min_speed <= max_speed: {self.min_speed}, {self.max_speed}")
        if not 0.0 <= self.malicious_fraction <= 1.0:
            raise ConfigError(
                f"malicious_fraction out of [0, 1]: {self.malicious_fraction}")
        if self.adversary_kind not in adversary.KINDS:
            raise ConfigError(f"unknown adversary_kind: {self.adversary_kind!r}")
        if self.chip_scheme not in (ocean.OPTIMISTIC, ocean.PESSIMISTIC):
            raise ConfigError(f"unknown chip_scheme: {self.chip_scheme!r}")
        if self.data_size <= 0 or self.control_size <= 0:
            raise ConfigError("packet sizes must be positive")
        if self.send_rate <= 0:
            raise ConfigError(f"send_rate must be positive: {self.send_rate}")
        if self.second_chance_timeout <= 0:
            raise ConfigError(
                f"second_chance_timeout must be positive: {self.second_chance_timeout}")
        if self.n_runs < 1:
            raise ConfigError(f"n_runs must be at least 1: {self.n_runs}")
        return self

    def to_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


_FIELD_TYPES = {
    f.name: f.type if isinstance(f.type, str) else f.type.__name__
    for f in fields(ScenarioConfig)
}

_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


def _coerce(key, raw, lineno):
    kind = _FIELD_TYPES[key]
    try:
        if kind == "bool":
            low = raw.lower()
            if low in _TRUE:
                return True
            if low in _FALSE:
                return False
            raise ValueError(raw)
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        return raw
    except ValueError:
        raise ConfigError(
            f"line {lineno}: cannot parse {key} value {raw!r} as {kind}") from None


def parse_scenario(text, base=None):
    """ScenarioConfig from file text, applied over base (or the defaults)."""
    overrides = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in body.split("=", 1))
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if not raw:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        overrides[key] = _coerce(key, raw, lineno)
    cfg = replace(base or ScenarioConfig(), **overrides)
    return cfg.validate()


def load_scenario(path, base=None):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scenario(fh.read(), base=base)
