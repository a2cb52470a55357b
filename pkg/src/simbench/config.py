"""Bench configuration: one dataclass, mirrored by a sectioned INI file.

Every tunable default lives here and in ``configs/default.ini``; the two
are kept in lockstep by a parity test.  Unknown sections or keys are
rejected so config typos fail loudly instead of silently keeping a
default.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Union

from .errors import ConfigError
from .firmware import ControlLaw, PidGains
from .plant import PlantParams
from .sensing import FlexParams

MODE_MAX = "max"
MODE_REALTIME = "realtime"


@dataclass(frozen=True)
class SimConfig:
    """Complete run configuration: scheduler, blocks, network, scope rates."""

    dt_plant: float = 5e-5      # s
    tick_hz: float = 1000.0     # firmware tick
    stream_hz: float = 20.0     # telemetry frame rate
    control: ControlLaw = ControlLaw.PID
    mode: str = MODE_MAX
    rpm_window: float = 0.1     # s, RPM estimation window
    rpm_max: float = 80.0       # setpoint bound
    bang_duty: float = 1.0      # duty used when control=bang
    k_load: float = 0.002       # N*m per degree of bend (pressure load map)
    plant: PlantParams = field(default_factory=PlantParams)
    flex: FlexParams = field(default_factory=FlexParams)
    gains: PidGains = field(default_factory=PidGains)
    port: int = 7777            # stream-socket control port
    http_port: int = 8080       # UI gateway port
    scope_logic_hz: float = 20_000.0
    scope_slow_hz: float = 1_000.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.dt_plant) or self.dt_plant <= 0.0:
            raise ConfigError(f"dt_plant must be positive, got {self.dt_plant!r}")
        if self.tick_hz <= 0.0 or self.dt_plant * self.tick_hz > 1.0 + 1e-9:
            raise ConfigError("firmware tick must not be faster than the plant step")
        steps = 1.0 / (self.dt_plant * self.tick_hz)
        if abs(steps - round(steps)) > 1e-6:
            raise ConfigError(
                f"1/(dt_plant*tick_hz) must be an integer, got {steps!r}"
            )
        if self.stream_hz <= 0.0:
            raise ConfigError(f"stream_hz must be positive, got {self.stream_hz!r}")
        if self.mode not in (MODE_MAX, MODE_REALTIME):
            raise ConfigError(f"mode must be max or realtime, got {self.mode!r}")
        if self.rpm_window <= 0.0:
            raise ConfigError(f"rpm_window must be positive, got {self.rpm_window!r}")
        if self.rpm_max <= 0.0:
            raise ConfigError(f"rpm_max must be positive, got {self.rpm_max!r}")
        if not 0.0 <= self.bang_duty <= 1.0:
            raise ConfigError(f"bang_duty must be in [0,1], got {self.bang_duty!r}")
        if self.k_load < 0.0:
            raise ConfigError(f"k_load must be >= 0, got {self.k_load!r}")
        for name in ("port", "http_port"):
            value = getattr(self, name)
            # 0 asks the OS for an ephemeral port
            if not 0 <= value <= 65535:
                raise ConfigError(f"{name} must be a valid port, got {value!r}")
        for name in ("scope_logic_hz", "scope_slow_hz"):
            if getattr(self, name) <= 0.0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)!r}")

    @property
    def steps_per_tick(self) -> int:
        return round(1.0 / (self.dt_plant * self.tick_hz))

    @property
    def steps_per_frame(self) -> int:
        return max(1, round(1.0 / (self.dt_plant * self.stream_hz)))


_SIM_KEYS = {
    "dt_plant": float, "tick_hz": float, "stream_hz": float, "control": str,
    "mode": str, "rpm_window": float, "rpm_max": float, "bang_duty": float,
}
_NET_KEYS = {"port": int, "http_port": int}
_SCOPE_KEYS = {"logic_hz": float, "slow_hz": float}


def _block_keys(cls) -> dict[str, type]:
    return {f.name: (int if f.type in ("int", int) else float) for f in fields(cls)}


def _parse_section(section, keys: dict[str, type], where: str) -> dict:
    out = {}
    for name, raw in section.items():
        if name not in keys:
            raise ConfigError(f"unknown key {name!r} in [{where}]")
        kind = keys[name]
        if kind is str:
            out[name] = raw.strip()
            continue
        try:
            value = float(raw)
        except ValueError as exc:
            raise ConfigError(f"[{where}] {name}: not a number: {raw!r}") from exc
        if kind is int:
            if value != int(value):
                raise ConfigError(f"[{where}] {name}: expected an integer, got {raw!r}")
            value = int(value)
        out[name] = value
    return out


def load_config(path: Union[str, Path]) -> SimConfig:
    """Build a SimConfig from an INI file; absent keys keep their defaults."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"bad config {path}: {exc}") from exc

    known = {"sim", "plant", "flex", "gains", "net", "scope"}
    for section in parser.sections():
        if section not in known:
            raise ConfigError(f"unknown section [{section}] in {path}")

    cfg = SimConfig()
    top: dict = {}
    if parser.has_section("sim"):
        top.update(_parse_section(parser["sim"], _SIM_KEYS, "sim"))
        if "control" in top:
            try:
                top["control"] = ControlLaw(top["control"])
            except ValueError as exc:
                raise ConfigError(f"control must be pid or bang, got {top['control']!r}") from exc
    if parser.has_section("net"):
        top.update(_parse_section(parser["net"], _NET_KEYS, "net"))
    if parser.has_section("scope"):
        scope = _parse_section(parser["scope"], _SCOPE_KEYS, "scope")
        if "logic_hz" in scope:
            top["scope_logic_hz"] = scope["logic_hz"]
        if "slow_hz" in scope:
            top["scope_slow_hz"] = scope["slow_hz"]

    blocks: dict = {}
    for section, cls, default in (
        ("plant", PlantParams, cfg.plant),
        ("flex", FlexParams, cfg.flex),
        ("gains", PidGains, cfg.gains),
    ):
        if not parser.has_section(section):
            continue
        keys = _block_keys(cls)
        if section == "plant":
            keys["k_load"] = float
        raw = _parse_section(parser[section], keys, section)
        k_load = raw.pop("k_load", None)
        if k_load is not None:
            top["k_load"] = k_load
        try:
            blocks[section] = replace(default, **raw)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"[{section}]: {exc}") from exc

    try:
        return replace(cfg, **top, **blocks)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
