"""Multi-channel signal recorder and CSV export.

Signals are sampled on plant-step boundaries at a decimated rate and
exported as one CSV per trace.  Logic channels are recorded as 0.0/5.0 V
so exported traces read like oscilloscope screenshots; analog channels
keep their natural units.  Values are written with ``repr`` so a re-import
reproduces every float bit-for-bit; the time column is normalized to
microsecond resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence, Union

from .errors import IoFailure, UnknownSignal

SIGNALS = ("v_bridge", "enc_a", "enc_b", "flex_node", "pressed_5v", "rpm", "duty", "pos")

# Channels that swing between rails fast enough to need the full logic rate.
FAST_SIGNALS = frozenset({"enc_a", "enc_b", "pressed_5v"})

LOGIC_RATE_HZ = 20_000.0
SLOW_RATE_HZ = 1_000.0

LOGIC_HIGH_V = 5.0
LOGIC_LOW_V = 0.0


@dataclass(frozen=True)
class TraceConfig:
    """What to record: signal names, sample rate, and capture length."""

    signals: tuple[str, ...]
    duration: float
    sample_hz: float = 0.0  # 0 picks the default for the requested signals

    def __post_init__(self) -> None:
        object.__setattr__(self, "signals", tuple(self.signals))
        if not self.signals:
            raise UnknownSignal("at least one signal is required")
        for name in self.signals:
            if name not in SIGNALS:
                raise UnknownSignal(f"unknown signal {name!r}; valid: {', '.join(SIGNALS)}")
        if len(set(self.signals)) != len(self.signals):
            raise UnknownSignal("duplicate signal name")
        if not math.isfinite(self.duration) or self.duration < 0.0:
            raise ValueError(f"duration must be >= 0, got {self.duration!r}")
        if self.sample_hz == 0.0:
            fast = any(name in FAST_SIGNALS for name in self.signals)
            object.__setattr__(self, "sample_hz", LOGIC_RATE_HZ if fast else SLOW_RATE_HZ)
        if not math.isfinite(self.sample_hz) or self.sample_hz <= 0.0:
            raise ValueError(f"sample_hz must be positive, got {self.sample_hz!r}")

    @property
    def rows(self) -> int:
        """Number of samples a full-length capture holds (endpoints inclusive)."""
        return math.floor(self.duration * self.sample_hz) + 1


@dataclass(frozen=True)
class Trace:
    """Recorded columns: a time axis plus one tuple of values per signal."""

    signals: tuple[str, ...]
    t: tuple[float, ...]
    columns: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        if len(self.columns) != len(self.signals):
            raise ValueError("one column per signal required")
        for col in self.columns:
            if len(col) != len(self.t):
                raise ValueError("column length must match the time axis")

    def column(self, name: str) -> tuple[float, ...]:
        try:
            return self.columns[self.signals.index(name)]
        except ValueError:
            raise UnknownSignal(f"trace has no signal {name!r}") from None


@dataclass
class Recorder:
    """Accumulates samples during a run; simcore drives the cadence."""

    cfg: TraceConfig
    _t: list[float] = field(default_factory=list)
    _cols: list[list[float]] = field(init=False)

    def __post_init__(self) -> None:
        self._cols = [[] for _ in self.cfg.signals]

    def sample(self, t: float, values: Mapping[str, float]) -> None:
        if len(self._t) >= self.cfg.rows:
            return
        self._t.append(t)
        for idx, name in enumerate(self.cfg.signals):
            self._cols[idx].append(values[name])

    def trace(self) -> Trace:
        return Trace(
            signals=self.cfg.signals,
            t=tuple(self._t),
            columns=tuple(tuple(col) for col in self._cols),
        )


def export_csv(trace: Trace, path: Union[str, Path]) -> None:
    """Write `t_s,<signals...>` rows; times at 6 decimals, values via repr."""
    lines = ["t_s," + ",".join(trace.signals)]
    for k, t in enumerate(trace.t):
        lines.append(f"{t:.6f}," + ",".join(repr(col[k]) for col in trace.columns))
    try:
        Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")
    except OSError as exc:
        raise IoFailure(f"cannot write trace to {path}: {exc}") from exc


def import_csv(path: Union[str, Path]) -> Trace:
    """Read a trace written by export_csv, reproducing values bit-for-bit."""
    try:
        text = Path(path).read_text(encoding="ascii")
    except OSError as exc:
        raise IoFailure(f"cannot read trace from {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines or not lines[0].startswith("t_s,"):
        raise IoFailure(f"{path} is not a trace CSV (missing t_s header)")
    signals = tuple(lines[0].split(",")[1:])
    t: list[float] = []
    cols: list[list[float]] = [[] for _ in signals]
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != len(signals) + 1:
            raise IoFailure(f"{path}: ragged row {line!r}")
        t.append(float(parts[0]))
        for idx, part in enumerate(parts[1:]):
            cols[idx].append(float(part))
    return Trace(signals=signals, t=tuple(t), columns=tuple(tuple(c) for c in cols))


def logic_level(high: bool) -> float:
    """Map a boolean channel to the exported 0/5 V scope level."""
    return LOGIC_HIGH_V if high else LOGIC_LOW_V
