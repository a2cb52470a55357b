"""Deterministic fixed-step scheduler wiring plant, encoder, sensing,
firmware, bridge, and scope, plus the scenario file format.

Per plant step ``n`` (time ``n*dt``) the phases run in a fixed order:
scenario events due at this step, firmware tick (every ``steps_per_tick``
steps), scope sample, telemetry frame, then the plant integration step and
encoder decode.  Everything downstream of a given config and scenario is a
pure function of them, which is what makes repeated runs byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .config import SimConfig
from .encoder import DecoderState, EncoderSpec, encoder_emit, quad_decode
from .errors import (
    ConfigError,
    MissingDuration,
    ScenarioSyntaxError,
    SimError,
    UnsortedEvents,
)
from .firmware import FirmwareState, firmware_tick, set_setpoint
from .hbridge import BridgeInputs, DriveMode, bridge_resolve
from .plant import LoadSpec, PlantState, plant_step
from .protocol import (
    Command,
    GetStatus,
    Ping,
    Press,
    Release,
    SetLoad,
    SetRpm,
    StatusSnapshot,
    Stream,
    TelemetryFrame,
    format_status,
    format_telemetry,
    parse_command,
)
from .scope import Recorder, Trace, TraceConfig, logic_level
from .sensing import adc_quantize, divider_voltage, flex_resistance


@dataclass(frozen=True)
class ScenarioEvent:
    t: float
    line: str
    cmd: Command


@dataclass(frozen=True)
class Scenario:
    duration: float
    events: tuple[ScenarioEvent, ...]


def parse_scenario(text: str) -> Scenario:
    """Parse the scenario grammar: DURATION, AT lines, # comments."""
    duration: Optional[float] = None
    events: list[ScenarioEvent] = []
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split(None, 2)
        if tokens[0] == "DURATION":
            if len(tokens) != 2:
                raise ScenarioSyntaxError("DURATION takes exactly one value", line_no)
            if duration is not None:
                raise ScenarioSyntaxError("duplicate DURATION", line_no)
            try:
                duration = float(tokens[1])
            except ValueError:
                raise ScenarioSyntaxError(f"bad duration {tokens[1]!r}", line_no) from None
            if not math.isfinite(duration) or duration <= 0.0:
                raise ScenarioSyntaxError(f"duration must be positive, got {tokens[1]}", line_no)
        elif tokens[0] == "AT":
            if len(tokens) != 3:
                raise ScenarioSyntaxError("expected `AT <t_s> <command>`", line_no)
            try:
                t = float(tokens[1])
            except ValueError:
                raise ScenarioSyntaxError(f"bad timestamp {tokens[1]!r}", line_no) from None
            if not math.isfinite(t) or t < 0.0:
                raise ScenarioSyntaxError(f"timestamp must be >= 0, got {tokens[1]}", line_no)
            try:
                cmd = parse_command(tokens[2])
            except SimError as exc:
                raise ScenarioSyntaxError(str(exc), line_no) from exc
            events.append(ScenarioEvent(t=t, line=tokens[2], cmd=cmd))
        else:
            raise ScenarioSyntaxError(f"unrecognized directive {tokens[0]!r}", line_no)
    if duration is None:
        raise MissingDuration("scenario has no DURATION line")
    for prev, curr in zip(events, events[1:]):
        if curr.t < prev.t:
            raise UnsortedEvents(f"event at t={curr.t} follows t={prev.t}")
    return Scenario(duration=duration, events=tuple(events))


def load_scenario(path: Union[str, Path]) -> Scenario:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


class Bench:
    """All mutable simulation state plus the command surface that mutates it.

    Exactly one owner may step a Bench; the network layer funnels every
    mutation through an ordered queue into that owner.
    """

    def __init__(self, cfg: SimConfig):
        self.cfg = cfg
        self.plant = PlantState.at_rest()
        self.enc_spec = EncoderSpec(gear_ratio=cfg.plant.gear_ratio)
        self.dec = DecoderState.from_sample(encoder_emit(0.0, self.enc_spec))
        self.fw = FirmwareState(
            tick_hz=cfg.tick_hz,
            rpm_window=cfg.rpm_window,
            rpm_max=cfg.rpm_max,
            control=cfg.control,
            bang_duty=cfg.bang_duty,
            flex=cfg.flex,
            enc=self.enc_spec,
            pins=BridgeInputs(v_supply=cfg.plant.v_supply),
        )
        self.bend = 0.0
        self.extra_load = 0.0
        self.step_index = 0

    # -- clock ---------------------------------------------------------

    @property
    def t(self) -> float:
        return self.step_index * self.cfg.dt_plant

    @property
    def steps_per_tick(self) -> int:
        return self.cfg.steps_per_tick

    @property
    def steps_per_frame(self) -> int:
        return self.cfg.steps_per_frame

    # -- commands ------------------------------------------------------

    def apply(self, cmd: Command) -> bytes:
        """Apply a command and return the protocol reply line."""
        if isinstance(cmd, Ping):
            return b"PONG\n"
        if isinstance(cmd, Press):
            self.bend = cmd.bend
            return b"OK\n"
        if isinstance(cmd, Release):
            self.bend = 0.0
            return b"OK\n"
        if isinstance(cmd, SetRpm):
            self.fw = set_setpoint(self.fw, cmd.rpm)
            return b"OK\n"
        if isinstance(cmd, SetLoad):
            self.extra_load = cmd.tau
            return b"OK\n"
        if isinstance(cmd, GetStatus):
            return format_status(self.status_snapshot())
        if isinstance(cmd, Stream):
            # per-client live concern; no bench state involved
            return b"OK\n"
        raise TypeError(f"not a Command: {cmd!r}")

    # -- stepping phases ----------------------------------------------

    def adc_now(self) -> int:
        flex = self.cfg.flex
        return adc_quantize(divider_voltage(flex_resistance(self.bend, flex), flex), flex)

    def fw_tick(self) -> None:
        self.fw, _ = firmware_tick(
            self.fw, self.adc_now(), self.dec, self.cfg.gains, 1.0 / self.cfg.tick_hz
        )

    def plant_advance(self) -> None:
        drive = bridge_resolve(self.fw.pins)
        load = LoadSpec(self.cfg.k_load * self.bend + self.extra_load)
        if drive.mode is DriveMode.COAST:
            self.plant = plant_step(
                self.plant, self.cfg.plant, 0.0, load, self.cfg.dt_plant, open_circuit=True
            )
        else:
            self.plant = plant_step(
                self.plant, self.cfg.plant, drive.v_eff, load, self.cfg.dt_plant
            )
        self.dec, _ = quad_decode(self.dec, encoder_emit(self.plant.theta_m, self.enc_spec))
        self.step_index += 1

    # -- observation ---------------------------------------------------

    def output_rpm(self) -> float:
        """True instantaneous output-shaft speed, RPM."""
        return self.plant.omega_m / self.cfg.plant.gear_ratio * 60.0 / (2.0 * math.pi)

    def probe(self) -> dict[str, float]:
        quad = encoder_emit(self.plant.theta_m, self.enc_spec)
        drive = bridge_resolve(self.fw.pins)
        v_bridge = drive.v_eff if drive.mode is DriveMode.DRIVE else 0.0
        flex = self.cfg.flex
        return {
            "v_bridge": v_bridge,
            "enc_a": logic_level(quad.a),
            "enc_b": logic_level(quad.b),
            "flex_node": divider_voltage(flex_resistance(self.bend, flex), flex),
            "pressed_5v": logic_level(self.fw.sense.pressed),
            "rpm": self.output_rpm(),
            "duty": self.fw.pins.ena_duty,
            "pos": self.plant.pos * 1000.0,
        }

    def telemetry(self) -> TelemetryFrame:
        return TelemetryFrame(
            t=self.t,
            rpm=self.fw.rpm_est,
            duty=self.fw.pins.ena_duty,
            adc=self.fw.sense.adc,
            total_counts=self.dec.total_counts,
            pos_mm=self.plant.pos * 1000.0,
        )

    def status_snapshot(self) -> StatusSnapshot:
        return StatusSnapshot(
            t=self.t,
            rpm=self.fw.rpm_est,
            setpoint=self.fw.setpoint_rpm,
            duty=self.fw.pins.ena_duty,
            adc=self.fw.sense.adc,
            pressed=self.fw.sense.pressed,
            pos_mm=self.plant.pos * 1000.0,
            forward=self.fw.pins.in1,
        )


@dataclass(frozen=True)
class RunResult:
    status: StatusSnapshot
    trace: Trace
    telemetry: tuple[bytes, ...]
    replies: tuple[bytes, ...]


def _quantize_step(t: float, dt: float) -> int:
    q = t / dt
    r = round(q)
    if abs(q - r) <= 1e-6 * max(1.0, abs(q)):
        return r
    return math.ceil(q)


def scope_decimation(cfg: SimConfig, traces: TraceConfig) -> int:
    """Plant steps per scope sample; the rates must divide exactly."""
    ratio = 1.0 / (cfg.dt_plant * traces.sample_hz)
    if ratio < 1.0 - 1e-9 or abs(ratio - round(ratio)) > 1e-6:
        raise ConfigError(
            f"sample_hz={traces.sample_hz!r} must divide the plant rate "
            f"{1.0 / cfg.dt_plant!r} evenly"
        )
    return round(ratio)


def run_scenario(cfg: SimConfig, sc: Scenario, traces: TraceConfig) -> RunResult:
    """Run a scenario to completion at full speed; fully deterministic."""
    bench = Bench(cfg)
    recorder = Recorder(traces)
    decim = scope_decimation(cfg, traces)
    n_steps = _quantize_step(sc.duration, cfg.dt_plant)
    schedule = [(_quantize_step(ev.t, cfg.dt_plant), ev.cmd) for ev in sc.events]
    telemetry: list[bytes] = []
    replies: list[bytes] = []
    ptr = 0
    for n in range(n_steps + 1):
        try:
            while ptr < len(schedule) and schedule[ptr][0] == n:
                replies.append(bench.apply(schedule[ptr][1]))
                ptr += 1
            if n % bench.steps_per_tick == 0:
                bench.fw_tick()
            if n % decim == 0:
                recorder.sample((n // decim) / traces.sample_hz, bench.probe())
            if n % bench.steps_per_frame == 0:
                telemetry.append(format_telemetry(bench.telemetry()))
            if n < n_steps:
                bench.plant_advance()
        except SimError as exc:
            raise type(exc)(
                f"step {n} (t={n * cfg.dt_plant:.6f} s): {exc}"
            ) from exc
    return RunResult(
        status=bench.status_snapshot(),
        trace=recorder.trace(),
        telemetry=tuple(telemetry),
        replies=tuple(replies),
    )
