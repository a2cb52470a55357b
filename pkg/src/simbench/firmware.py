"""Emulated controller firmware: pressed/idle supervisor plus speed regulation.

The firmware runs at a fixed tick.  Every tick it reads the sensor ADC,
updates the pressed flag, and drives the bridge pins.  While running it
re-estimates the output-shaft RPM from decoder counts once per estimation
window and regulates duty, either with the PID speed hold or with the
fixed-duty bang behaviour of the original on/off bench.

Speed errors are folded into the setpoint's direction before the PID so a
single [u_min, u_max] duty clamp serves both rotation signs; the direction
pins follow the setpoint sign alone.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

from .encoder import DecoderState, EncoderSpec, counts_to_rpm
from .errors import SetpointOutOfRange
from .hbridge import BridgeInputs
from .sensing import FlexParams, SenseState, threshold_press


class Mode(enum.Enum):
    IDLE = "idle"
    RUN = "run"


class ControlLaw(enum.Enum):
    PID = "pid"
    BANG = "bang"


@dataclass(frozen=True)
class PidGains:
    kp: float = 0.005  # duty per RPM
    ki: float = 0.1    # duty per RPM*s
    kd: float = 0.0    # duty*s per RPM
    u_min: float = 0.0
    u_max: float = 1.0

    def __post_init__(self) -> None:
        if self.kp < 0.0 or self.ki < 0.0 or self.kd < 0.0:
            raise ValueError("gains must be non-negative")
        if not 0.0 <= self.u_min < self.u_max <= 1.0:
            raise ValueError("need 0 <= u_min < u_max <= 1")


@dataclass(frozen=True)
class FirmwareState:
    """Controller memory between ticks plus its compiled-in configuration."""

    mode: Mode = Mode.IDLE
    setpoint_rpm: float = 0.0
    rpm_est: float = 0.0
    integ: float = 0.0
    prev_err: float = 0.0
    window_counts: int = 0          # decoder total at the last window rollover
    ticks_in_window: int = 0
    pins: BridgeInputs = field(default_factory=BridgeInputs)
    sense: SenseState = field(default_factory=SenseState)
    tick_hz: float = 1000.0
    rpm_window: float = 0.1         # s
    rpm_max: float = 80.0
    control: ControlLaw = ControlLaw.PID
    bang_duty: float = 1.0
    flex: FlexParams = field(default_factory=FlexParams)
    enc: EncoderSpec = field(default_factory=EncoderSpec)

    @property
    def ticks_per_window(self) -> int:
        return max(1, round(self.rpm_window * self.tick_hz))


def pid_step(err: float, fw: FirmwareState, g: PidGains, dt: float) -> tuple[FirmwareState, float]:
    """One PID update; returns the new state and the clamped duty.

    The integrator only accumulates while the raw output is not saturated
    in the error's direction (conditional anti-windup) and is itself bounded
    by the clamp span.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    u_raw = g.kp * err + fw.integ + g.kd * (err - fw.prev_err) / dt
    winding_up = (u_raw > g.u_max and err > 0.0) or (u_raw < g.u_min and err < 0.0)
    integ = fw.integ
    if not winding_up:
        bound = g.u_max - g.u_min
        integ = min(max(integ + g.ki * err * dt, -bound), bound)
    duty = min(max(u_raw, g.u_min), g.u_max)
    return replace(fw, integ=integ, prev_err=err), duty


def set_setpoint(fw: FirmwareState, rpm: float) -> FirmwareState:
    """Change the speed target; PID memory is preserved across the change."""
    if not math.isfinite(rpm) or abs(rpm) > fw.rpm_max:
        raise SetpointOutOfRange(f"|rpm| must be <= {fw.rpm_max}, got {rpm!r}")
    return replace(fw, setpoint_rpm=rpm)


def firmware_tick(
    fw: FirmwareState,
    adc: int,
    decoder: DecoderState,
    g: PidGains,
    dt: float,
) -> tuple[FirmwareState, BridgeInputs]:
    """Advance the firmware by one tick and return the new pin outputs."""
    sense = threshold_press(fw.sense, adc, fw.flex)

    if not sense.pressed:
        # Idle: coast the bridge and forget controller memory so a fresh
        # press starts from a clean estimate.
        pins = replace(fw.pins, ena_duty=0.0)
        fw = replace(
            fw,
            mode=Mode.IDLE,
            sense=sense,
            rpm_est=0.0,
            integ=0.0,
            prev_err=0.0,
            window_counts=decoder.total_counts,
            ticks_in_window=0,
            pins=pins,
        )
        return fw, pins

    ticks = fw.ticks_in_window + 1
    rpm_est = fw.rpm_est
    window_counts = fw.window_counts
    if ticks >= fw.ticks_per_window:
        rpm_est = counts_to_rpm(decoder.total_counts - window_counts, fw.rpm_window, fw.enc)
        window_counts = decoder.total_counts
        ticks = 0
    fw = replace(
        fw,
        mode=Mode.RUN,
        sense=sense,
        rpm_est=rpm_est,
        window_counts=window_counts,
        ticks_in_window=ticks,
    )

    if fw.control is ControlLaw.BANG:
        duty = min(max(fw.bang_duty, 0.0), 1.0)
    else:
        forward = fw.setpoint_rpm >= 0.0
        err = (fw.setpoint_rpm - fw.rpm_est) * (1.0 if forward else -1.0)
        fw, duty = pid_step(err, fw, g, dt)

    forward = fw.setpoint_rpm >= 0.0
    pins = BridgeInputs(
        in1=forward,
        in2=not forward,
        ena_duty=duty,
        v_supply=fw.pins.v_supply,
    )
    return replace(fw, pins=pins), pins
