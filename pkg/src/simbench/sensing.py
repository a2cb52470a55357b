"""Flex-sensor input chain: bend -> resistance -> divider -> ADC -> pressed flag.

Resistance grows linearly with bend.  The sensor sits on the low side of
the divider so pressing raises the node voltage; a two-level comparator
with hysteresis turns the ADC reading into the binary pressed signal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import NegativeBend, NonFiniteInput


@dataclass(frozen=True)
class FlexParams:
    r_flat: float = 25_000.0        # ohm at zero bend
    k_bend: float = 75_000.0 / 90.0  # ohm per degree (100 kohm at 90 deg)
    r_fixed: float = 47_000.0       # divider partner, ohm
    v_cc: float = 5.0               # V
    adc_bits: int = 10
    press_on: int = 528             # rising threshold, ADC counts
    press_off: int = 496            # falling threshold, ADC counts

    def __post_init__(self) -> None:
        if self.r_flat <= 0.0 or self.k_bend <= 0.0 or self.r_fixed <= 0.0:
            raise ValueError("resistances and k_bend must be strictly positive")
        if self.v_cc <= 0.0:
            raise ValueError("v_cc must be strictly positive")
        if self.adc_bits <= 0:
            raise ValueError("adc_bits must be positive")
        if not self.press_off < self.press_on:
            raise ValueError("press_off must sit below press_on")
        if not 0 < self.press_on < 2 ** self.adc_bits:
            raise ValueError("press_on must lie inside the ADC range")

    @property
    def adc_max(self) -> int:
        return 2 ** self.adc_bits - 1


@dataclass(frozen=True)
class SenseState:
    """Sensor chain snapshot: bend input, ADC code, debounced pressed flag."""

    bend: float = 0.0
    adc: int = 0
    pressed: bool = False


def flex_resistance(bend: float, p: FlexParams) -> float:
    """Sensor resistance (ohm) at a bend angle in degrees."""
    if not math.isfinite(bend):
        raise NonFiniteInput(f"bend is not finite: {bend!r}")
    if bend < 0.0:
        raise NegativeBend(f"bend must be >= 0, got {bend!r}")
    return p.r_flat + p.k_bend * bend


def divider_voltage(r_flex: float, p: FlexParams) -> float:
    """Node voltage of the divider with the flex sensor on the low side."""
    return p.v_cc * r_flex / (r_flex + p.r_fixed)


def adc_quantize(v: float, p: FlexParams) -> int:
    """Quantize a node voltage to an ADC code; clamps instead of erroring."""
    if not math.isfinite(v):
        raise NonFiniteInput(f"v is not finite: {v!r}")
    code = math.floor(v / p.v_cc * 2 ** p.adc_bits)
    return min(max(code, 0), p.adc_max)


def threshold_press(state: SenseState, adc: int, p: FlexParams) -> SenseState:
    """Advance the hysteresis comparator with a fresh ADC reading."""
    if adc >= p.press_on:
        pressed = True
    elif adc <= p.press_off:
        pressed = False
    else:
        pressed = state.pressed
    return replace(state, adc=adc, pressed=pressed)


def sense_bend(bend: float, state: SenseState, p: FlexParams) -> SenseState:
    """Run the whole chain for a bend angle: resistance, divider, ADC, comparator."""
    code = adc_quantize(divider_voltage(flex_resistance(bend, p), p), p)
    return replace(threshold_press(state, code, p), bend=bend)
