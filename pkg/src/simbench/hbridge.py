"""Single L298-style H-bridge channel under averaged-PWM semantics.

The enable pin carries the PWM; its duty scales the supply linearly into
the effective armature voltage.  Enable at zero duty opens the bridge
(coast), equal direction pins short the motor (brake), opposite pins drive
with the sign set by IN1/IN2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class DriveMode(enum.Enum):
    DRIVE = "drive"
    BRAKE = "brake"
    COAST = "coast"


@dataclass(frozen=True)
class BridgeInputs:
    """Direction pins, enable duty and the motor supply rail."""

    in1: bool = False
    in2: bool = False
    ena_duty: float = 0.0
    v_supply: float = 12.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.ena_duty) or not 0.0 <= self.ena_duty <= 1.0:
            raise ValueError(f"ena_duty must be in [0, 1], got {self.ena_duty!r}")
        if not math.isfinite(self.v_supply) or self.v_supply <= 0.0:
            raise ValueError("v_supply must be strictly positive")


@dataclass(frozen=True)
class BridgeDrive:
    """Resolved output: drive mode plus averaged terminal voltage.

    In COAST the armature is open, so ``v_eff`` carries no meaning and is
    reported as 0; the plant must force the current to zero instead of
    applying a voltage.
    """

    mode: DriveMode
    v_eff: float


def bridge_resolve(inputs: BridgeInputs) -> BridgeDrive:
    """Map pin levels and enable duty to the effective motor drive."""
    if inputs.ena_duty == 0.0:
        return BridgeDrive(mode=DriveMode.COAST, v_eff=0.0)
    if inputs.in1 == inputs.in2:
        return BridgeDrive(mode=DriveMode.BRAKE, v_eff=0.0)
    sign = 1.0 if inputs.in1 else -1.0
    return BridgeDrive(mode=DriveMode.DRIVE, v_eff=sign * inputs.v_supply * inputs.ena_duty)
