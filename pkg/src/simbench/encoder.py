"""Two-channel quadrature encoder: signal generation, x4 decoding, RPM math.

Channel A leads channel B by a quarter of an electrical cycle when the
shaft angle increases.  With 16 lines per motor revolution the decoder sees
64 edges per motor rev, i.e. 8400 per output rev through the 131.25:1
gearbox.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import NonFiniteInput, ZeroWindow

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class EncoderSpec:
    lines_per_rev: int = 16      # electrical cycles per channel per motor rev
    gear_ratio: float = 131.25   # motor revs per output rev

    def __post_init__(self) -> None:
        if self.lines_per_rev <= 0:
            raise ValueError("lines_per_rev must be positive")
        if not math.isfinite(self.gear_ratio) or self.gear_ratio <= 0.0:
            raise ValueError("gear_ratio must be strictly positive")
        exact = 4.0 * self.lines_per_rev * self.gear_ratio
        if abs(exact - round(exact)) > 1e-6:
            raise ValueError(
                f"counts per output rev must be whole, got {exact!r}"
            )

    @property
    def counts_per_rev_x4(self) -> int:
        """Decoder counts per motor revolution (both edges, both channels)."""
        return 4 * self.lines_per_rev

    @property
    def counts_per_output_rev(self) -> int:
        """Decoder counts per output-shaft revolution."""
        return round(self.counts_per_rev_x4 * self.gear_ratio)


@dataclass(frozen=True)
class QuadState:
    """Instantaneous logic levels on channels A and B."""

    a: bool
    b: bool


# Forward rotation walks this cycle: (1,0) -> (1,1) -> (0,1) -> (0,0) -> (1,0)
_PHASE_INDEX = {
    (True, False): 0,
    (True, True): 1,
    (False, True): 2,
    (False, False): 3,
}


@dataclass(frozen=True)
class DecoderState:
    """x4 decoder memory: previous sample, running count, glitch counter."""

    prev: QuadState
    total_counts: int = 0
    invalid_transitions: int = 0

    @classmethod
    def from_sample(cls, sample: QuadState) -> "DecoderState":
        return cls(prev=sample)


def encoder_emit(theta_m: float, spec: EncoderSpec) -> QuadState:
    """Channel pair for a motor-shaft angle (rad); pure function of the angle."""
    if not math.isfinite(theta_m):
        raise NonFiniteInput(f"theta_m is not finite: {theta_m!r}")
    cycles = theta_m / TWO_PI * spec.lines_per_rev
    c = cycles - math.floor(cycles)
    return QuadState(a=c < 0.5, b=0.25 <= c < 0.75)


def quad_decode(state: DecoderState, curr: QuadState) -> tuple[DecoderState, int]:
    """Fold one sample into the decoder; returns the new state and the count delta.

    A transition where both channels flip is undecodable: it is tallied in
    ``invalid_transitions`` and contributes no count, mirroring how decoder
    hardware tolerates glitches instead of faulting.
    """
    step = (_PHASE_INDEX[(curr.a, curr.b)] - _PHASE_INDEX[(state.prev.a, state.prev.b)]) % 4
    if step == 0:
        return state, 0
    if step == 1:
        delta = 1
    elif step == 3:
        delta = -1
    else:
        return replace(state, prev=curr, invalid_transitions=state.invalid_transitions + 1), 0
    return replace(state, prev=curr, total_counts=state.total_counts + delta), delta


def counts_to_rpm(delta_counts: int, window: float, spec: EncoderSpec) -> float:
    """Output-shaft RPM from decoder counts accumulated over ``window`` seconds."""
    if not math.isfinite(window) or window <= 0.0:
        raise ZeroWindow(f"window must be positive, got {window!r}")
    return delta_counts / spec.counts_per_output_rev / window * 60.0
