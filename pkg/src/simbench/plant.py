"""Electromechanical model of the geared brushed DC motor and its linear actuator.

The motor is the classic lumped-parameter brushed machine,

    L di/dt     = v - R i - k_e w
    J dw/dt     = k_t i - B w - tau_ext / (N eta)
    dtheta/dt   = w
    dpos/dt     = (w / N) * lead / (2 pi)

with ``w`` the motor-shaft speed, ``N`` the gear ratio and ``tau_ext`` an
external torque referred to the output shaft.  Integration is semi-implicit
Euler: the current is advanced first and the fresh value drives the
mechanical update, which keeps the scheme stable for any ``dt`` up to the
electrical time constant.  Position is hard-clamped at the stroke limits;
hitting a stop zeroes the velocity while the drive keeps pushing into it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import NegativeBend, NonFiniteInput, StepTooLarge

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PlantParams:
    """Motor, gearbox and leadscrew constants, all SI.

    ``gear_ratio`` counts motor revolutions per output revolution and
    ``lead`` is actuator travel per output revolution.  ``k_e`` and ``k_t``
    are the same number in SI units; construction enforces it.
    """

    v_supply: float = 12.0      # V
    r_armature: float = 2.0     # ohm
    l_armature: float = 1.0e-3  # H
    k_e: float = 0.012          # V*s/rad, motor shaft
    k_t: float = 0.012          # N*m/A
    j_rotor: float = 1.0e-6     # kg*m^2
    b_visc: float = 1.0e-6      # N*m*s/rad
    gear_ratio: float = 131.25  # motor revs per output rev
    gear_eff: float = 1.0       # (0, 1]
    lead: float = 0.008         # m per output rev
    stroke_min: float = 0.0     # m
    stroke_max: float = 0.1     # m

    def __post_init__(self) -> None:
        positive = (
            "v_supply", "r_armature", "l_armature", "k_e", "k_t",
            "j_rotor", "b_visc", "gear_ratio", "gear_eff", "lead",
        )
        for name in positive:
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0.0:
                raise ValueError(f"{name} must be strictly positive, got {value!r}")
        if self.gear_eff > 1.0:
            raise ValueError("gear_eff cannot exceed 1")
        if self.stroke_min < 0.0:
            raise ValueError("stroke_min cannot be negative")
        if not math.isfinite(self.stroke_max) or self.stroke_max <= self.stroke_min:
            raise ValueError("stroke_max must exceed stroke_min")
        if self.k_e != self.k_t:
            raise ValueError("k_e and k_t must be equal in SI units")

    @property
    def tau_mech(self) -> float:
        """Dominant mechanical time constant J*R/(k_t*k_e), seconds."""
        return self.j_rotor * self.r_armature / (self.k_t * self.k_e)

    @property
    def dt_max(self) -> float:
        """Largest admissible integration step (the electrical pole L/R)."""
        return self.l_armature / self.r_armature


@dataclass(frozen=True)
class PlantState:
    """Continuous state: armature current, shaft speed/angle, carriage position."""

    i: float = 0.0        # A
    omega_m: float = 0.0  # rad/s, motor shaft
    theta_m: float = 0.0  # rad, motor shaft, unbounded
    pos: float = 0.0      # m along the stroke
    at_stop: bool = False

    @classmethod
    def at_rest(cls, pos: float = 0.0) -> "PlantState":
        return cls(pos=pos)


@dataclass(frozen=True)
class LoadSpec:
    """External (pressure-induced) torque at the output shaft, N*m."""

    tau_ext: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.tau_ext):
            raise NonFiniteInput(f"tau_ext is not finite: {self.tau_ext!r}")


def plant_step(
    state: PlantState,
    params: PlantParams,
    v_applied: float,
    load: LoadSpec,
    dt: float,
    *,
    open_circuit: bool = False,
) -> PlantState:
    """Advance the plant by one semi-implicit Euler step of length ``dt``.

    ``open_circuit`` models a coasting bridge: the armature loop is broken,
    the current is forced to zero and only friction and the external load
    act on the shaft.
    """
    if not (
        math.isfinite(v_applied)
        and math.isfinite(dt)
        and math.isfinite(state.i)
        and math.isfinite(state.omega_m)
        and math.isfinite(state.theta_m)
        and math.isfinite(state.pos)
    ):
        raise NonFiniteInput("plant_step received a non-finite input")
    if dt <= 0.0:
        raise StepTooLarge(f"dt must be positive, got {dt!r}")
    if dt > params.dt_max:
        raise StepTooLarge(
            f"dt={dt!r} exceeds the L/R stability guard {params.dt_max!r}"
        )
    if abs(v_applied) > params.v_supply * (1.0 + 1e-12):
        raise ValueError(f"|v_applied|={abs(v_applied)!r} exceeds the supply rail")

    p = params
    if open_circuit:
        i_new = 0.0
    else:
        i_new = state.i + dt * (v_applied - p.r_armature * state.i - p.k_e * state.omega_m) / p.l_armature
    tau_shaft = load.tau_ext / (p.gear_ratio * p.gear_eff)
    omega_new = state.omega_m + dt * (p.k_t * i_new - p.b_visc * state.omega_m - tau_shaft) / p.j_rotor
    pos_new = state.pos + dt * omega_new / p.gear_ratio * p.lead / TWO_PI

    at_stop = False
    if pos_new >= p.stroke_max and omega_new > 0.0:
        pos_new = p.stroke_max
        omega_new = 0.0
        at_stop = True
    elif pos_new <= p.stroke_min and omega_new < 0.0:
        pos_new = p.stroke_min
        omega_new = 0.0
        at_stop = True

    # theta integrates the post-clamp speed so a stalled shaft accumulates no angle
    theta_new = state.theta_m + dt * omega_new
    return PlantState(i=i_new, omega_m=omega_new, theta_m=theta_new, pos=pos_new, at_stop=at_stop)


def steady_state_speed(params: PlantParams, v: float, tau_ext: float = 0.0) -> float:
    """Analytic equilibrium motor-shaft speed, rad/s (unclamped, may be negative)."""
    if not (math.isfinite(v) and math.isfinite(tau_ext)):
        raise NonFiniteInput("steady_state_speed received a non-finite input")
    p = params
    num = p.k_t * v - p.r_armature * tau_ext / (p.gear_ratio * p.gear_eff)
    den = p.r_armature * p.b_visc + p.k_t * p.k_e
    return num / den


def pressure_to_load(bend: float, k_load: float) -> LoadSpec:
    """Map a bend angle (degrees) to output-shaft load torque, tau = k_load * bend."""
    if not math.isfinite(bend):
        raise NonFiniteInput(f"bend is not finite: {bend!r}")
    if bend < 0.0:
        raise NegativeBend(f"bend must be >= 0, got {bend!r}")
    return LoadSpec(tau_ext=k_load * bend)
