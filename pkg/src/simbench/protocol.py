"""Line-based ASCII control and telemetry protocol.

One newline-terminated record per message, case-sensitive verbs, single
spaces.  Client to bench:

    PING | PRESS <deg> | RELEASE | SET RPM <f> | SET LOAD <f>
    | GET STATUS | STREAM ON | STREAM OFF

Bench to client: ``PONG``, ``OK``, ``STATUS ...``, ``ERR unknown-command``,
``ERR bad-arg``, and ``T ...`` telemetry frames while streaming.  Parsing
and formatting are pure; transport and reply sequencing live in server.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import BadArg, UnknownCommand

# Strict decimal/exponent literal: no nan/inf, no underscores, no hex.
_FLOAT_RE = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\Z")


@dataclass(frozen=True)
class Ping:
    pass


@dataclass(frozen=True)
class Press:
    bend: float


@dataclass(frozen=True)
class Release:
    pass


@dataclass(frozen=True)
class SetRpm:
    rpm: float


@dataclass(frozen=True)
class SetLoad:
    tau: float


@dataclass(frozen=True)
class GetStatus:
    pass


@dataclass(frozen=True)
class Stream:
    on: bool


Command = Union[Ping, Press, Release, SetRpm, SetLoad, GetStatus, Stream]

ERR_UNKNOWN = b"ERR unknown-command\n"
ERR_BAD_ARG = b"ERR bad-arg\n"


def _parse_float(token: str) -> float:
    if not _FLOAT_RE.match(token):
        raise BadArg(f"not a number: {token!r}")
    return float(token)


def parse_command(line: Union[bytes, str]) -> Command:
    """Parse one record into a Command; UnknownCommand / BadArg on failure."""
    if isinstance(line, bytes):
        try:
            line = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise UnknownCommand("undecodable line") from exc
    if line.endswith("\n"):
        line = line[:-1]
    if line.endswith("\r"):
        line = line[:-1]

    tokens = line.split(" ")
    verb = tokens[0]
    if verb == "PING":
        if len(tokens) != 1:
            raise BadArg("PING takes no argument")
        return Ping()
    if verb == "RELEASE":
        if len(tokens) != 1:
            raise BadArg("RELEASE takes no argument")
        return Release()
    if verb == "PRESS":
        if len(tokens) != 2:
            raise BadArg("PRESS takes exactly one argument")
        bend = _parse_float(tokens[1])
        if not 0.0 <= bend <= 180.0:
            raise BadArg(f"bend must be in [0, 180], got {bend!r}")
        return Press(bend)
    if verb == "SET":
        if len(tokens) < 2 or tokens[1] not in ("RPM", "LOAD"):
            raise UnknownCommand(f"no such command: {line!r}")
        if len(tokens) != 3:
            raise BadArg(f"SET {tokens[1]} takes exactly one argument")
        value = _parse_float(tokens[2])
        return SetRpm(value) if tokens[1] == "RPM" else SetLoad(value)
    if verb == "GET":
        if tokens[1:2] != ["STATUS"]:
            raise UnknownCommand(f"no such command: {line!r}")
        if len(tokens) != 2:
            raise BadArg("GET STATUS takes no argument")
        return GetStatus()
    if verb == "STREAM":
        if tokens[1:2] not in (["ON"], ["OFF"]):
            raise UnknownCommand(f"no such command: {line!r}")
        if len(tokens) != 2:
            raise BadArg(f"STREAM {tokens[1]} takes no argument")
        return Stream(tokens[1] == "ON")
    raise UnknownCommand(f"no such command: {verb!r}")


def render_command(cmd: Command) -> bytes:
    """Canonical wire form; parse_command(render_command(c)) == c."""
    if isinstance(cmd, Ping):
        text = "PING"
    elif isinstance(cmd, Press):
        text = f"PRESS {cmd.bend!r}"
    elif isinstance(cmd, Release):
        text = "RELEASE"
    elif isinstance(cmd, SetRpm):
        text = f"SET RPM {cmd.rpm!r}"
    elif isinstance(cmd, SetLoad):
        text = f"SET LOAD {cmd.tau!r}"
    elif isinstance(cmd, GetStatus):
        text = "GET STATUS"
    elif isinstance(cmd, Stream):
        text = "STREAM ON" if cmd.on else "STREAM OFF"
    else:
        raise TypeError(f"not a Command: {cmd!r}")
    return text.encode("ascii") + b"\n"


@dataclass(frozen=True)
class StatusSnapshot:
    """Everything GET STATUS reports, in display units (pos in mm)."""

    t: float
    rpm: float
    setpoint: float
    duty: float
    adc: int
    pressed: bool
    pos_mm: float
    forward: bool


@dataclass(frozen=True)
class TelemetryFrame:
    """One streamed sample, the bench's stand-in for the LCD readout."""

    t: float
    rpm: float
    duty: float
    adc: int
    total_counts: int
    pos_mm: float


def format_status(snap: StatusSnapshot) -> bytes:
    if snap.duty == 0.0:
        direction = "STOP"
    else:
        direction = "CW" if snap.forward else "CCW"
    text = (
        f"STATUS t={snap.t:.3f} rpm={snap.rpm:.2f} sp={snap.setpoint:.2f} "
        f"duty={snap.duty:.3f} adc={snap.adc:d} pressed={int(snap.pressed):d} "
        f"pos={snap.pos_mm:.2f} dir={direction}\n"
    )
    return text.encode("ascii")


def format_telemetry(frame: TelemetryFrame) -> bytes:
    text = (
        f"T {frame.t:.3f} {frame.rpm:.2f} {frame.duty:.3f} "
        f"{frame.adc:d} {frame.total_counts:d} {frame.pos_mm:.2f}\n"
    )
    return text.encode("ascii")
