"""Exception types shared across the bench modules."""


class SimError(Exception):
    """Base class for all bench errors."""


class NonFiniteInput(SimError):
    """A numeric input was NaN or infinite."""


class StepTooLarge(SimError):
    """Integration step exceeds the electrical-pole stability guard."""


class NegativeBend(SimError):
    """Bend angles are measured from flat and cannot be negative."""


class ZeroWindow(SimError):
    """An RPM estimation window must have positive length."""


class SetpointOutOfRange(SimError):
    """Requested speed setpoint exceeds the configured limit."""


class UnknownCommand(SimError):
    """Wire line does not match any command in the grammar."""


class BadArg(SimError):
    """Command argument is unparseable or out of range."""


class UnknownSignal(SimError):
    """Requested trace signal is not in the probe registry."""


class IoFailure(SimError):
    """Trace export could not be written."""


class ScenarioSyntaxError(SimError):
    """Scenario file line does not parse."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class UnsortedEvents(SimError):
    """Scenario events must be ordered by timestamp."""


class MissingDuration(SimError):
    """Scenario file never declared a DURATION."""


class ConfigError(SimError):
    """Configuration file is invalid."""


class PortInUse(SimError):
    """A requested listen port is already bound."""
