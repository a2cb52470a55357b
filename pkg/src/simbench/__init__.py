"""Deterministic digital twin of a network-controlled DC-motor actuator bench."""

__version__ = "0.1.0"
