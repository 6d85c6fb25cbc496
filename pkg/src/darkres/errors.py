"""Exception hierarchy with stable machine-readable error codes.

Every error raised by this package carries a ``code`` string so that the
CLI and sweep layer can classify failures (configuration vs. numeric)
without parsing messages.
"""

from __future__ import annotations


class SimulationError(Exception):
    """Base class; ``code`` identifies the failure kind."""

    def __init__(self, message: str, code: str = "ERROR"):
        super().__init__(message)
        self.code = code


class ParameterError(SimulationError):
    """Physically invalid input parameters (negative rates, non-finite detunings)."""


class ConfigError(SimulationError):
    """Malformed or out-of-range configuration (parse errors, bad sweep specs, I/O)."""


class NumericError(SimulationError):
    """Failures of the numeric machinery: singular or trapped steady states,
    degenerate closed-form denominators, missing sign changes in root brackets.
    """
