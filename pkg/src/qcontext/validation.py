"""Input validation helpers used by the estimators and the CLI."""

from __future__ import annotations

import numbers

from .configuration import Configuration, check_assignment
from .exceptions import EmptyConfigurationError

__all__ = ["check_unit_interval", "check_positive_int", "check_configuration", "check_assignment"]


def check_unit_interval(value, name: str) -> float:
    if not isinstance(value, numbers.Real) or not 0.0 <= float(value) <= 1.0:
        raise ValueError(f"{name} must be a real number in [0, 1], got {value!r}")
    return float(value)


def check_positive_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_configuration(config, require_contexts: bool = True) -> Configuration:
    if not isinstance(config, Configuration):
        raise TypeError(f"expected a Configuration, got {type(config).__name__}")
    if require_contexts and config.n_contexts == 0:
        raise EmptyConfigurationError("configuration has no contexts")
    return config
