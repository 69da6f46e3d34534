"""Exception hierarchy shared by every infocap package."""

from typing import Optional


class InfocapError(Exception):
    """Base class for all errors raised by infocap."""


class ConfigurationError(InfocapError, ValueError):
    """A parameter, shape or tag is invalid. Raised before any work starts."""


class StateError(InfocapError, RuntimeError):
    """An object was used out of order, e.g. backward before forward."""


class SamplingError(InfocapError, RuntimeError):
    """A sampler could not produce a valid draw within its budget."""


class NumericError(InfocapError, ArithmeticError):
    """
    A computation produced a non-finite or out-of-domain value.

    Attributes:
        layer: Index of the network layer where the value appeared, if any.
        family: Estimator or value-function family involved, if any.
        iteration: Training iteration at which the error surfaced, if any.
    """

    def __init__(
        self,
        message: str,
        *,
        layer: Optional[int] = None,
        family: Optional[str] = None,
        iteration: Optional[int] = None,
    ):
        super().__init__(message)
        self.layer = layer
        self.family = family
        self.iteration = iteration


class DivergenceError(NumericError):
    """Training loss left the finite range or exceeded the abort threshold."""


class CheckSuiteError(InfocapError):
    """One or more analytic checks failed."""
