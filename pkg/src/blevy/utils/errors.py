"""Exception hierarchy shared by every blevy subpackage."""

from __future__ import annotations


class BlevyError(Exception):
    """Root of all errors raised by blevy."""


class InvalidParameter(BlevyError, ValueError):
    """A model, law or experiment field lies outside its allowed range.

    Parameters
    ----------
    field : str
        Dotted name of the offending field (e.g. ``"model.lambda"``).
    message : str
        Human readable explanation.

    """

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


class SubcriticalOrCritical(InvalidParameter):
    """The offspring law has mean at most one."""

    def __init__(self, mean_offspring: float) -> None:
        super().__init__(
            "model.offspring",
            f"E[N] = {mean_offspring!r} must be > 1 (supercritical)",
        )
        self.mean_offspring = mean_offspring


class ConfigParseError(InvalidParameter):
    """A config file line could not be turned into a valid field."""


class NoConvergence(BlevyError, RuntimeError):
    """A fixed-point iteration did not settle within its step budget."""

    def __init__(self, steps: int) -> None:
        super().__init__(f"fixed-point iteration did not converge in {steps} steps")
        self.steps = steps


class IntegrationFailed(BlevyError, RuntimeError):
    """The moment ODE solver stopped before reaching the requested time."""

    def __init__(self, reason: str) -> None:
        super().__init__(f"moment integration failed: {reason}")
        self.reason = reason


class NegativeDuration(BlevyError, ValueError):
    """A motion increment was requested over a negative time span."""

    def __init__(self, dt: float) -> None:
        super().__init__(f"increment duration must be >= 0, got {dt!r}")
        self.dt = dt


class InvalidCheckpoints(BlevyError, ValueError):
    """A checkpoint grid is empty, negative or not strictly increasing."""


class MaxAttemptsExhausted(BlevyError, RuntimeError):
    """Rejection sampling for a surviving run gave up."""

    def __init__(self, attempts: int) -> None:
        super().__init__(f"no surviving run after {attempts} attempts")
        self.attempts = attempts


class InsufficientReplicates(BlevyError, ValueError):
    """Too few usable replicates to form an estimate."""

    def __init__(self, needed: int, got: int, what: str = "replicates") -> None:
        super().__init__(f"need at least {needed} {what}, got {got}")
        self.needed = needed
        self.got = got
