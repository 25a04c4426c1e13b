"""Exception hierarchy shared by all modules of the package."""

from typing import Any

__all__ = [
    "HologramError",
    "DomainError",
    "IntegrationError",
    "StepSizeUnderflowError",
    "NonFiniteStateError",
    "PotentialError",
    "PotentialRangeError",
    "IllConditionedRadiiError",
    "ChannelSolveError",
    "EnergyScanError",
    "NoInteriorMinimumError",
    "DataError",
    "ConfigError",
]


class HologramError(Exception):
    """Base class for every error raised by qubit_hologram."""


class DomainError(HologramError, ValueError):
    """An argument lies outside the domain of the called function."""


class IntegrationError(HologramError, ArithmeticError):
    """The Schrödinger integrator could not advance the state.

    Args:
        message: Human readable description.
        t: The evolution parameter at which the failure occurred.
    """

    def __init__(self, message: str, t: float):
        super().__init__(f"{message} (at t={t!r})")
        self.t = t


class StepSizeUnderflowError(IntegrationError):
    """The adaptive step size fell below the resolvable limit."""


class NonFiniteStateError(IntegrationError):
    """The state vector overflowed or became NaN."""


class PotentialError(HologramError, ValueError):
    """A potential cannot be evaluated with the given arguments."""


class PotentialRangeError(PotentialError):
    """A tabulated potential was evaluated outside its sampled range."""

    def __init__(self, r: float, r_min: float, r_max: float):
        super().__init__(
            f"r={r!r} fm lies outside the tabulated range [{r_min!r}, {r_max!r}] fm"
        )
        self.r = r


class IllConditionedRadiiError(HologramError, ArithmeticError):
    """The two matching radii do not determine the phase shift."""


class ChannelSolveError(HologramError):
    """One or more partial-wave channels failed.

    Args:
        failures: Mapping from channel label to the exception raised for it.
    """

    def __init__(self, failures: dict[str, Exception]):
        self.failures = dict(failures)
        summary = "; ".join(f"{label}: {exc}" for label, exc in self.failures.items())
        super().__init__(f"{len(self.failures)} channel(s) failed: {summary}")


class EnergyScanError(HologramError):
    """One or more trial energies of a scan failed."""

    def __init__(self, failures: dict[float, Exception]):
        self.failures = dict(failures)
        summary = "; ".join(f"E={e!r}: {exc}" for e, exc in self.failures.items())
        super().__init__(f"{len(self.failures)} trial energies failed: {summary}")


class NoInteriorMinimumError(HologramError, ValueError):
    """The final amplitude has no interior minimum inside the bracket."""

    def __init__(self, bracket: tuple[float, float], values: Any = None):
        super().__init__(
            f"final amplitude has no interior minimum in bracket {bracket!r}"
        )
        self.bracket = bracket
        self.values = values


class DataError(HologramError, ValueError):
    """Experimental comparison data is unusable."""


class ConfigError(HologramError, ValueError):
    """A configuration document or command-line value is invalid."""
