"""Exception hierarchy shared across the package."""


class CtqwError(Exception):
    """Base class for all package errors."""


class ConfigError(CtqwError):
    """Malformed or inconsistent experiment configuration."""


class GraphGenerationError(CtqwError):
    """A random-graph generator exhausted its retry budget."""


class InvalidStateError(CtqwError):
    """A density matrix violated a physical-validity tolerance."""


class IntegrationError(CtqwError):
    """The ODE integrator failed; carries the last successfully reached time."""

    def __init__(self, message: str, last_good_time: float):
        super().__init__(message)
        self.last_good_time = last_good_time
