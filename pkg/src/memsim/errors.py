"""Exception types shared across the package."""


class MemsimError(Exception):
    """Base class for all package errors."""


class UnknownModeError(MemsimError, KeyError):
    """A mode label is not present in the registry."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown mode"


class PhysicalityError(MemsimError, ValueError):
    """A covariance matrix or transform violates the uncertainty relation or symplectic condition."""


class DomainError(MemsimError, ValueError):
    """Parameters fall outside the validity domain of a formula (e.g. resonant Raman detuning)."""


class DimensionError(MemsimError, ValueError):
    """A truncated Hilbert space would exceed the desk-scale dimension guard."""


class ConfigError(MemsimError, ValueError):
    """Malformed run configuration."""
