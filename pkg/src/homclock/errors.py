"""Exception types shared across the package.

The CLI maps these onto process exit codes; everything else raises them
directly.
"""


class HomclockError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(HomclockError, ValueError):
    """A value is outside the domain an operation accepts."""


class RegistryError(HomclockError, ValueError):
    """A mode is missing from, or incompatible with, a state's registry."""


class InvalidPairingError(HomclockError, ValueError):
    """Beam-splitter inputs belong to different frequency bins."""


class EmptyProjectionError(HomclockError, ValueError):
    """A post-selection projector annihilated the state."""


class OutOfRegimeError(HomclockError, ValueError):
    """Parameters violate the first-order weak-field validity guard."""


class NoCollapseError(HomclockError, ValueError):
    """The interference phase is static, so no collapse time exists."""


class NoZeroError(HomclockError, ValueError):
    """Root bracketing failed: the signal has no zero crossing."""


class InvalidGridError(HomclockError, ValueError):
    """A sample grid is not uniform/dense enough for the requested analysis."""


class CapabilityError(HomclockError, ValueError):
    """The request exceeds the exact engine's configured photon-number cap."""


class ConfigError(HomclockError, ValueError):
    """CLI configuration is invalid; message lists field paths."""
