"""Exception hierarchy.

Configuration and argument problems derive from ValueError so they behave
naturally with code that validates inputs; failures of a computation that
was asked to do something impossible derive from RuntimeError. The CLI maps
the first group to exit code 1 and the second to exit code 2.
"""


class QkdCoexError(Exception):
    """Base class for all package errors."""


class ConfigError(QkdCoexError, ValueError):
    """Invalid scenario/configuration data; message names the offending key
    or the violated invariant."""


class DomainError(QkdCoexError, ValueError):
    """An argument to a pure operation is outside its mathematical domain."""


class UndefinedBoundError(DomainError):
    """A decoy bound is undefined (zero single-photon yield lower bound);
    callers treat the corresponding key rate as zero."""


class ComputationError(QkdCoexError, RuntimeError):
    """A well-posed computation could not produce a result."""


class DegenerateFitError(ComputationError):
    """Least-squares fit has no information (all model values zero)."""


class CalibrationError(ComputationError):
    """Calibration objective was non-finite over the whole search grid."""


class NoSecureDistanceError(ComputationError):
    """The key rate is non-positive over the entire search range."""
