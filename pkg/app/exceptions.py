"""
Exception hierarchy for the linkage toolkit.

Services raise these; routes translate them into HTTP 400 responses and the
CLI into exit code 2.
"""


class LinkageToolkitError(Exception):
    """Base class for every error raised by the toolkit."""


class InvalidRootSystemError(LinkageToolkitError):
    """Unknown Dynkin series, bad rank or malformed root-system code."""


class WeylGroupTooLargeError(LinkageToolkitError):
    """Weyl group closure exceeded the configured order cap."""


class DimensionMismatchError(LinkageToolkitError):
    """Weight length does not match the rank of the root system."""


class NotARootError(LinkageToolkitError):
    """A weight was used as a root but does not lie in the root set."""


class InvalidWeightError(LinkageToolkitError):
    """Weight text could not be parsed into exact rationals."""


class InvalidLevelError(LinkageToolkitError):
    """Level text is neither a rational nor 'generic'."""


class CriticalLevelError(InvalidLevelError):
    """The level is zero (critical)."""


class BlockPreconditionError(LinkageToolkitError):
    """Preconditions of a block relation failed (coprimality, integrality)."""


class UnsupportedRankError(LinkageToolkitError):
    """The oracle has no matrix realisation for this root system."""


class DepthExceededError(LinkageToolkitError):
    """Requested loop depth is beyond the truncation cap."""


class EmptyWeightSpaceError(LinkageToolkitError):
    """The requested graded piece of the Verma module is zero."""


class OracleError(LinkageToolkitError):
    """Internal consistency check of the oracle failed."""
