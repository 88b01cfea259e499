"""Exception hierarchy shared across the package."""


class TwinbeamError(Exception):
    """Base class for every error raised by this package."""


class DomainError(TwinbeamError, ValueError):
    """An argument or parameter lies outside its mathematical domain."""


class DegeneratePolicyError(DomainError):
    """The decision threshold is so high that the acceptance probability underflows to zero."""


class ProtocolError(TwinbeamError):
    """Alice's and Bob's records cannot be combined (length or index mismatch)."""


class ConfigError(TwinbeamError):
    """A run configuration file is missing, unreadable, or holds an invalid field."""


class DataError(TwinbeamError):
    """A sample file or replayed data stream is malformed."""


class InsufficientDataError(TwinbeamError):
    """Too few samples or conclusive decisions to produce an estimate."""
