"""Exception types raised by hybsel.

Everything derives from ValueError so callers that only know about
bad-argument errors keep working.
"""


class HybselError(ValueError):
    """Base class for all hybsel errors."""


class QueryError(HybselError):
    """A query argument is out of range or the needed index is missing."""


class FormatError(HybselError):
    """A serialized stream is malformed (magic, version, truncation, tags)."""


class InputError(HybselError):
    """Input data violates a construction precondition."""


class OracleMismatchError(HybselError):
    """A benchmark correctness pass disagreed with its oracle."""
