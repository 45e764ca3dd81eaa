"""Exception types shared across the package."""


class SpecdensError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SpecdensError):
    """Malformed input text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnboundVariableError(SpecdensError):
    """A formula mentions a variable the arrangement does not declare."""


class CapExceededError(SpecdensError):
    """A combinatorial operation would exceed the configured variable cap."""

    def __init__(self, needed: int, cap: int):
        super().__init__(
            f"{needed} variables exceed the cap of {cap}; "
            f"raise the cap explicitly to force enumeration"
        )
        self.needed = needed
        self.cap = cap


class SeqExhaustedError(SpecdensError):
    """A finitely described sequence was asked for an index beyond its data."""


class OracleError(SpecdensError):
    """An oracle-backed membership predicate failed or ran out of data."""


class InconclusiveError(SpecdensError):
    """A capped search ended without an answer either way."""


class SchemaError(SpecdensError):
    """An axiom schema is malformed or outside the supported fragment."""


class WitnessError(SpecdensError):
    """No witness formula can be produced for the given theory."""


class TheoryFileError(SpecdensError):
    """A theory definition file is malformed or internally inconsistent."""
