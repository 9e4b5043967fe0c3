"""Exception types shared across the package."""


class LoopLabError(Exception):
    """Base class for all errors raised by this package."""


class ContextMismatch(LoopLabError):
    """Operands live over different rings, variables or groups."""


class NotAUnit(LoopLabError):
    """Inversion was requested for an element known to be a non-unit."""


class IndeterminatePrecision(LoopLabError):
    """A decision (unit test, minor test) cannot be made at the current precision."""


class NotInBigCell(LoopLabError):
    """A leading principal minor is a non-unit, so no L*D*U factorization exists."""

    def __init__(self, minor_index, message=None):
        self.minor_index = minor_index
        super().__init__(message or f"leading principal minor {minor_index} is not a unit")


class ConstraintViolation(LoopLabError):
    """A constructor precondition fails; carries the computed defect."""

    def __init__(self, message, defect=None):
        self.defect = defect
        super().__init__(message)


class InternalConsistencyError(LoopLabError):
    """A condition the theory guarantees failed to hold; indicates a bug."""


class ParseError(LoopLabError):
    """Malformed textual input; carries the source text and offset."""

    def __init__(self, text, pos, message):
        self.text = text
        self.pos = pos
        super().__init__(message)

    def diagnostic(self):
        caret = " " * self.pos + "^"
        return f"{self.args[0]}\n  {self.text}\n  {caret}"


class SchemaError(LoopLabError):
    """A certificate document violates the expected schema."""
