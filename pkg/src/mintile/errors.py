"""Exception hierarchy shared by every module."""


class MintileError(Exception):
    """Base class for all errors raised by mintile."""


class ParseError(MintileError):
    """Malformed input document; ``line``/``column`` locate JSON syntax errors."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class InstanceError(MintileError):
    """Semantically invalid instance (empty scenario, scenario equal to F, ...)."""


class CapExceeded(MintileError):
    """A configurable size cap was exceeded."""

    cap_name = "cap"

    def __init__(self, value, cap):
        super().__init__(f"{self.cap_name}: {value} exceeds cap {cap}")
        self.value = value
        self.cap = cap


class UniverseTooLarge(CapExceeded):
    cap_name = "universe size |F|"


class TooManyScenarios(CapExceeded):
    cap_name = "scenario count k"


class SearchSpaceTooLarge(MintileError):
    pass


class NotAForest(MintileError):
    pass


class InfeasibleInput(MintileError):
    pass


class SingletonPart(MintileError):
    pass


class MissingBudget(MintileError):
    pass


class UnknownVariable(MintileError):
    pass


class MalformedSet(MintileError):
    pass


class MalformedTriple(MalformedSet):
    pass


class InvalidSizeBound(MintileError):
    pass


class SizeMismatch(MintileError):
    pass
