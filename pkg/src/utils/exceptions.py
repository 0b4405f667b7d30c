class SuperbiderError(Exception):
    """
    Base class for every error raised by the verification library.
    """


class FieldError(SuperbiderError):
    """
    Raised when a scalar field cannot be constructed or an element has no inverse.
    """


class TableConstructionError(SuperbiderError):
    """
    Raised when a basis does not close under the bracket or a table
    violates one of its structural invariants.
    """

    def __init__(self, message: str, pair: tuple[int, int] | None = None) -> None:
        super().__init__(message)
        self.pair = pair


class FamilyError(SuperbiderError):
    """
    Raised for an unknown family or an invalid generator count.
    """


class TableFormatError(SuperbiderError):
    """
    Raised when a structure-constant file cannot be parsed.
    """


class ResourceLimitError(SuperbiderError):
    """
    Raised when a block exceeds its configured row budget.
    """
