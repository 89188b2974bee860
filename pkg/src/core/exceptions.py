from typing import Optional


class WaldcheckError(Exception):
    """Base class for all waldcheck errors"""


class CompositionError(WaldcheckError, ValueError):
    """Raised when two morphisms cannot be composed"""


class TruncationOverflow(WaldcheckError, ValueError):
    """Raised when a required colimit lies beyond the truncation bound"""


class ParseError(WaldcheckError, ValueError):
    """Raised on malformed document or morphism text"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(self.__str__())

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        if self.column is None:
            return f"line {self.line}: {self.message}"
        return f"line {self.line}, column {self.column}: {self.message}"


class NaturalityError(WaldcheckError, ValueError):
    """Raised when component maps violate a naturality square"""

    def __init__(self, arrow: int, message: Optional[str] = None):
        self.arrow = arrow
        super().__init__(message or f"naturality square fails at arrow {arrow}")


class RepresentationError(WaldcheckError, ValueError):
    """Raised for representations outside Rep(Q, coE)"""


class CleavageError(WaldcheckError, ValueError):
    """Raised when a cleavage entry is invalid"""


class QuiverError(WaldcheckError, ValueError):
    """Raised for malformed quivers or stage indices out of range"""


class NotLeftRootedError(QuiverError):
    """Raised when a construction needs a left rooted quiver"""
