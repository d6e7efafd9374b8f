"""Exceptions shared across the package."""


class Infeasible(Exception):
    """Raised when an augmentation instance admits no feasible solution."""


class SizeGuardError(Exception):
    """Raised when an input exceeds the documented size bound of an exact routine."""


class StreamFormatError(Exception):
    """Raised on malformed stream text; carries a 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
        self.message = message
