"""Exception types shared across the package."""


class ScisummError(Exception):
    """Base class for all package errors."""


class MalformedRecord(ScisummError):
    """A paper record violates the input schema.

    ``field_path`` points at the offending field (dot-separated).
    """

    def __init__(self, field_path: str, message: str = ""):
        self.field_path = field_path
        super().__init__(f"malformed record at '{field_path}'" + (f": {message}" if message else ""))


class EmptyPaper(ScisummError):
    """A record carries neither a title nor any section."""


class MalformedDictionary(ScisummError):
    """An entity dictionary file has a bad line."""

    def __init__(self, path: str, line_no: int, message: str = ""):
        self.path = path
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: bad dictionary line" + (f" ({message})" if message else ""))


class DuplicateId(ScisummError):
    """A paper id was indexed twice."""


class EmptyRequest(ScisummError):
    """A search request carries neither query terms nor any filter."""


class EmptySection(ScisummError):
    """Summarization was asked for a section with no sentences."""
