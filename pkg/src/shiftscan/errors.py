"""Exception hierarchy shared by the shiftscan modules."""

from __future__ import annotations


class ShiftscanError(Exception):
    """Base class for all errors raised by shiftscan."""


class EmptyRef(ShiftscanError, ValueError):
    """A cited-reference string was empty after trimming."""


class InvalidThreshold(ShiftscanError, ValueError):
    pass


class DuplicateRecord(ShiftscanError, ValueError):
    pass


class YearOutOfRange(ShiftscanError, ValueError):
    def __init__(self, record_id: str, year: int, year_range: tuple[int, int]):
        self.record_id = record_id
        self.year = year
        self.year_range = year_range
        lo, hi = year_range
        super().__init__(f"record {record_id!r} has year {year} outside {lo}:{hi}")


class ParseError(ShiftscanError):
    """Tag-structure violation in an export file.

    ``line_no`` is 1-based and points at the offending line.
    """

    def __init__(self, message: str, line_no: int, source: str | None = None):
        self.message = message
        self.line_no = line_no
        self.source = source
        super().__init__(message, line_no)

    def __str__(self) -> str:
        where = f"{self.source}:{self.line_no}" if self.source else f"line {self.line_no}"
        return f"{where}: {self.message}"


class MalformedRecord(ParseError):
    """A structurally valid record block lacks a required field."""


class ThresholdMismatch(ShiftscanError, ValueError):
    pass


class InsufficientYears(ShiftscanError, ValueError):
    pass


class EmptySlice(ShiftscanError, ZeroDivisionError):
    """Raised when a ratio would be taken against an empty year slice."""


class BadQuery(ShiftscanError, ValueError):
    pass


class StopwordQuery(BadQuery):
    pass


class WindowOverlap(ShiftscanError, ValueError):
    pass


class WindowOrder(ShiftscanError, ValueError):
    pass
