"""Exception types shared across the package."""


class MarketComplexityError(Exception):
    """Base class for all errors raised by this package."""


class CsvParseError(MarketComplexityError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SeriesTooShortError(MarketComplexityError):
    pass


class DegenerateSeriesError(MarketComplexityError):
    pass


class AlignmentError(MarketComplexityError):
    pass


class CodeStreamError(MarketComplexityError):
    pass


class TableFormatError(MarketComplexityError):
    pass


class ConfigError(MarketComplexityError):
    pass
