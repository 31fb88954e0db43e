"""
Exception hierarchy for the keyword tracker.

Every fatal condition raised by the pipeline derives from
KeywordTrackerError so the command-line entry point can map it to an
exit code in one place.
"""

from typing import List, Optional, Sequence


class KeywordTrackerError(Exception):
    """Base class for all keyword tracker errors."""


class ConfigurationError(KeywordTrackerError, ValueError):
    """Raised when settings are invalid or cannot be satisfied by the data."""


class UsageError(ConfigurationError):
    """Raised for malformed command-line usage."""


class DataFormatError(KeywordTrackerError, ValueError):
    """Raised when an input file does not follow its documented format.

    Attributes:
        line_number: 1-based line number of the offending line, if known.
    """

    def __init__(self, message: str, line_number: Optional[int] = None):
        super().__init__(message)
        self.line_number = line_number


class VocabularyIndexError(KeywordTrackerError, IndexError):
    """Raised when a word id falls outside the vocabulary."""


class UnknownTokenError(KeywordTrackerError, KeyError):
    """Raised when a token is not present in a vector space or vocabulary.

    Attributes:
        token: The token that could not be resolved.
        suggestions: In-vocabulary spellings close to the token.
    """

    def __init__(self, token: str, suggestions: Sequence[str] = ()):
        self.token = token
        self.suggestions: List[str] = list(suggestions)
        message = f"Unknown token: {token!r}"
        if self.suggestions:
            message += f" (did you mean: {', '.join(self.suggestions)})"
        super().__init__(message)

    def __str__(self) -> str:
        # KeyError quotes its argument; keep the plain message instead
        return str(self.args[0])


class ExtractionError(KeywordTrackerError):
    """Raised when keyword extraction or the collection loop cannot proceed."""


class NumericError(KeywordTrackerError, ArithmeticError):
    """Raised when training or projection produces non-finite values.

    Attributes:
        entry: The (i, j) table entry being processed, if applicable.
    """

    def __init__(self, message: str, entry: Optional[tuple] = None):
        super().__init__(message)
        self.entry = entry


class DomainError(NumericError, ValueError):
    """Raised when a function is evaluated outside its mathematical domain."""
