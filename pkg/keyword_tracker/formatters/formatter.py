"""
Base formatter class for tabular pipeline outputs.

This module defines the base formatter interface shared by every export:
wordcloud data, cluster reports, projections, keyword candidates, domain
comparison reports and iteration histories.
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence, Union

Row = Mapping[str, Any]


class ResultFormatter(ABC):
    """Base class for result formatters.

    Formatters render a sequence of rows (mappings from column name to
    value) into text. Rows may carry extra keys; only ``columns`` are
    rendered, in that order.
    """

    def __init__(self, float_format: Optional[str] = None):
        """Initialize the formatter with formatting options.

        Args:
            float_format: printf-style format for floats (e.g. ``"%.6f"``).
                None keeps the shortest exact representation.
        """
        self.float_format = float_format

    @abstractmethod
    def format_rows(self, rows: Sequence[Row], columns: Sequence[str]) -> str:
        """Render rows as text.

        Args:
            rows: The rows to render.
            columns: Column names, in output order.

        Returns:
            The formatted text, ending with a newline.
        """
        pass

    def write(self, rows: Sequence[Row], columns: Sequence[str], path: Union[str, Path]) -> None:
        """Render rows and write them to ``path`` as UTF-8."""
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(self.format_rows(rows, columns))

    def _format_value(self, value: Any) -> str:
        if isinstance(value, float) and self.float_format:
            return self.float_format % value
        return str(value)
