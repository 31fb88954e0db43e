"""
Result formatters for pipeline outputs.

This package contains formatters for converting result rows into CSV,
Markdown tables and JSON lines.
"""

from keyword_tracker.formatters.csv_formatter import CSVFormatter, read_csv
from keyword_tracker.formatters.formatter import ResultFormatter
from keyword_tracker.formatters.jsonl_formatter import JSONLinesFormatter
from keyword_tracker.formatters.markdown_formatter import MarkdownFormatter

__all__ = [
    "ResultFormatter",
    "CSVFormatter",
    "MarkdownFormatter",
    "JSONLinesFormatter",
    "read_csv",
]
