"""
Markdown table formatter.
"""

from typing import Sequence

from keyword_tracker.formatters.formatter import ResultFormatter, Row


class MarkdownFormatter(ResultFormatter):
    """Formatter for GitHub-flavored Markdown pipe tables."""

    def format_rows(self, rows: Sequence[Row], columns: Sequence[str]) -> str:
        lines = [
            "| " + " | ".join(columns) + " |",
            "|" + "|".join("---" for _ in columns) + "|",
        ]
        for row in rows:
            cells = [self._escape(self._format_value(row.get(c, ""))) for c in columns]
            lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"

    @staticmethod
    def _escape(cell: str) -> str:
        return cell.replace("|", "\\|")
