"""
JSON-lines formatter: one JSON object per row.
"""

import json
from typing import Sequence

from keyword_tracker.formatters.formatter import ResultFormatter, Row


class JSONLinesFormatter(ResultFormatter):
    """Formatter emitting each row as a compact JSON object on its own line.

    Values must be JSON-serializable; nested lists and objects are kept.
    """

    def format_rows(self, rows: Sequence[Row], columns: Sequence[str]) -> str:
        return "".join(
            json.dumps({c: row[c] for c in columns}, ensure_ascii=False) + "\n" for row in rows
        )
