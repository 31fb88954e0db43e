"""
CSV formatter and parser backed by pandas.
"""

import io
from pathlib import Path
from typing import Dict, Optional, Sequence, Union

import pandas as pd

from keyword_tracker.formatters.formatter import ResultFormatter, Row


class CSVFormatter(ResultFormatter):
    """Formatter for comma-separated output with a header row.

    Floats are written with their shortest round-trip representation
    unless a ``float_format`` is given. An empty row list yields the
    header alone.
    """

    def format_rows(self, rows: Sequence[Row], columns: Sequence[str]) -> str:
        frame = pd.DataFrame([{c: row[c] for c in columns} for row in rows], columns=list(columns))
        return frame.to_csv(index=False, lineterminator="\n", float_format=self.float_format)


def read_csv(
    source: Union[str, Path, io.StringIO],
    dtypes: Optional[Dict[str, type]] = None,
) -> pd.DataFrame:
    """Read a CSV written by CSVFormatter.

    Token columns stay strings: values such as ``nan`` or ``null`` are not
    converted to missing values.

    Args:
        source: A path or a text buffer.
        dtypes: Column dtypes to enforce.
    """
    return pd.read_csv(
        source, keep_default_na=False, na_values=[], dtype=dtypes, float_precision="round_trip"
    )
