"""
Co-occurrence statistics for the keyword tracker.

This package builds the sparse symmetric distance-weighted pair table the
GloVe objective is fit against, and stores it in a compact binary format.
"""

from keyword_tracker.cooccurrence.storage import load_binary, save_binary
from keyword_tracker.cooccurrence.table import CooccurrenceTable, build_table, merge

__all__ = ["CooccurrenceTable", "build_table", "merge", "load_binary", "save_binary"]
