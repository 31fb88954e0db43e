"""
Binary storage for co-occurrence tables.

Layout (little-endian): a header of magic ``b"COOC"``, format version
(uint32), vocabulary size (uint32), window (uint32), weighting code
(uint32) and record count (uint64), followed by the records as
(i: uint32, j: uint32, x: float64) in ascending (i, j) order.
"""

import struct
from pathlib import Path
from typing import Union

import numpy as np

from keyword_tracker.cooccurrence.table import CooccurrenceTable
from keyword_tracker.core.config import Weighting
from keyword_tracker.exceptions import DataFormatError

MAGIC = b"COOC"
VERSION = 1
HEADER = struct.Struct("<4sIIIIQ")
RECORD_DTYPE = np.dtype([("i", "<u4"), ("j", "<u4"), ("x", "<f8")])

_WEIGHTING_CODES = {Weighting.INVERSE_DISTANCE: 0, Weighting.UNIFORM: 1}
_CODE_WEIGHTINGS = {code: w for w, code in _WEIGHTING_CODES.items()}


def save_binary(table: CooccurrenceTable, path: Union[str, Path]) -> None:
    """Write a table; the round trip through load_binary is bit-exact."""
    rows, cols, vals = table.to_arrays()
    records = np.empty(len(vals), dtype=RECORD_DTYPE)
    records["i"] = rows
    records["j"] = cols
    records["x"] = vals
    header = HEADER.pack(
        MAGIC,
        VERSION,
        table.vocab_size,
        table.window,
        _WEIGHTING_CODES[table.weighting],
        len(records),
    )
    with open(path, "wb") as f:
        f.write(header)
        f.write(records.tobytes())


def load_binary(path: Union[str, Path]) -> CooccurrenceTable:
    """Read a table written by save_binary.

    Raises:
        FileNotFoundError: If the file does not exist.
        DataFormatError: On bad magic, unknown version, or a truncated or
            oversized body. No partial table is returned.
    """
    data = Path(path).read_bytes()
    if len(data) < HEADER.size:
        raise DataFormatError(f"{path}: truncated header ({len(data)} bytes)")
    magic, version, vocab_size, window, code, count = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise DataFormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise DataFormatError(f"{path}: unsupported version {version}")
    if code not in _CODE_WEIGHTINGS:
        raise DataFormatError(f"{path}: unknown weighting code {code}")
    body = len(data) - HEADER.size
    if body != count * RECORD_DTYPE.itemsize:
        raise DataFormatError(
            f"{path}: expected {count} records ({count * RECORD_DTYPE.itemsize} bytes), "
            f"found {body} bytes"
        )

    records = np.frombuffer(data, dtype=RECORD_DTYPE, count=count, offset=HEADER.size)
    if count and (
        np.any(records["i"] > records["j"]) or np.any(records["j"] >= vocab_size)
    ):
        raise DataFormatError(f"{path}: record ids violate i <= j < vocab_size")

    table = CooccurrenceTable(vocab_size, window, _CODE_WEIGHTINGS[code])
    table.entries = {
        (int(i), int(j)): float(x)
        for i, j, x in zip(records["i"].tolist(), records["j"].tolist(), records["x"].tolist())
    }
    return table
