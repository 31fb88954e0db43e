"""
Checkpoints of GloVe parameters.

Layout (little-endian): magic ``b"GLVE"``, version (uint32), V (uint32),
D (uint32), then W, Wt, b and bt as float64 in row-major order.
"""

import logging
import struct
from pathlib import Path
from typing import Union

import numpy as np

from keyword_tracker.embedding.glove import EmbeddingModel
from keyword_tracker.exceptions import DataFormatError

logger = logging.getLogger(__name__)

MAGIC = b"GLVE"
VERSION = 1
HEADER = struct.Struct("<4sIII")


def save_checkpoint(model: EmbeddingModel, path: Union[str, Path]) -> None:
    with open(path, "wb") as f:
        f.write(HEADER.pack(MAGIC, VERSION, model.vocab_size, model.dim))
        for array in (model.W, model.Wt, model.b, model.bt):
            f.write(np.ascontiguousarray(array, dtype="<f8").tobytes())
    logger.debug("Saved checkpoint V=%d D=%d to %s", model.vocab_size, model.dim, path)


def load_checkpoint(path: Union[str, Path]) -> EmbeddingModel:
    """Read a checkpoint written by save_checkpoint.

    Raises:
        DataFormatError: On bad magic, unknown version or wrong body size.
    """
    data = Path(path).read_bytes()
    if len(data) < HEADER.size:
        raise DataFormatError(f"{path}: truncated checkpoint header")
    magic, version, vocab_size, dim = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise DataFormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise DataFormatError(f"{path}: unsupported version {version}")
    expected = 8 * (2 * vocab_size * dim + 2 * vocab_size)
    if len(data) - HEADER.size != expected:
        raise DataFormatError(
            f"{path}: expected {expected} body bytes, found {len(data) - HEADER.size}"
        )
    body = np.frombuffer(data, dtype="<f8", offset=HEADER.size).astype(np.float64)
    n = vocab_size * dim
    return EmbeddingModel(
        W=body[:n].reshape(vocab_size, dim).copy(),
        Wt=body[n : 2 * n].reshape(vocab_size, dim).copy(),
        b=body[2 * n : 2 * n + vocab_size].copy(),
        bt=body[2 * n + vocab_size :].copy(),
    )
