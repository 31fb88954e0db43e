"""
Sparse symmetric co-occurrence table.

Each unordered word pair is stored once under the key (i, j) with i <= j;
the logical matrix is symmetric. Pairs are counted inside a symmetric
window that never crosses document boundaries.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from keyword_tracker.core.config import Weighting
from keyword_tracker.exceptions import ConfigurationError, VocabularyIndexError

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


class CooccurrenceTable:
    """Distance-weighted pair counts X_ij over a fixed vocabulary.

    A single instance must not receive concurrent accumulate calls; build
    shards in separate tables and merge them instead.
    """

    def __init__(
        self,
        vocab_size: int,
        window: int = 10,
        weighting: Weighting = Weighting.INVERSE_DISTANCE,
    ):
        if vocab_size < 0:
            raise ConfigurationError(f"vocab_size must be >= 0, got {vocab_size}")
        if window < 1:
            raise ConfigurationError(f"window must be >= 1, got {window}")
        self.vocab_size = vocab_size
        self.window = window
        self.weighting = Weighting(weighting)
        self.entries: Dict[Pair, float] = {}
        self._csr: Optional[sparse.csr_matrix] = None

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CooccurrenceTable):
            return NotImplemented
        return (
            self.vocab_size == other.vocab_size
            and self.window == other.window
            and self.weighting == other.weighting
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return (
            f"CooccurrenceTable(vocab_size={self.vocab_size}, window={self.window}, "
            f"weighting={self.weighting.value}, entries={len(self)})"
        )

    def get(self, i: int, j: int) -> float:
        """Read X_ij in either orientation (0.0 when absent)."""
        key = (i, j) if i <= j else (j, i)
        return self.entries.get(key, 0.0)

    def accumulate(self, token_ids: Sequence[int]) -> None:
        """Add the in-window pairs of one document.

        For every position pair (p, q) with 0 < q - p <= window the entry
        for (t_p, t_q) grows by 1/(q - p) (inverse distance) or 1 (uniform).
        Repeated tokens accumulate onto the diagonal.

        Raises:
            VocabularyIndexError: If an id is outside [0, vocab_size).
        """
        n = len(token_ids)
        for t in token_ids:
            if not 0 <= t < self.vocab_size:
                raise VocabularyIndexError(
                    f"Word id {t} out of range for vocabulary of size {self.vocab_size}"
                )
        if n < 2:
            return
        inverse = self.weighting == Weighting.INVERSE_DISTANCE
        entries = self.entries
        window = self.window
        for p in range(n - 1):
            a = token_ids[p]
            for d in range(1, min(window, n - 1 - p) + 1):
                b = token_ids[p + d]
                key = (a, b) if a <= b else (b, a)
                entries[key] = entries.get(key, 0.0) + (1.0 / d if inverse else 1.0)
        self._csr = None

    def sorted_items(self) -> List[Tuple[Pair, float]]:
        """Entries in ascending (i, j) order."""
        return sorted(self.entries.items())

    def to_arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Stored entries as (rows, cols, values) arrays in ascending key order."""
        items = self.sorted_items()
        rows = np.fromiter((k[0] for k, _ in items), dtype=np.int64, count=len(items))
        cols = np.fromiter((k[1] for k, _ in items), dtype=np.int64, count=len(items))
        vals = np.fromiter((v for _, v in items), dtype=np.float64, count=len(items))
        return rows, cols, vals

    def to_csr(self) -> sparse.csr_matrix:
        """The full symmetric matrix, both orientations, diagonal once."""
        if self._csr is None:
            rows, cols, vals = self.to_arrays()
            off = rows != cols
            all_rows = np.concatenate([rows, cols[off]])
            all_cols = np.concatenate([cols, rows[off]])
            all_vals = np.concatenate([vals, vals[off]])
            self._csr = sparse.coo_matrix(
                (all_vals, (all_rows, all_cols)),
                shape=(self.vocab_size, self.vocab_size),
            ).tocsr()
        return self._csr

    def to_dense(self) -> np.ndarray:
        return self.to_csr().toarray()

    def row(self, i: int) -> List[Tuple[int, float]]:
        """All (j, X_ij) with X_ij > 0, by descending weight then ascending j.

        Raises:
            VocabularyIndexError: If i is outside the vocabulary.
        """
        if not 0 <= i < self.vocab_size:
            raise VocabularyIndexError(
                f"Word id {i} out of range for vocabulary of size {self.vocab_size}"
            )
        csr = self.to_csr()
        start, end = csr.indptr[i], csr.indptr[i + 1]
        pairs = zip(csr.indices[start:end].tolist(), csr.data[start:end].tolist())
        return sorted(pairs, key=lambda jx: (-jx[1], jx[0]))

    def total_weight(self) -> float:
        """Sum over stored unordered pairs, in ascending key order."""
        return math.fsum(v for _, v in self.sorted_items())


def merge(tables: Sequence[CooccurrenceTable]) -> CooccurrenceTable:
    """Entry-wise sum of tables built over the same vocabulary and window.

    Each key is summed with math.fsum, so the result does not depend on
    the order of the input tables.

    Raises:
        ConfigurationError: On an empty input or mismatched tables.
    """
    if not tables:
        raise ConfigurationError("merge() needs at least one table")
    first = tables[0]
    for t in tables[1:]:
        if (t.vocab_size, t.window, t.weighting) != (first.vocab_size, first.window, first.weighting):
            raise ConfigurationError(
                f"Cannot merge tables with different settings: "
                f"({first.vocab_size}, {first.window}, {first.weighting.value}) vs "
                f"({t.vocab_size}, {t.window}, {t.weighting.value})"
            )
    merged = CooccurrenceTable(first.vocab_size, first.window, first.weighting)
    keys = sorted(set().union(*(t.entries.keys() for t in tables)))
    for key in keys:
        merged.entries[key] = math.fsum(t.entries[key] for t in tables if key in t.entries)
    return merged


def build_table(
    id_sequences: Iterable[Sequence[int]],
    vocab_size: int,
    window: int = 10,
    weighting: Weighting = Weighting.INVERSE_DISTANCE,
    shards: int = 1,
) -> CooccurrenceTable:
    """Build a table from documents, optionally in parallel shards.

    Documents are split into ``shards`` contiguous groups, each accumulated
    into its own table (on a thread pool when shards > 1), then merged.
    """
    docs = [list(seq) for seq in id_sequences]
    shards = max(1, min(shards, len(docs) or 1))
    if shards == 1:
        table = CooccurrenceTable(vocab_size, window, weighting)
        for ids in docs:
            table.accumulate(ids)
    else:
        bounds = np.linspace(0, len(docs), shards + 1).astype(int)
        groups = [docs[bounds[s] : bounds[s + 1]] for s in range(shards)]

        def _accumulate(group: List[List[int]]) -> CooccurrenceTable:
            shard = CooccurrenceTable(vocab_size, window, weighting)
            for ids in group:
                shard.accumulate(ids)
            return shard

        with ThreadPoolExecutor(max_workers=shards) as pool:
            table = merge(list(pool.map(_accumulate, groups)))
    logger.info(
        "Built co-occurrence table: %d entries from %d documents (window=%d, %s, %d shard(s))",
        len(table),
        len(docs),
        window,
        table.weighting.value,
        shards,
    )
    return table
