"""
Immutable token-to-vector maps and cosine queries over them.

Text format: one line per token, the token followed by D space-separated
reals. Files are written with 6 significant digits and read at any
precision, so pre-trained GloVe releases load directly.
"""

import logging
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from nltk.metrics.distance import edit_distance

from keyword_tracker.exceptions import (
    ConfigurationError,
    DataFormatError,
    DomainError,
    NumericError,
    UnknownTokenError,
)
from keyword_tracker.formatters.csv_formatter import CSVFormatter

logger = logging.getLogger(__name__)

Neighbor = Tuple[str, float]

MAX_SUGGESTIONS = 5
SUGGESTION_DISTANCE = 2


class VectorSpace:
    """Word vectors for one domain.

    Attributes:
        tokens: Tokens in row order.
        vectors: Read-only V x D array.
        domain: Free-form label (e.g. ``metoo``).
    """

    def __init__(self, tokens: Sequence[str], vectors: np.ndarray, domain: str = "default"):
        vectors = np.array(vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[1] < 1:
            raise ConfigurationError(f"Vectors must be a V x D array with D >= 1, got {vectors.shape}")
        if len(tokens) != vectors.shape[0]:
            raise ConfigurationError(f"{len(tokens)} tokens for {vectors.shape[0]} vectors")
        if not np.isfinite(vectors).all():
            raise NumericError("Vector space contains non-finite values")
        self.tokens: List[str] = list(tokens)
        self.index = {t: i for i, t in enumerate(self.tokens)}
        if len(self.index) != len(self.tokens):
            raise DataFormatError("Vector space contains duplicate tokens")
        vectors.setflags(write=False)
        self.vectors = vectors
        self.domain = domain
        self._norms = np.sqrt(np.einsum("ij,ij->i", vectors, vectors))
        self._norms.setflags(write=False)
        # position of each token in sorted order, for tie-breaking
        self._token_rank = np.empty(len(self.tokens), dtype=np.int64)
        self._token_rank[np.argsort(np.array(self.tokens, dtype=object), kind="stable")] = np.arange(
            len(self.tokens)
        )

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: object) -> bool:
        return token in self.index

    def __repr__(self) -> str:
        return f"VectorSpace(domain={self.domain!r}, size={len(self)}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def vector(self, token: str) -> np.ndarray:
        """The vector for ``token``.

        Raises:
            UnknownTokenError: With close in-vocabulary spellings as hints.
        """
        idx = self.index.get(token)
        if idx is None:
            raise UnknownTokenError(token, self.suggest(token))
        return self.vectors[idx]

    def suggest(self, token: str) -> List[str]:
        """Up to five tokens within edit distance 2, closest first."""
        scored = []
        for candidate in self.tokens:
            if abs(len(candidate) - len(token)) > SUGGESTION_DISTANCE:
                continue
            d = edit_distance(token, candidate)
            if d <= SUGGESTION_DISTANCE:
                scored.append((d, candidate))
        return [t for _, t in sorted(scored)[:MAX_SUGGESTIONS]]

    def scaled(self, factor: float) -> "VectorSpace":
        return VectorSpace(self.tokens, self.vectors * factor, self.domain)

    def similarities(self, query: np.ndarray) -> np.ndarray:
        """Cosine of every vector with ``query`` (0 for zero-norm rows)."""
        q = np.asarray(query, dtype=np.float64)
        if q.shape != (self.dim,):
            raise ConfigurationError(f"Query has shape {q.shape}, expected ({self.dim},)")
        q_norm = float(np.sqrt(q @ q))
        if q_norm == 0.0:
            raise DomainError("Cosine similarity is undefined for a zero-norm query")
        dots = np.einsum("ij,j->i", self.vectors, q)
        denom = self._norms * q_norm
        return np.divide(dots, denom, out=np.zeros_like(dots), where=denom > 0)

    def rank(self, sims: np.ndarray) -> np.ndarray:
        """Row indices by descending similarity, ties by ascending token."""
        return np.lexsort((self._token_rank, -sims))


def cosine(a: Sequence[float], b: Sequence[float]) -> float:
    """Cosine similarity (a . b) / (|a| |b|).

    Raises:
        ConfigurationError: If the dimensions differ.
        DomainError: If either vector has zero norm.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ConfigurationError(f"Dimension mismatch: {a.shape} vs {b.shape}")
    na = float(np.sqrt(a @ a))
    nb = float(np.sqrt(b @ b))
    if na == 0.0 or nb == 0.0:
        raise DomainError("Cosine similarity is undefined for zero-norm vectors")
    # rounding can push |cos| a hair above 1
    return float(np.clip((a @ b) / (na * nb), -1.0, 1.0))


def nearest_neighbors(
    space: VectorSpace,
    query: Union[str, Sequence[float], np.ndarray],
    k: int,
    exclude: Iterable[str] = (),
) -> List[Neighbor]:
    """Exact top-k cosine neighbors of a token or raw vector.

    Args:
        space: The space to scan.
        query: A token (omitted from the results) or a D-dimensional vector.
        k: Maximum number of neighbors; 0 yields an empty list.
        exclude: Tokens to omit.

    Returns:
        (token, similarity) pairs by descending similarity, ties by
        ascending token.

    Raises:
        UnknownTokenError: If ``query`` is a token not in the space.
    """
    if k < 0:
        raise ConfigurationError(f"k must be >= 0, got {k}")
    skip = set(exclude)
    if isinstance(query, str):
        vector = space.vector(query)
        skip.add(query)
    else:
        vector = np.asarray(query, dtype=np.float64)
    sims = space.similarities(vector)
    results: List[Neighbor] = []
    if k == 0:
        return results
    for idx in space.rank(sims):
        token = space.tokens[idx]
        if token in skip:
            continue
        results.append((token, float(sims[idx])))
        if len(results) == k:
            break
    return results


def analogy(space: VectorSpace, a: str, b: str, c: str, k: int = 10) -> List[Neighbor]:
    """Tokens nearest to vec(b) - vec(a) + vec(c), excluding a, b and c."""
    query = (space.vector(b) - space.vector(a)) + space.vector(c)
    return nearest_neighbors(space, query, k, exclude={a, b, c})


def save_text(space: VectorSpace, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for token, row in zip(space.tokens, space.vectors):
            f.write(token + " " + " ".join(f"{x:.6g}" for x in row.tolist()) + "\n")
    logger.info("Wrote %d vectors (D=%d) to %s", len(space), space.dim, path)


def load_text(path: Union[str, Path], domain: Optional[str] = None) -> VectorSpace:
    """Load vectors in the GloVe text format.

    The dimension is taken from the first non-blank line.

    Args:
        path: The vectors file.
        domain: Label for the space; defaults to the file stem.

    Raises:
        DataFormatError: On a line of a different width, a non-numeric
            value or a duplicate token, naming the line.
    """
    tokens: List[str] = []
    rows: List[np.ndarray] = []
    seen = set()
    dim: Optional[int] = None
    with open(path, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, 1):
            parts = line.split()
            if not parts:
                continue
            if dim is None:
                dim = len(parts) - 1
                if dim < 1:
                    raise DataFormatError(f"{path}:{line_number}: no vector values", line_number)
            if len(parts) - 1 != dim:
                raise DataFormatError(
                    f"{path}:{line_number}: expected {dim} values, found {len(parts) - 1}",
                    line_number,
                )
            token = parts[0]
            if token in seen:
                raise DataFormatError(f"{path}:{line_number}: duplicate token {token!r}", line_number)
            try:
                rows.append(np.array(parts[1:], dtype=np.float64))
            except ValueError:
                raise DataFormatError(f"{path}:{line_number}: non-numeric value", line_number) from None
            seen.add(token)
            tokens.append(token)
    if dim is None:
        raise DataFormatError(f"{path}: no vectors found")
    label = domain if domain is not None else Path(path).stem
    logger.info("Loaded %d vectors (D=%d) from %s", len(tokens), dim, path)
    return VectorSpace(tokens, np.vstack(rows), domain=label)


def wordcloud_export(space: VectorSpace, query: str, k: int, path: Union[str, Path]) -> List[Neighbor]:
    """Write the neighbors of ``query`` as ``token,similarity`` CSV rows.

    Returns:
        The exported neighbors.
    """
    neighbors = nearest_neighbors(space, query, k)
    rows = [{"token": t, "similarity": s} for t, s in neighbors]
    CSVFormatter().write(rows, ["token", "similarity"], path)
    return neighbors
