"""
Base collector interface.

A collector answers keyword queries with documents, standing in for a
social-media search API. Implementations must be deterministic given the
keywords, the limit, the current round and their own corpus or seed.
"""

from abc import ABC, abstractmethod
from typing import FrozenSet, List, Sequence

from keyword_tracker.corpus.documents import Document


class CollectorPort(ABC):
    """Base class for document collectors.

    The collection loop calls set_round() before each round's query, so
    collectors whose corpus changes over time can serve the matching slice.
    """

    def __init__(self) -> None:
        self.round = 1

    def set_round(self, round: int) -> None:
        """Select the round subsequent queries are answered from.

        Args:
            round: 1-based round number.
        """
        if round < 1:
            raise ValueError(f"round must be >= 1, got {round}")
        self.round = round

    @abstractmethod
    def query(self, keywords: Sequence[str], limit: int) -> List[Document]:
        """Return up to ``limit`` documents matching any of ``keywords``.

        Args:
            keywords: Query tokens, compared against tokenized document text.
            limit: Maximum number of documents.

        Returns:
            Matching documents in corpus order.
        """
        pass

    @staticmethod
    def _select(
        candidates: Sequence[tuple], keywords: Sequence[str], limit: int
    ) -> List[Document]:
        """First ``limit`` (document, token set) pairs whose tokens meet the query."""
        wanted: FrozenSet[str] = frozenset(keywords)
        selected: List[Document] = []
        if limit < 1 or not wanted:
            return selected
        for doc, tokens in candidates:
            if tokens & wanted:
                selected.append(doc)
                if len(selected) == limit:
                    break
        return selected
