"""
Bounded, decaying keyword ranking.

Every round, existing scores are multiplied by a decay factor, candidate
scores are added (or inserted as new entries), and the set is cut back to
its capacity. Entries are kept in descending score order, ties broken by
ascending token.
"""

from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from keyword_tracker.exceptions import ConfigurationError

Candidate = Tuple[str, float]


class KeywordEntry(BaseModel):
    """One tracked keyword."""

    model_config = ConfigDict(frozen=True)

    token: str
    score: float = Field(ge=0)
    round_introduced: int = Field(ge=0)
    last_active_round: int = Field(ge=0)


def _order(entry: KeywordEntry) -> Tuple[float, str]:
    return (-entry.score, entry.token)


class KeywordSet:
    """Ranked keywords with a hard capacity."""

    def __init__(self, entries: Iterable[KeywordEntry] = (), capacity: int = 100):
        if capacity < 1:
            raise ConfigurationError(f"capacity must be >= 1, got {capacity}")
        ordered = sorted(entries, key=_order)
        if len({e.token for e in ordered}) != len(ordered):
            raise ConfigurationError("Keyword set entries must have distinct tokens")
        self.entries: List[KeywordEntry] = ordered[:capacity]
        self.capacity = capacity

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[KeywordEntry]:
        return iter(self.entries)

    def __contains__(self, token: object) -> bool:
        return any(e.token == token for e in self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KeywordSet):
            return NotImplemented
        return self.entries == other.entries and self.capacity == other.capacity

    def __repr__(self) -> str:
        return f"KeywordSet(size={len(self)}, capacity={self.capacity})"

    def tokens(self) -> List[str]:
        return [e.token for e in self.entries]

    def get(self, token: str) -> Optional[KeywordEntry]:
        for e in self.entries:
            if e.token == token:
                return e
        return None


def rank_and_prune(
    current: KeywordSet,
    candidates: Sequence[Candidate],
    round: int,
    decay: float = 0.7,
    kmax: int = 100,
) -> KeywordSet:
    """Fold one round of candidates into the keyword set.

    Args:
        current: The set after the previous round.
        candidates: (token, score) pairs; repeated tokens add up.
        round: The round the candidates come from.
        decay: Factor in (0, 1] applied to every existing score.
        kmax: Capacity of the returned set.

    Returns:
        A new set; ``current`` is not modified.

    Raises:
        ConfigurationError: On a negative score or invalid decay/kmax.
    """
    if not 0 < decay <= 1:
        raise ConfigurationError(f"decay must be in (0, 1], got {decay}")
    if kmax < 1:
        raise ConfigurationError(f"kmax must be >= 1, got {kmax}")

    merged: Dict[str, KeywordEntry] = {
        e.token: e.model_copy(update={"score": e.score * decay}) for e in current
    }
    for token, score in candidates:
        if score < 0:
            raise ConfigurationError(f"Candidate {token!r} has negative score {score}")
        entry = merged.get(token)
        if entry is None:
            merged[token] = KeywordEntry(
                token=token, score=score, round_introduced=round, last_active_round=round
            )
        else:
            merged[token] = entry.model_copy(
                update={"score": entry.score + score, "last_active_round": round}
            )
    return KeywordSet(merged.values(), capacity=kmax)


def recall(keywords: KeywordSet, planted: Iterable[str]) -> float:
    """Share of ``planted`` tokens present in the set (1.0 for none planted)."""
    targets = set(planted)
    if not targets:
        return 1.0
    present = set(keywords.tokens())
    return len(targets & present) / len(targets)
