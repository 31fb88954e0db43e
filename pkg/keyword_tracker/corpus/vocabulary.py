"""
Frequency-filtered vocabulary.

Word ids are contiguous, assigned by descending corpus frequency with
ties broken by ascending token. The TSV file format has a
``token<TAB>id<TAB>count`` header followed by one row per id.
"""

import logging
from collections import Counter
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Union

from keyword_tracker.core.config import TokenRules
from keyword_tracker.corpus.documents import Document
from keyword_tracker.corpus.tokenizer import tokenize
from keyword_tracker.exceptions import ConfigurationError, DataFormatError

logger = logging.getLogger(__name__)

TSV_HEADER = "token\tid\tcount"


class Vocabulary:
    """Bidirectional token/id map with corpus frequencies.

    Attributes:
        tokens: Tokens in id order.
        index: Token to id.
        counts: Corpus frequency per id.
        min_count: The frequency threshold the vocabulary was built with.
        total_tokens: Token occurrences in the corpus before filtering.
        dropped_tokens: Occurrences of tokens filtered out by min_count.
    """

    def __init__(
        self,
        tokens: Sequence[str],
        counts: Sequence[int],
        min_count: int = 1,
        total_tokens: Optional[int] = None,
        dropped_tokens: int = 0,
    ):
        if len(tokens) != len(counts):
            raise ValueError("tokens and counts must have the same length")
        self.tokens: List[str] = list(tokens)
        self.counts: List[int] = [int(c) for c in counts]
        self.index: Dict[str, int] = {t: i for i, t in enumerate(self.tokens)}
        if len(self.index) != len(self.tokens):
            raise DataFormatError("Vocabulary contains duplicate tokens")
        self.min_count = min_count
        kept = sum(self.counts)
        self.total_tokens = kept + dropped_tokens if total_tokens is None else total_tokens
        self.dropped_tokens = dropped_tokens

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: object) -> bool:
        return token in self.index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return self.tokens == other.tokens and self.counts == other.counts

    def __repr__(self) -> str:
        return f"Vocabulary(size={len(self)}, min_count={self.min_count})"

    def id_of(self, token: str) -> Optional[int]:
        return self.index.get(token)

    def count_of(self, token: str) -> int:
        idx = self.index.get(token)
        return 0 if idx is None else self.counts[idx]

    def frequencies(self) -> Dict[str, int]:
        return dict(zip(self.tokens, self.counts))

    def encode(self, tokens: Iterable[str]) -> List[int]:
        """Map tokens to ids, dropping out-of-vocabulary tokens."""
        index = self.index
        return [index[t] for t in tokens if t in index]

    def save_tsv(self, path: Union[str, Path]) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(TSV_HEADER + "\n")
            for i, (token, count) in enumerate(zip(self.tokens, self.counts)):
                f.write(f"{token}\t{i}\t{count}\n")

    @classmethod
    def load_tsv(cls, path: Union[str, Path]) -> "Vocabulary":
        """Load a vocabulary written by save_tsv.

        Raises:
            DataFormatError: On a bad header, malformed row or id gap.
        """
        tokens: List[str] = []
        counts: List[int] = []
        with open(path, "r", encoding="utf-8") as f:
            header = f.readline().rstrip("\n")
            if header != TSV_HEADER:
                raise DataFormatError(f"{path}: bad vocabulary header {header!r}", 1)
            for line_number, line in enumerate(f, 2):
                parts = line.rstrip("\n").split("\t")
                if len(parts) != 3:
                    raise DataFormatError(f"{path}:{line_number}: expected 3 columns", line_number)
                token, id_text, count_text = parts
                try:
                    idx, count = int(id_text), int(count_text)
                except ValueError:
                    raise DataFormatError(
                        f"{path}:{line_number}: non-integer id or count", line_number
                    ) from None
                if idx != len(tokens):
                    raise DataFormatError(
                        f"{path}:{line_number}: expected id {len(tokens)}, got {idx}",
                        line_number,
                    )
                tokens.append(token)
                counts.append(count)
        return cls(tokens, counts, min_count=min(counts) if counts else 1)


def count_tokens(docs: Iterable[Document], rules: TokenRules) -> Counter:
    """Exact corpus token frequencies under the given rules."""
    counter: Counter = Counter()
    for doc in docs:
        counter.update(tokenize(doc.text, rules))
    return counter


def build_vocabulary(
    docs: Iterable[Document], rules: TokenRules = TokenRules(), min_count: int = 1
) -> Vocabulary:
    """Build the frequency-filtered vocabulary of a corpus.

    Args:
        docs: The corpus.
        rules: Tokenizer switches.
        min_count: Tokens seen fewer times are excluded.

    Returns:
        The vocabulary, ordered by descending frequency then token.

    Raises:
        ConfigurationError: If min_count < 1 or nothing survives filtering.
    """
    if min_count < 1:
        raise ConfigurationError(f"min_count must be >= 1, got {min_count}")
    counter = count_tokens(docs, rules)
    total = sum(counter.values())
    kept = sorted(
        ((token, count) for token, count in counter.items() if count >= min_count),
        key=lambda item: (-item[1], item[0]),
    )
    if not kept:
        raise ConfigurationError(
            f"Empty vocabulary: no token occurs at least {min_count} times "
            f"({len(counter)} distinct tokens, {total} occurrences)"
        )
    dropped = total - sum(count for _, count in kept)
    vocab = Vocabulary(
        [t for t, _ in kept],
        [c for _, c in kept],
        min_count=min_count,
        total_tokens=total,
        dropped_tokens=dropped,
    )
    logger.info(
        "Built vocabulary: %d tokens kept of %d distinct (min_count=%d, %d occurrences dropped)",
        len(vocab),
        len(counter),
        min_count,
        dropped,
    )
    return vocab


def iter_token_ids(
    docs: Iterable[Document], vocab: Vocabulary, rules: TokenRules
) -> Iterator[List[int]]:
    """Yield each document's in-vocabulary id sequence, skipping empty ones."""
    for doc in docs:
        ids = vocab.encode(tokenize(doc.text, rules))
        if ids:
            yield ids
