"""
Synthetic collector whose topical vocabulary drifts from round to round.
"""

import logging
from typing import Dict, FrozenSet, List, Sequence, Tuple

import numpy as np

from keyword_tracker.core.config import DriftConfig, TokenRules
from keyword_tracker.corpus.documents import Document
from keyword_tracker.corpus.tokenizer import tokenize
from keyword_tracker.exceptions import ConfigurationError
from keyword_tracker.keywords.collectors.collector import CollectorPort

logger = logging.getLogger(__name__)


class SimulatedCollector(CollectorPort):
    """Collector over generated posts.

    Each round has ``docs_per_round`` posts of ``doc_length`` background
    tokens drawn uniformly. With probability ``family_doc_share`` a post
    also carries one of the round's planted families: its anchor plus
    max(1, Poisson(intensity)) tokens drawn from the family, inserted at
    random positions. Queries return the posts containing any keyword, in
    generation order. Round r is generated from the seed pair (seed, r),
    so every round is reproducible on its own.
    """

    def __init__(self, config: DriftConfig, rules: TokenRules = TokenRules()):
        super().__init__()
        self.config = config
        self.rules = rules
        self._background = config.background_tokens()
        self._cache: Dict[int, List[Tuple[Document, FrozenSet[str]]]] = {}

    def documents(self, round: int) -> List[Document]:
        """Every post generated for a 1-based round."""
        return [doc for doc, _ in self._generated(round)]

    def _generated(self, round: int) -> List[Tuple[Document, FrozenSet[str]]]:
        if not 1 <= round <= self.config.rounds:
            raise ConfigurationError(f"Round {round} outside the simulated 1..{self.config.rounds}")
        if round not in self._cache:
            docs = self._generate(round)
            self._cache[round] = [(d, frozenset(tokenize(d.text, self.rules))) for d in docs]
        return self._cache[round]

    def _generate(self, round: int) -> List[Document]:
        cfg = self.config
        rng = np.random.default_rng([cfg.seed, round])
        families = cfg.families[round - 1]
        docs = []
        for d in range(cfg.docs_per_round):
            picks = rng.integers(0, len(self._background), size=cfg.doc_length)
            words = [self._background[p] for p in picks.tolist()]
            if families and rng.random() < cfg.family_doc_share:
                family = families[int(rng.integers(len(families)))]
                count = max(1, int(rng.poisson(family.intensity)))
                planted = [family.anchor] + [
                    family.tokens[t] for t in rng.integers(0, len(family.tokens), size=count).tolist()
                ]
                for token in planted:
                    words.insert(int(rng.integers(0, len(words) + 1)), token)
            docs.append(Document(id=f"r{round}-{d:05d}", text=" ".join(words), domain="simulated"))
        logger.debug("Generated %d documents for round %d", len(docs), round)
        return docs

    def query(self, keywords: Sequence[str], limit: int) -> List[Document]:
        selected = self._select(self._generated(self.round), keywords, limit)
        logger.info(
            "Round %d: %d simulated document(s) for %d keyword(s)",
            self.round,
            len(selected),
            len(keywords),
        )
        return selected
