"""
The collect, train and extract loop.

Each round queries a collector with the current keywords, rebuilds the
vocabulary, co-occurrence table and embeddings over the collected corpus,
extracts candidates by both avenues and folds them into the bounded
keyword ranking.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

from keyword_tracker.cooccurrence.table import CooccurrenceTable, build_table
from keyword_tracker.core.config import EngineConfig, ExtractMethod, Weighting
from keyword_tracker.corpus.documents import Document
from keyword_tracker.corpus.vocabulary import Vocabulary, build_vocabulary, iter_token_ids
from keyword_tracker.embedding.glove import GloVeTrainer, TrainResult, export_vectors, init_model
from keyword_tracker.embedding.vector_space import VectorSpace
from keyword_tracker.exceptions import DataFormatError, ExtractionError
from keyword_tracker.formatters.jsonl_formatter import JSONLinesFormatter
from keyword_tracker.keywords.collectors.collector import CollectorPort
from keyword_tracker.keywords.extraction import extract_candidates, load_stoplist
from keyword_tracker.keywords.keyword_set import Candidate, KeywordEntry, KeywordSet, rank_and_prune

logger = logging.getLogger(__name__)

HISTORY_COLUMNS = ["round", "keywords", "docs_collected", "vocab_size", "final_loss", "query"]


@dataclass
class RoundRecord:
    """What one round collected, trained and kept."""

    round: int
    keywords: KeywordSet
    docs_collected: int
    vocab_size: int
    final_loss: Optional[float]
    query: List[str] = field(default_factory=list)
    losses: List[float] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return self.docs_collected == 0

    def to_row(self) -> Dict[str, object]:
        return {
            "round": self.round,
            "keywords": [
                {
                    "token": e.token,
                    "score": e.score,
                    "round_introduced": e.round_introduced,
                    "last_active_round": e.last_active_round,
                }
                for e in self.keywords
            ],
            "docs_collected": self.docs_collected,
            "vocab_size": self.vocab_size,
            "final_loss": self.final_loss,
            "query": self.query,
        }

    @classmethod
    def from_row(cls, row: Dict[str, object], capacity: int) -> "RoundRecord":
        entries = [
            KeywordEntry(
                token=k["token"],
                score=k["score"],
                round_introduced=k["round_introduced"],
                last_active_round=k.get("last_active_round", k["round_introduced"]),
            )
            for k in row["keywords"]
        ]
        return cls(
            round=int(row["round"]),
            keywords=KeywordSet(entries, capacity=capacity),
            docs_collected=int(row["docs_collected"]),
            vocab_size=int(row["vocab_size"]),
            final_loss=row["final_loss"],
            query=list(row.get("query", [])),
        )


@dataclass
class IterationHistory:
    """Per-round records of a collection run."""

    records: List[RoundRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, index: int) -> RoundRecord:
        return self.records[index]

    @property
    def final(self) -> KeywordSet:
        return self.records[-1].keywords

    def keyword_sets(self) -> List[KeywordSet]:
        return [r.keywords for r in self.records]

    def save_jsonl(self, path: Union[str, Path]) -> None:
        JSONLinesFormatter().write([r.to_row() for r in self.records], HISTORY_COLUMNS, path)

    @classmethod
    def load_jsonl(cls, path: Union[str, Path], capacity: int = 100) -> "IterationHistory":
        """Read a history written by save_jsonl.

        Raises:
            DataFormatError: On a line that is not a round object.
        """
        history = cls()
        with open(path, "r", encoding="utf-8") as f:
            for line_number, line in enumerate(f, 1):
                if not line.strip():
                    continue
                try:
                    history.records.append(RoundRecord.from_row(json.loads(line), capacity))
                except (ValueError, KeyError, TypeError) as e:
                    raise DataFormatError(f"{path}:{line_number}: {e}", line_number) from e
        return history


@dataclass
class RoundModel:
    """Artifacts trained over one round's corpus."""

    vocab: Vocabulary
    table: CooccurrenceTable
    extraction_table: CooccurrenceTable
    space: VectorSpace
    training: TrainResult


class KeywordEngine:
    """Runs keyword extraction rounds under one EngineConfig."""

    def __init__(
        self,
        config: EngineConfig = EngineConfig(),
        stoplist: Optional[Iterable[str]] = None,
        progress: bool = False,
    ):
        """Initialize the engine.

        Args:
            config: Settings for every stage of a round.
            stoplist: Words never proposed as keywords; the bundled list by default.
            progress: Show training progress bars.
        """
        self.config = config
        self.stoplist = frozenset(load_stoplist() if stoplist is None else stoplist)
        self.progress = progress

    def train_round(self, docs: Sequence[Document], domain: str = "default") -> RoundModel:
        """Build vocabulary, tables and embeddings over ``docs``."""
        cfg = self.config
        vocab = build_vocabulary(docs, cfg.token_rules, cfg.min_count)
        ids = list(iter_token_ids(docs, vocab, cfg.token_rules))
        table = build_table(ids, len(vocab), cfg.window, cfg.weighting, shards=cfg.train.threads)
        extraction_table = table
        if cfg.raw_counts and cfg.weighting != Weighting.UNIFORM:
            extraction_table = build_table(
                ids, len(vocab), cfg.window, Weighting.UNIFORM, shards=cfg.train.threads
            )
        model = init_model(len(vocab), cfg.train.dim, cfg.train.seed)
        training = GloVeTrainer(cfg.train, progress=self.progress).train(model, table)
        space = export_vectors(training.model, vocab.tokens, cfg.export_mode, domain)
        return RoundModel(vocab, table, extraction_table, space, training)

    def candidates(self, seeds: Sequence[str], trained: RoundModel) -> List[Candidate]:
        """Both extraction avenues over a trained round.

        A query with no keyword in the vocabulary yields only clustering
        candidates.
        """
        try:
            return extract_candidates(
                seeds,
                trained.vocab,
                trained.extraction_table,
                trained.space,
                self.config,
                self.stoplist,
            )
        except ExtractionError as e:
            if self.config.method == ExtractMethod.COOCCUR:
                raise
            logger.warning("%s; using clustering candidates only", e)
            cluster_only = self.config.model_copy(update={"method": ExtractMethod.CLUSTER})
            return extract_candidates(
                seeds,
                trained.vocab,
                trained.extraction_table,
                trained.space,
                cluster_only,
                self.stoplist,
            )

    def iterate(
        self, seeds: Sequence[str], collector: CollectorPort, rounds: int
    ) -> IterationHistory:
        """Run ``rounds`` collect-train-extract rounds starting from ``seeds``.

        Round 1 queries with the seeds, later rounds with the current
        keyword set. Documents accumulate across rounds (deduplicated by id)
        unless ``fresh_corpus`` is set.

        Raises:
            ExtractionError: After two consecutive rounds without documents.
        """
        cfg = self.config
        if rounds < 1:
            raise ExtractionError(f"rounds must be >= 1, got {rounds}")
        if not seeds:
            raise ExtractionError("At least one seed keyword is required")

        history = IterationHistory()
        keywords = KeywordSet(capacity=cfg.kmax)
        corpus: Dict[str, Document] = {}
        query = list(seeds)
        empty_streak = 0

        for r in range(1, rounds + 1):
            collector.set_round(r)
            docs = collector.query(query, cfg.query_limit)
            if not docs:
                empty_streak += 1
                if empty_streak >= 2:
                    raise ExtractionError(f"Rounds {r - 1} and {r} returned no documents")
                logger.warning("Round %d collected no documents; decaying keywords only", r)
                keywords = rank_and_prune(keywords, [], r, cfg.decay, cfg.kmax)
                history.records.append(RoundRecord(r, keywords, 0, 0, None, query))
                query = keywords.tokens() or query
                continue
            empty_streak = 0

            if cfg.fresh_corpus:
                corpus = {}
            for doc in docs:
                corpus.setdefault(doc.id, doc)

            trained = self.train_round(list(corpus.values()))
            candidates = self.candidates(query, trained)
            keywords = rank_and_prune(keywords, candidates, r, cfg.decay, cfg.kmax)
            history.records.append(
                RoundRecord(
                    round=r,
                    keywords=keywords,
                    docs_collected=len(docs),
                    vocab_size=len(trained.vocab),
                    final_loss=trained.training.final_loss,
                    query=query,
                    losses=trained.training.losses,
                )
            )
            logger.info(
                "Round %d: %d docs (%d in corpus), V=%d, %d keywords, top: %s",
                r,
                len(docs),
                len(corpus),
                len(trained.vocab),
                len(keywords),
                ", ".join(keywords.tokens()[:5]),
            )
            query = keywords.tokens() or query
        return history


def iterate(
    seeds: Sequence[str],
    collector: CollectorPort,
    config: EngineConfig,
    rounds: int,
    stoplist: Optional[Iterable[str]] = None,
) -> IterationHistory:
    """Run the collection loop with a KeywordEngine built from ``config``."""
    return KeywordEngine(config, stoplist).iterate(seeds, collector, rounds)
