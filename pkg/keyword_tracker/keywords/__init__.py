"""
Dynamic keyword extraction.

This package ranks candidate keywords, runs both extraction avenues and
drives the multi-round collection loop against pluggable collectors.
"""

from keyword_tracker.keywords.collectors import CollectorPort, FileCollector, SimulatedCollector
from keyword_tracker.keywords.engine import (
    IterationHistory,
    KeywordEngine,
    RoundModel,
    RoundRecord,
    iterate,
)
from keyword_tracker.keywords.extraction import (
    auto_stop_set,
    extract_by_clustering,
    extract_by_cooccurrence,
    extract_candidates,
    load_stoplist,
    union_candidates,
)
from keyword_tracker.keywords.keyword_set import (
    KeywordEntry,
    KeywordSet,
    rank_and_prune,
    recall,
)
from keyword_tracker.keywords.simulation import simulate_drift, write_rounds

__all__ = [
    "CollectorPort",
    "FileCollector",
    "SimulatedCollector",
    "IterationHistory",
    "KeywordEngine",
    "RoundModel",
    "RoundRecord",
    "iterate",
    "auto_stop_set",
    "extract_by_clustering",
    "extract_by_cooccurrence",
    "extract_candidates",
    "load_stoplist",
    "union_candidates",
    "KeywordEntry",
    "KeywordSet",
    "rank_and_prune",
    "recall",
    "simulate_drift",
    "write_rounds",
]
