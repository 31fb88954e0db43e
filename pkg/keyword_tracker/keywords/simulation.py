"""
Drift simulation entry points.
"""

import logging
from pathlib import Path
from typing import List, Union

from keyword_tracker.core.config import DriftConfig, TokenRules
from keyword_tracker.corpus.documents import write_documents
from keyword_tracker.keywords.collectors.simulated_collector import SimulatedCollector

logger = logging.getLogger(__name__)


def simulate_drift(config: DriftConfig, rules: TokenRules = TokenRules()) -> SimulatedCollector:
    """A collector serving the synthetic rounds described by ``config``."""
    return SimulatedCollector(config, rules)


def write_rounds(collector: SimulatedCollector, out_dir: Union[str, Path]) -> List[Path]:
    """Write every round as ``round-<r>.jsonl`` under ``out_dir``.

    The directory can then be served by a FileCollector.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for r in range(1, collector.config.rounds + 1):
        path = out / f"round-{r}.jsonl"
        count = write_documents(path, collector.documents(r))
        logger.info("Wrote %d documents to %s", count, path)
        paths.append(path)
    return paths
