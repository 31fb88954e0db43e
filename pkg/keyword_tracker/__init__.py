"""
GloVe keyword tracker.

This package follows drifting social-media discussions: it trains GloVe
word embeddings over a collected corpus, extracts new query keywords by
co-occurrence and by embedding clusters, and compares how words are used
across discussion communities.
"""

__version__ = "0.1.0"
__license__ = "AGPL-3.0"

from keyword_tracker.core.config import EngineConfig, PipelineConfig
from keyword_tracker.embedding.vector_space import VectorSpace
from keyword_tracker.keywords.engine import IterationHistory, KeywordEngine

__all__ = ["EngineConfig", "PipelineConfig", "VectorSpace", "KeywordEngine", "IterationHistory"]
