"""
Corpus ingestion for the keyword tracker.

This package reads document corpora, tokenizes social-media text and
builds the vocabulary every later stage indexes into.
"""

from keyword_tracker.corpus.documents import (
    Document,
    IngestResult,
    read_documents,
    write_documents,
)
from keyword_tracker.corpus.tokenizer import strip_punctuation, tokenize
from keyword_tracker.corpus.vocabulary import (
    Vocabulary,
    build_vocabulary,
    count_tokens,
    iter_token_ids,
)

__all__ = [
    "Document",
    "IngestResult",
    "read_documents",
    "write_documents",
    "strip_punctuation",
    "tokenize",
    "Vocabulary",
    "build_vocabulary",
    "count_tokens",
    "iter_token_ids",
]
