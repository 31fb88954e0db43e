"""
File-backed collector.

Serves either one jsonl corpus for every round, or a directory of
``round-<r>.jsonl`` files. A round without its own file is answered from
the latest earlier round's file.
"""

import logging
import re
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from keyword_tracker.core.config import TokenRules
from keyword_tracker.corpus.documents import Document, read_documents
from keyword_tracker.corpus.tokenizer import tokenize
from keyword_tracker.exceptions import ConfigurationError
from keyword_tracker.keywords.collectors.collector import CollectorPort

logger = logging.getLogger(__name__)

ROUND_FILE = re.compile(r"^round-(\d+)\.jsonl$")

Indexed = List[Tuple[Document, FrozenSet[str]]]


class FileCollector(CollectorPort):
    """Collector over documents stored on disk."""

    def __init__(self, path: Union[str, Path], rules: TokenRules = TokenRules()):
        """Initialize the collector.

        Args:
            path: A jsonl file, or a directory of ``round-<r>.jsonl`` files.
            rules: Tokenizer rules used to match query keywords.

        Raises:
            FileNotFoundError: If ``path`` does not exist.
            ConfigurationError: If a directory holds no round files.
        """
        super().__init__()
        self.path = Path(path)
        self.rules = rules
        self._loaded: Dict[Path, Indexed] = {}
        if not self.path.exists():
            raise FileNotFoundError(f"No such corpus: {self.path}")
        self._round_files: Dict[int, Path] = {}
        if self.path.is_dir():
            for child in self.path.iterdir():
                m = ROUND_FILE.match(child.name)
                if m:
                    self._round_files[int(m.group(1))] = child
            if not self._round_files:
                raise ConfigurationError(f"{self.path} contains no round-<r>.jsonl files")

    def _file_for_round(self, round: int) -> Optional[Path]:
        if not self._round_files:
            return self.path
        earlier = [r for r in self._round_files if r <= round]
        if not earlier:
            return None
        return self._round_files[max(earlier)]

    def _index(self, path: Path) -> Indexed:
        if path not in self._loaded:
            docs = read_documents(path).documents
            self._loaded[path] = [(d, frozenset(tokenize(d.text, self.rules))) for d in docs]
        return self._loaded[path]

    def query(self, keywords: Sequence[str], limit: int) -> List[Document]:
        path = self._file_for_round(self.round)
        if path is None:
            logger.warning("No corpus file for round %d", self.round)
            return []
        selected = self._select(self._index(path), keywords, limit)
        logger.info(
            "Round %d: %d document(s) from %s for %d keyword(s)",
            self.round,
            len(selected),
            path.name,
            len(keywords),
        )
        return selected
