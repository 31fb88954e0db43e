"""
Document model and corpus file readers.

Collected social-media posts arrive either as JSON lines (one object per
line with at least ``id`` and ``text``) or as plain text with one post per
nonblank line.
"""

import logging
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Iterable, Iterator, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from keyword_tracker.core.config import DocumentFormat
from keyword_tracker.exceptions import DataFormatError

logger = logging.getLogger(__name__)

# Abort ingestion when more than this share of nonblank lines is unusable
MALFORMED_ABORT_RATIO = 0.5


class Document(BaseModel):
    """One collected social-media post."""

    model_config = ConfigDict(frozen=True, coerce_numbers_to_str=True)

    id: str
    text: str
    domain: str = "default"
    created_at: Optional[datetime] = None

    @field_validator("id")
    @classmethod
    def validate_id(cls, v: str) -> str:
        if not v:
            raise ValueError("Document id must be non-empty")
        return v

    @field_validator("text")
    @classmethod
    def validate_text(cls, v: str) -> str:
        if not v.strip():
            raise ValueError("Document text must be non-empty")
        return v


@dataclass
class IngestResult:
    """Documents read from one file plus the skipped-line bookkeeping."""

    documents: List[Document] = field(default_factory=list)
    skipped: int = 0
    first_bad_line: Optional[int] = None

    def __len__(self) -> int:
        return len(self.documents)


def read_documents(
    path: Union[str, Path], format: DocumentFormat = DocumentFormat.JSONL
) -> IngestResult:
    """Read a corpus file into Documents, preserving file order.

    Args:
        path: The corpus file.
        format: ``jsonl`` for one JSON object per line, ``txt`` for one
            document per nonblank line.

    Returns:
        The documents and the number of malformed lines that were skipped.

    Raises:
        FileNotFoundError: If the file does not exist.
        DataFormatError: If more than half of the nonblank jsonl lines are
            malformed.
    """
    format = DocumentFormat(format)
    if format == DocumentFormat.TXT:
        return _read_txt(Path(path))
    return _read_jsonl(Path(path))


def _decoded_lines(path: Path) -> Iterator[Tuple[int, Optional[str]]]:
    """Yield (line number, text) per nonblank line; text is None when not UTF-8."""
    with open(path, "rb") as f:
        for line_number, raw in enumerate(f, 1):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                logger.debug("Line %d of %s is not UTF-8: %s", line_number, path, e)
                yield line_number, None
                continue
            if line.strip():
                yield line_number, line.rstrip("\r\n")


def _skip(result: IngestResult, line_number: int) -> None:
    result.skipped += 1
    if result.first_bad_line is None:
        result.first_bad_line = line_number


def _report_skipped(result: IngestResult, path: Path) -> None:
    if result.skipped:
        logger.warning(
            "Skipped %d malformed lines in %s (first at line %d)",
            result.skipped,
            path,
            result.first_bad_line,
        )
    logger.info("Read %d documents from %s", len(result.documents), path)


def _read_txt(path: Path) -> IngestResult:
    result = IngestResult()
    for line_number, line in _decoded_lines(path):
        if line is None:
            _skip(result, line_number)
            continue
        result.documents.append(Document(id=f"line-{line_number}", text=line))
    _report_skipped(result, path)
    return result


def _read_jsonl(path: Path) -> IngestResult:
    result = IngestResult()
    nonblank = 0
    for line_number, line in _decoded_lines(path):
        nonblank += 1
        if line is None:
            _skip(result, line_number)
            continue
        try:
            result.documents.append(Document.model_validate_json(line))
        except ValidationError as e:
            _skip(result, line_number)
            logger.debug("Skipping malformed line %d: %s", line_number, e)

    if nonblank and result.skipped / nonblank > MALFORMED_ABORT_RATIO:
        raise DataFormatError(
            f"{path}: {result.skipped} of {nonblank} lines are malformed "
            f"(first bad line: {result.first_bad_line})",
            line_number=result.first_bad_line,
        )
    _report_skipped(result, path)
    return result


def write_documents(path: Union[str, Path], documents: Iterable[Document]) -> int:
    """Write documents as JSON lines.

    Returns:
        The number of documents written.
    """
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for doc in documents:
            f.write(doc.model_dump_json(exclude_none=True))
            f.write("\n")
            count += 1
    return count
