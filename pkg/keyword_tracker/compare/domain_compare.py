"""
Cross-domain comparison of probe-word neighborhoods.

For every domain space and probe word the report lists the probe's
nearest neighbors, so the same word's usage can be contrasted between
discussion communities.
"""

import io
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Tuple

from keyword_tracker.core.config import TableFormat
from keyword_tracker.embedding.vector_space import VectorSpace, nearest_neighbors
from keyword_tracker.exceptions import ConfigurationError, DataFormatError
from keyword_tracker.formatters.csv_formatter import CSVFormatter, read_csv
from keyword_tracker.formatters.markdown_formatter import MarkdownFormatter

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["domain", "probe", "rank", "token", "similarity"]


@dataclass(frozen=True)
class ReportRow:
    domain: str
    probe: str
    rank: int
    token: str
    similarity: float


@dataclass
class DomainReport:
    """Neighbor lists per (domain, probe).

    Attributes:
        rows: Sorted by domain, probe, then rank.
        probes: Probe words in request order.
        k: Requested neighbors per probe.
        gaps: (domain, probe) pairs whose probe is missing from the domain.
    """

    rows: List[ReportRow]
    probes: List[str]
    k: int
    gaps: List[Tuple[str, str]] = field(default_factory=list)

    def domains(self) -> List[str]:
        return sorted({r.domain for r in self.rows} | {d for d, _ in self.gaps})

    def neighbors(self, domain: str, probe: str) -> List[Tuple[str, float]]:
        return [(r.token, r.similarity) for r in self.rows if r.domain == domain and r.probe == probe]


def compare_domains(
    spaces: Mapping[str, VectorSpace], probes: Sequence[str], k: int = 9
) -> DomainReport:
    """Nearest neighbors of each probe in each domain.

    Args:
        spaces: Domain label to vector space.
        probes: Probe words.
        k: Neighbors per (domain, probe).

    Returns:
        The report; probes absent from a domain are recorded as gaps.

    Raises:
        ConfigurationError: If k < 1, no probes are given, or a probe is
            missing from every domain.
    """
    if k < 1:
        raise ConfigurationError(f"k must be >= 1, got {k}")
    if not probes:
        raise ConfigurationError("At least one probe word is required")
    for probe in probes:
        if not any(probe in space for space in spaces.values()):
            raise ConfigurationError(f"Probe {probe!r} is missing from every domain")

    rows: List[ReportRow] = []
    gaps: List[Tuple[str, str]] = []
    for domain in sorted(spaces):
        space = spaces[domain]
        for probe in sorted(probes):
            if probe not in space:
                logger.warning("Probe %r missing from domain %r", probe, domain)
                gaps.append((domain, probe))
                continue
            for rank, (token, sim) in enumerate(nearest_neighbors(space, probe, k), 1):
                rows.append(ReportRow(domain, probe, rank, token, sim))
    return DomainReport(rows=rows, probes=list(probes), k=k, gaps=gaps)


def _markdown(report: DomainReport) -> str:
    columns = ["domain", "rank"] + list(report.probes)
    cells: Dict[Tuple[str, int], Dict[str, str]] = {}
    for r in report.rows:
        cells.setdefault((r.domain, r.rank), {})[r.probe] = f"{r.token} ({r.similarity:.3f})"
    table_rows = []
    for domain in report.domains():
        ranks = sorted(rank for d, rank in cells if d == domain)
        for i, rank in enumerate(ranks):
            row = {"domain": domain if i == 0 else "", "rank": rank}
            row.update({p: cells[(domain, rank)].get(p, "") for p in report.probes})
            table_rows.append(row)
    return MarkdownFormatter().format_rows(table_rows, columns)


def report_to_table(report: DomainReport, format: TableFormat = TableFormat.CSV) -> str:
    """Render a report as CSV or as a Markdown table.

    The Markdown layout has one block of rows per domain and one column per
    probe, each cell holding ``token (similarity)``.
    """
    format = TableFormat(format)
    if format == TableFormat.MARKDOWN:
        return _markdown(report)
    rows = [
        {"domain": r.domain, "probe": r.probe, "rank": r.rank, "token": r.token, "similarity": r.similarity}
        for r in report.rows
    ]
    return CSVFormatter().format_rows(rows, REPORT_COLUMNS)


def parse_report_csv(text: str, k: int = 9) -> DomainReport:
    """Rebuild a report from its CSV rendering.

    Gaps are not part of the CSV and come back empty.

    Raises:
        DataFormatError: If the header does not match.
    """
    frame = read_csv(
        io.StringIO(text),
        dtypes={"domain": str, "probe": str, "rank": int, "token": str, "similarity": float},
    )
    if list(frame.columns) != REPORT_COLUMNS:
        raise DataFormatError(f"Expected columns {REPORT_COLUMNS}, got {list(frame.columns)}")
    rows = [
        ReportRow(str(d), str(p), int(r), str(t), float(s))
        for d, p, r, t, s in frame.itertuples(index=False, name=None)
    ]
    probes = list(dict.fromkeys(r.probe for r in rows))
    return DomainReport(rows=rows, probes=probes, k=k)
