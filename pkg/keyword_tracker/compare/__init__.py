"""
Cross-domain comparison of embedding neighborhoods.
"""

from keyword_tracker.compare.domain_compare import (
    REPORT_COLUMNS,
    DomainReport,
    ReportRow,
    compare_domains,
    parse_report_csv,
    report_to_table,
)

__all__ = [
    "REPORT_COLUMNS",
    "DomainReport",
    "ReportRow",
    "compare_domains",
    "parse_report_csv",
    "report_to_table",
]
