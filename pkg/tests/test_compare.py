"""
Tests for cross-domain neighbor comparison and its table renderings.
"""

import pytest

from keyword_tracker.compare import (
    REPORT_COLUMNS,
    DomainReport,
    ReportRow,
    compare_domains,
    parse_report_csv,
    report_to_table,
)
from keyword_tracker.core.config import TableFormat
from keyword_tracker.embedding import nearest_neighbors
from keyword_tracker.exceptions import ConfigurationError, DataFormatError


@pytest.fixture
def spaces(random_space):
    return {
        "wiki": random_space(40, 6, seed=1, domain="wiki"),
        "metoo": random_space(40, 6, seed=2, domain="metoo"),
        "redpill": random_space(40, 6, seed=3, domain="redpill"),
    }


class TestCompareDomains:
    def test_table_shape(self, spaces):
        report = compare_domains(spaces, ["w001", "w002"], k=9)
        assert len(report.rows) == 54
        assert report.domains() == ["metoo", "redpill", "wiki"]
        for domain in report.domains():
            for probe in ("w001", "w002"):
                neighbors = report.neighbors(domain, probe)
                assert len(neighbors) == 9
                sims = [s for _, s in neighbors]
                assert sims == sorted(sims, reverse=True)

    def test_rows_are_nearest_neighbors(self, spaces):
        report = compare_domains(spaces, ["w005"], k=4)
        for domain, space in spaces.items():
            assert report.neighbors(domain, "w005") == nearest_neighbors(space, "w005", 4)

    def test_ranks_are_contiguous(self, spaces):
        report = compare_domains(spaces, ["w003"], k=5)
        for domain in spaces:
            assert [r.rank for r in report.rows if r.domain == domain] == [1, 2, 3, 4, 5]

    def test_identical_spaces_give_identical_lists(self, random_space):
        space = random_space(30, 4, seed=7)
        report = compare_domains({"a": space, "b": space}, ["w000"], k=5)
        assert report.neighbors("a", "w000") == report.neighbors("b", "w000")

    def test_domain_order_does_not_matter(self, spaces):
        reordered = dict(reversed(list(spaces.items())))
        assert compare_domains(spaces, ["w001"], 3).rows == compare_domains(reordered, ["w001"], 3).rows

    def test_contrasting_usage(self, make_space):
        food = make_space(
            {
                "apple": [1.0, 0.0, 0.1],
                "pie": [0.9, 0.1, 0.0],
                "fruit": [1.0, 0.2, 0.0],
                "tart": [0.8, 0.0, 0.2],
                "phone": [0.0, 1.0, 0.0],
                "laptop": [0.1, 0.9, 0.1],
                "chip": [0.0, 0.8, 0.3],
            },
            domain="food",
        )
        tech = make_space(
            {
                "apple": [0.0, 1.0, 0.1],
                "pie": [0.9, 0.1, 0.0],
                "fruit": [1.0, 0.2, 0.0],
                "tart": [0.8, 0.0, 0.2],
                "phone": [0.0, 1.0, 0.0],
                "laptop": [0.1, 0.9, 0.1],
                "chip": [0.0, 0.8, 0.3],
            },
            domain="tech",
        )
        report = compare_domains({"food": food, "tech": tech}, ["apple"], k=3)
        food_top = {t for t, _ in report.neighbors("food", "apple")}
        tech_top = {t for t, _ in report.neighbors("tech", "apple")}
        assert food_top == {"pie", "fruit", "tart"}
        assert tech_top == {"phone", "laptop", "chip"}

    def test_missing_probe_is_a_gap(self, make_space, random_space):
        spaces = {"big": random_space(10, 3), "small": make_space({"other": [1, 0], "thing": [0, 1]})}
        report = compare_domains(spaces, ["w001"], k=3)
        assert report.gaps == [("small", "w001")]
        assert {r.domain for r in report.rows} == {"big"}
        assert report.domains() == ["big", "small"]

    def test_probe_missing_everywhere(self, spaces):
        with pytest.raises(ConfigurationError):
            compare_domains(spaces, ["w001", "absent"], k=3)

    @pytest.mark.parametrize("probes,k", [([], 3), (["w001"], 0)])
    def test_invalid_request(self, spaces, probes, k):
        with pytest.raises(ConfigurationError):
            compare_domains(spaces, probes, k)


class TestReportTable:
    def test_empty_report_is_header_only(self):
        report = DomainReport(rows=[], probes=["female"], k=9)
        assert report_to_table(report) == ",".join(REPORT_COLUMNS) + "\n"

    def test_single_row(self):
        report = DomainReport(rows=[ReportRow("wiki", "female", 1, "male", 0.5)], probes=["female"], k=9)
        assert report_to_table(report).splitlines() == [
            "domain,probe,rank,token,similarity",
            "wiki,female,1,male,0.5",
        ]

    def test_csv_parses_back(self, spaces):
        report = compare_domains(spaces, ["w002", "w001"], k=6)
        parsed = parse_report_csv(report_to_table(report, TableFormat.CSV), k=6)
        assert parsed.rows == report.rows
        assert sorted(parsed.probes) == sorted(report.probes)

    def test_csv_bad_header(self):
        with pytest.raises(DataFormatError):
            parse_report_csv("domain,probe,rank,word,similarity\n")

    def test_markdown_layout(self):
        rows = [
            ReportRow("metoo", "female", 1, "woman", 0.91),
            ReportRow("metoo", "female", 2, "girl", 0.8),
            ReportRow("metoo", "male", 1, "man", 0.88),
            ReportRow("wiki", "female", 1, "males", 0.7),
            ReportRow("wiki", "male", 1, "females", 0.75),
        ]
        report = DomainReport(rows=rows, probes=["female", "male"], k=2)
        assert report_to_table(report, "markdown").splitlines() == [
            "| domain | rank | female | male |",
            "|---|---|---|---|",
            "| metoo | 1 | woman (0.910) | man (0.880) |",
            "|  | 2 | girl (0.800) |  |",
            "| wiki | 1 | males (0.700) | females (0.750) |",
        ]

    def test_markdown_empty(self):
        report = DomainReport(rows=[], probes=["female", "male"], k=9)
        assert report_to_table(report, TableFormat.MARKDOWN) == (
            "| domain | rank | female | male |\n|---|---|---|---|\n"
        )
