import json

import pytest
from pydantic import ValidationError

from src.reports.models import (
    BiderivationRecord,
    BlockRecord,
    DimensionRecord,
    LemmaRecord,
    VerificationReport,
)
from src.utils.json_utils import dump_report, load_report, report_to_json
from src.utils.report_tables import blocks_frame, predicates_frame, render_summary


def make_report(**overrides) -> VerificationReport:
    values = dict(
        tool_version="1.0.0",
        command="info",
        family="W",
        n=2,
        field="QQ",
        seed=0,
        in_theorem_scope=False,
    )
    values.update(overrides)
    return VerificationReport(**values)


def block(parity=0, nullity=0, status="solved") -> BlockRecord:
    return BlockRecord(
        parity=parity,
        weight=["0", "0"],
        level="0",
        degree=0,
        unknowns=4,
        rows_streamed=10,
        rank=4 - nullity,
        nullity=nullity,
        status=status,
    )


class TestVerdict:
    @pytest.mark.parametrize(
        "statuses, verdict, code",
        [
            (["passed", "not_applicable"], "verified", 0),
            (["passed", "failed", "incomplete"], "failed", 1),
            (["passed", "incomplete"], "incomplete", 3),
            ([], "verified", 0),
        ],
    )
    def test_conclude(self, statuses, verdict, code):
        report = make_report()
        for index, status in enumerate(statuses):
            report.record(f"check{index}", status)
        assert report.conclude() == verdict
        assert report.exit_code == code

    def test_incomplete_run_without_incomplete_predicate(self):
        report = make_report(complete=False)
        report.record("dimensions", "passed")
        assert report.conclude() == "incomplete"

    def test_unknown_status_rejected(self):
        with pytest.raises(ValidationError):
            make_report(predicates={"dimensions": "maybe"})


class TestRecords:
    def test_dimension_census_must_add_up(self):
        with pytest.raises(ValidationError):
            DimensionRecord(L=8, L0=4, top_degree=1, per_degree={"-1": 2, "0": 4})

    def test_failing_lemma_needs_witness(self):
        with pytest.raises(ValidationError):
            LemmaRecord(lemma="generation", passed=False, method="exact")
        assert LemmaRecord(lemma="generation", passed=False, method="exact", witness={"dimension": 2})

    def test_block_nullities_must_add_up(self):
        with pytest.raises(ValidationError):
            BiderivationRecord(field="QQ", parities=[0], nullity={"0": 2}, complete=True, blocks=[block(nullity=1)])
        record = BiderivationRecord(
            field="QQ", parities=[0], nullity={"0": 1}, complete=True, blocks=[block(nullity=1), block()]
        )
        assert len(record.blocks) == 2


class TestJson:
    def test_round_trip_through_a_file(self, tmp_path):
        report = make_report()
        report.dimensions = DimensionRecord(L=8, L0=4, top_degree=1, per_parity={"0": 4, "1": 4})
        report.record("dimensions", "passed")
        path = dump_report(report, str(tmp_path / "reports" / "w2.json"))
        loaded = load_report(path)
        assert loaded == report
        assert json.loads(report_to_json(report))["schema_version"] == 1

    def test_serialization_is_stable(self):
        assert report_to_json(make_report()) == report_to_json(make_report())

    def test_invalid_sources(self):
        assert load_report("{not json") is None
        assert load_report({"family": "W"}) is None


class TestTables:
    def test_blocks_frame(self):
        report = make_report()
        report.biderivations = BiderivationRecord(
            field="QQ", parities=[0], nullity={"0": 1}, complete=True, blocks=[block(nullity=1), block()]
        )
        frame = blocks_frame(report)
        assert len(frame) == 2
        assert list(frame["nullity"]) == [1, 0]

    def test_empty_frames(self):
        report = make_report()
        assert blocks_frame(report).empty
        assert predicates_frame(report).empty

    def test_summary_lists_nonzero_blocks(self):
        report = make_report()
        report.biderivations = BiderivationRecord(
            field="QQ", parities=[0], nullity={"0": 1}, complete=True, blocks=[block(nullity=1), block()]
        )
        report.record("innerness", "passed")
        report.conclude()
        summary = render_summary(report, blocks=True)
        assert summary.splitlines()[0] == "W(2) over QQ: verified"
        assert "innerness" in summary
        assert "biderivation nullity γ=0: 1" in summary
