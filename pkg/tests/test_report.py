import pytest
from pydantic import ValidationError

from pyescher.enums import ReportFormat, Suite
from pyescher.errors import ReportMergeError
from pyescher.report import (
    CheckOutcome,
    SuiteResult,
    SweepConfig,
    UIORecord,
    VerificationReport,
    merge_reports,
)


def make_record(h, passed=True, asserted=True, m=1):
    record = UIORecord(h=h)
    record.absorb(
        SuiteResult(
            h=h,
            suite=Suite.COUNTS,
            counts={"eschers-3": 3},
            coefficients={"m:2,1": m},
            checks={"counting-identity:2,1": CheckOutcome(passed=passed, asserted=asserted, value=m)},
            duration=0.5,
        ),
        timings=False,
    )
    return record


def make_report(records):
    config = SweepConfig(n=3)
    return VerificationReport.build(config.identity(), config.config_hash(), records)


def test_check_outcome_serializes_with_aliases():
    outcome = CheckOutcome(passed=False, value=2, counterexample={"w": [1, 2]})
    assert outcome.to_json_dictionary() == {
        "pass": False,
        "asserted": True,
        "value": 2,
        "counterexample": {"w": [1, 2]},
    }
    assert CheckOutcome.model_validate({"pass": True}).passed


def test_sweep_config_defaults_and_splits():
    config = SweepConfig(n=5)
    assert config.suites == list(Suite)
    assert config.splits() == [(4, 1), (3, 2)]
    assert SweepConfig(n=4, lambda_filter="2,2").splits() == [(2, 2)]
    assert SweepConfig.model_validate({"n": 4, "lambda": " 3,1 "}).lambda_filter == "3,1"
    assert config.shard_of() == (0, 1)
    assert SweepConfig(n=5, shard="1/3").shard_of() == (1, 3)
    assert config.format is ReportFormat.JSON


@pytest.mark.parametrize(
    "fields",
    [
        {"n": 0},
        {"n": 3, "jobs": 0},
        {"n": 3, "lambda_filter": "1,2"},
        {"n": 3, "lambda_filter": "3"},
        {"n": 3, "suites": []},
        {"n": 3, "suites": ["bogus"]},
        {"n": 3, "shard": "2/2"},
        {"n": 3, "shard": "a/b"},
    ],
)
def test_sweep_config_rejects(fields):
    with pytest.raises(ValidationError):
        SweepConfig(**fields)


def test_config_hash_ignores_execution_options():
    base = SweepConfig(n=4, suites=[Suite.ROUNDTRIP, Suite.COUNTS])
    other = SweepConfig(n=4, suites=[Suite.COUNTS, Suite.ROUNDTRIP], jobs=3, shard="0/2", timings=True)
    assert base.suites == [Suite.COUNTS, Suite.ROUNDTRIP]
    assert base.config_hash() == other.config_hash()
    assert base.config_hash() != SweepConfig(n=4, lambda_filter="3,1").config_hash()


def test_absorb_rejects_disagreeing_suites():
    record = make_record("2,3,3")
    with pytest.raises(ReportMergeError, match="h=2,3,3"):
        record.absorb(
            SuiteResult(h="2,3,3", suite=Suite.CHROMATIC, coefficients={"m:2,1": 5}),
            timings=False,
        )


def test_absorb_records_durations_only_with_timings():
    assert make_record("2,3,3").durations is None
    record = UIORecord(h="2,3,3")
    record.absorb(SuiteResult(h="2,3,3", suite=Suite.SINKS, duration=0.25), timings=True)
    assert record.durations == {"sinks": 0.25}


def test_build_sorts_records_and_counts_failures():
    report = make_report(
        [
            make_record("3,3,3"),
            make_record("1,2,3", passed=False),
            make_record("2,3,3", passed=False, asserted=False),
        ]
    )
    assert [r.h for r in report.records] == ["1,2,3", "2,3,3", "3,3,3"]
    assert report.summary.uios == 3
    assert report.summary.checks == 3
    assert report.summary.failures == 1
    assert report.summary.unasserted_failures == 1
    assert report.summary.failed == ["1,2,3 counting-identity:2,1"]
    js = report.to_json_dictionary()
    assert "wallTime" not in js["summary"]
    assert js["summary"]["unassertedFailures"] == 1
    assert VerificationReport.model_validate(js) == report


def test_csv_rows():
    rows = make_report([make_record("2,3,3")]).csv_rows()
    assert rows[0] == ["h", "lambda", "check", "passed", "value", "detail"]
    assert ["2,3,3", "2,1", "counting-identity", "true", "1", ""] in rows
    assert ["2,3,3", "", "count eschers-3", "", "3", ""] in rows


def test_merge_is_idempotent_and_order_independent():
    left = make_report([make_record("1,2,3"), make_record("2,3,3")])
    right = make_report([make_record("3,3,3"), make_record("2,3,3")])
    merged = merge_reports([left, right])
    assert [r.h for r in merged.records] == ["1,2,3", "2,3,3", "3,3,3"]
    assert merge_reports([right, left]) == merged
    assert merge_reports([left, left]) == left


def test_merge_rejects_conflicts():
    left = make_report([make_record("2,3,3")])
    right = make_report([make_record("2,3,3", m=2)])
    with pytest.raises(ReportMergeError, match="h=2,3,3"):
        merge_reports([left, right])
    other = SweepConfig(n=3, lambda_filter="2,1")
    foreign = VerificationReport.build(other.identity(), other.config_hash(), [])
    with pytest.raises(ReportMergeError, match="config hash mismatch"):
        merge_reports([left, foreign])
    with pytest.raises(ReportMergeError):
        merge_reports([])


def test_merge_keeps_wall_time():
    config = SweepConfig(n=3, timings=True)
    timed = VerificationReport.build(
        config.identity(), config.config_hash(), [make_record("2,3,3")], wall_time=1.5
    )
    assert merge_reports([timed, timed]) == timed
    slower = VerificationReport.build(
        config.identity(), config.config_hash(), [make_record("1,2,3")], wall_time=4.0
    )
    assert merge_reports([timed, slower]).summary.wall_time == 4.0
    untimed = make_report([make_record("3,3,3")])
    assert merge_reports([timed, untimed]).summary.wall_time is None
