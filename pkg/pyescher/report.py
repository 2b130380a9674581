import hashlib
import json
from typing import Any, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator
from typing_extensions import Self

from pyescher.enums import ReportFormat, Suite
from pyescher.errors import ReportMergeError

Scalar = Union[int, str]


class ReportBase(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    def to_json_dictionary(self) -> dict[str, Any]:
        return self.model_dump(by_alias=True, exclude_none=True, mode="json")


class CheckOutcome(ReportBase):
    passed: bool = Field(alias="pass")
    # unasserted checks are reported but never fail a sweep
    asserted: bool = True
    value: Optional[Scalar] = None
    detail: Optional[str] = None
    counterexample: Optional[dict[str, Any]] = None


class SuiteResult(ReportBase):
    """What one worker returns for one UIO and one suite."""

    h: str
    suite: Suite
    counts: dict[str, int] = {}
    coefficients: dict[str, int] = {}
    checks: dict[str, CheckOutcome] = {}
    duration: float = 0.0


class UIORecord(ReportBase):
    h: str
    counts: dict[str, int] = {}
    coefficients: dict[str, int] = {}
    checks: dict[str, CheckOutcome] = {}
    durations: Optional[dict[str, float]] = None

    def sort_key(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.h.split(","))

    def absorb(self, result: SuiteResult, timings: bool):
        """Fold one suite's output into this record."""
        for target, source in (
            (self.counts, result.counts),
            (self.coefficients, result.coefficients),
        ):
            for key, value in source.items():
                if key in target and target[key] != value:
                    raise ReportMergeError(
                        f"suites disagree on {key} for h={self.h}: {target[key]} vs {value}"
                    )
                target[key] = value
        self.checks.update(result.checks)
        if timings:
            if self.durations is None:
                self.durations = {}
            self.durations[result.suite.value] = round(result.duration, 6)

    def failures(self) -> list[str]:
        return sorted(
            name for name, c in self.checks.items() if c.asserted and not c.passed
        )


class SweepSummary(ReportBase):
    uios: int
    checks: int
    failures: int
    unasserted_failures: int = Field(alias="unassertedFailures")
    failed: list[str] = []
    wall_time: Optional[float] = Field(default=None, alias="wallTime")


class SweepConfig(ReportBase):
    """Sweep parameters; only size, partitions and suites identify a report."""

    n: int = Field(ge=1)
    lambda_filter: str = Field(default="all", alias="lambda")
    suites: list[Suite] = list(Suite)
    jobs: int = Field(default=1, ge=1)
    out_path: Optional[str] = None
    format: ReportFormat = ReportFormat.JSON
    resume: bool = False
    shard: Optional[str] = None
    timings: bool = False

    @field_validator("lambda_filter")
    @classmethod
    def _check_lambda(cls, value: str) -> str:
        value = value.strip()
        if value == "all":
            return value
        parts = value.split(",")
        if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
            raise ValueError(f"lambda must be 'all' or 'n,k', got {value!r}")
        n, k = (int(p) for p in parts)
        if not n >= k >= 1:
            raise ValueError(f"lambda needs n >= k >= 1, got {value!r}")
        return f"{n},{k}"

    @field_validator("suites")
    @classmethod
    def _check_suites(cls, value: list[Suite]) -> list[Suite]:
        if not value:
            raise ValueError("at least one suite is required")
        return sorted(set(value), key=list(Suite).index)

    @field_validator("shard")
    @classmethod
    def _check_shard(cls, value: Optional[str]) -> Optional[str]:
        if value is None:
            return value
        try:
            index, count = (int(p) for p in value.split("/"))
        except ValueError:
            raise ValueError(f"shard must look like i/m, got {value!r}")
        if not 0 <= index < count:
            raise ValueError(f"shard index must be in 0..{count - 1}, got {index}")
        return f"{index}/{count}"

    def splits(self) -> list[tuple[int, int]]:
        """The length-2 partitions (n, k) of the UIO size under test."""
        if self.lambda_filter == "all":
            return [(self.n - k, k) for k in range(1, self.n // 2 + 1)]
        n, k = (int(p) for p in self.lambda_filter.split(","))
        return [(n, k)]

    def shard_of(self) -> tuple[int, int]:
        if self.shard is None:
            return 0, 1
        index, count = (int(p) for p in self.shard.split("/"))
        return index, count

    def identity(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "lambda": self.lambda_filter,
            "suites": [s.value for s in self.suites],
        }

    def config_hash(self) -> str:
        blob = json.dumps(self.identity(), sort_keys=True).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()


class VerificationReport(ReportBase):
    config: dict[str, Any]
    config_hash: str = Field(alias="configHash")
    summary: SweepSummary
    records: list[UIORecord] = []

    @classmethod
    def build(
        cls,
        config: dict[str, Any],
        config_hash: str,
        records: list[UIORecord],
        wall_time: Optional[float] = None,
    ) -> Self:
        records = sorted(records, key=UIORecord.sort_key)
        failed = []
        checks = unasserted = 0
        for record in records:
            checks += len(record.checks)
            failed.extend(f"{record.h} {name}" for name in record.failures())
            unasserted += sum(
                1 for c in record.checks.values() if not c.asserted and not c.passed
            )
        summary = SweepSummary(
            uios=len(records),
            checks=checks,
            failures=len(failed),
            unasserted_failures=unasserted,
            failed=failed,
            wall_time=wall_time,
        )
        return cls(config=config, config_hash=config_hash, summary=summary, records=records)

    def csv_rows(self) -> list[list[str]]:
        """One row per (UIO, lambda, check) plus rows for counts and coefficients."""
        rows = [["h", "lambda", "check", "passed", "value", "detail"]]
        for record in self.records:
            for name, value in sorted(record.counts.items()):
                check, _, lam = name.partition(":")
                rows.append([record.h, lam, f"count {check}", "", str(value), ""])
            for name, value in sorted(record.coefficients.items()):
                check, _, lam = name.partition(":")
                rows.append([record.h, lam, check, "", str(value), ""])
            for name, outcome in sorted(record.checks.items()):
                check, _, lam = name.partition(":")
                detail = outcome.detail or ""
                if outcome.counterexample is not None:
                    detail = json.dumps(outcome.counterexample, sort_keys=True)
                rows.append(
                    [
                        record.h,
                        lam,
                        check,
                        "true" if outcome.passed else "false",
                        "" if outcome.value is None else str(outcome.value),
                        detail,
                    ]
                )
        return rows


def merge_reports(reports: list[VerificationReport]) -> VerificationReport:
    """Union of reports sharing a config hash; duplicate UIO records must agree exactly."""
    if not reports:
        raise ReportMergeError("nothing to merge")
    first = reports[0]
    merged: dict[str, UIORecord] = {}
    for report in reports:
        if report.config_hash != first.config_hash:
            raise ReportMergeError(
                f"config hash mismatch: {report.config_hash} vs {first.config_hash}"
            )
        for record in report.records:
            known = merged.get(record.h)
            if known is None:
                merged[record.h] = record
            elif known.to_json_dictionary() != record.to_json_dictionary():
                raise ReportMergeError(f"conflicting records for h={record.h}")
    # shards run side by side, so the slowest one bounds the merged run
    times = [report.summary.wall_time for report in reports]
    wall_time = max(times) if all(t is not None for t in times) else None
    return VerificationReport.build(
        first.config, first.config_hash, list(merged.values()), wall_time
    )
