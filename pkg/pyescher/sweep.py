"""Exhaustive sweeps over every UIO of one size."""

import csv
import io
import json
import logging
import math
import os
import tempfile
import time
from multiprocessing import Pool
from typing import Any, Iterable

from pyescher import chromo, escher, ghom
from pyescher.enums import ReportFormat, Suite
from pyescher.errors import SweepConfigError
from pyescher.escher import DEFAULT_CONVENTION, AnchorConvention, EscherSeq
from pyescher.report import (
    SuiteResult,
    SweepConfig,
    UIORecord,
    VerificationReport,
    merge_reports,
)
from pyescher.suites import full_pairs, run_suite
from pyescher.symcore import Partition
from pyescher.uio import UIO, generate_all

_LOGGER = logging.getLogger(__name__)

JOBS_ENV = "PYESCHER_JOBS"

SUITE_LIMITS = {
    Suite.COUNTS: 8,
    Suite.ROUNDTRIP: 8,
    Suite.LEMMAS: 8,
    Suite.CHROMATIC: 6,
    Suite.POSITIVITY: 6,
    Suite.SINKS: 6,
    Suite.GNECHROM: 4,
}


def default_jobs() -> int:
    value = os.environ.get(JOBS_ENV)
    if not value:
        return 1
    try:
        jobs = int(value)
    except ValueError:
        raise SweepConfigError(f"{JOBS_ENV} must be a positive integer, got {value!r}")
    if jobs < 1:
        raise SweepConfigError(f"{JOBS_ENV} must be a positive integer, got {value!r}")
    return jobs


def validate(config: SweepConfig):
    for suite in config.suites:
        limit = SUITE_LIMITS[suite]
        if config.n > limit:
            raise SweepConfigError(
                f"suite {suite.value} is limited to N <= {limit}, got N = {config.n}"
            )
    for n, k in config.splits():
        if n + k != config.n:
            raise SweepConfigError(f"lambda {n},{k} does not partition N = {config.n}")
    if config.resume and not config.out_path:
        raise SweepConfigError("--resume needs --out")


def progress_path(out_path: str) -> str:
    return out_path + ".progress"


def atomic_write(path: str, text: str):
    """Write through a temporary file in the same directory, then rename over path."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, temp = tempfile.mkstemp(dir=directory, prefix=".pyescher-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(temp, path)
    except BaseException:
        if os.path.exists(temp):
            os.unlink(temp)
        raise


def render(report: VerificationReport, fmt: ReportFormat) -> str:
    if fmt is ReportFormat.CSV:
        buffer = io.StringIO()
        csv.writer(buffer, lineterminator="\n").writerows(report.csv_rows())
        return buffer.getvalue()
    return json.dumps(report.to_json_dictionary(), indent=2, sort_keys=True) + "\n"


def load_report(path: str) -> VerificationReport:
    with open(path, encoding="utf-8") as handle:
        return VerificationReport.model_validate(json.load(handle))


class ProgressLog(object):
    """Sidecar of completed (h, suite) results, one JSON object per line."""

    def __init__(self, path: str, config_hash: str):
        self.path = path
        self.config_hash = config_hash
        self._handle = None

    def load(self) -> dict[tuple[str, str], SuiteResult]:
        done: dict[tuple[str, str], SuiteResult] = {}
        if not os.path.exists(self.path):
            return done
        with open(self.path, encoding="utf-8") as handle:
            lines = handle.read().splitlines()
        if not lines:
            return done
        header = json.loads(lines[0])
        if header.get("configHash") != self.config_hash:
            raise SweepConfigError(
                f"progress file {self.path} belongs to another configuration"
            )
        for line in lines[1:]:
            try:
                entry = json.loads(line)
            except json.JSONDecodeError:
                # a torn final line from an interrupted write
                _LOGGER.warning("ignoring unreadable progress line in %s", self.path)
                continue
            result = SuiteResult.model_validate(entry)
            done[(result.h, result.suite.value)] = result
        _LOGGER.info("resuming with %d completed tasks from %s", len(done), self.path)
        return done

    def open(self, keep: Iterable[SuiteResult]):
        """Start a fresh sidecar holding the header and the results being kept."""
        self._handle = open(self.path, "w", encoding="utf-8")
        self._handle.write(json.dumps({"configHash": self.config_hash}) + "\n")
        for result in keep:
            self.append(result)

    def append(self, result: SuiteResult):
        if self._handle is None:
            return
        self._handle.write(json.dumps(result.to_json_dictionary(), sort_keys=True) + "\n")
        self._handle.flush()

    def close(self):
        if self._handle is not None:
            self._handle.close()
            self._handle = None

    def remove(self):
        self.close()
        if os.path.exists(self.path):
            os.unlink(self.path)


def plan_tasks(config: SweepConfig) -> list[tuple[str, str]]:
    """(h, suite) pairs for this shard, in generation order."""
    index, count = config.shard_of()
    tasks = []
    for position, uio in enumerate(generate_all(config.n)):
        if position % count != index:
            continue
        for suite in config.suites:
            tasks.append((str(uio), suite.value))
    return tasks


def _run_task(args: tuple[str, str, list[tuple[int, int]], dict[str, str]]) -> dict[str, Any]:
    h, suite, splits, conv = args
    result = run_suite(
        UIO.parse(h), Suite(suite), splits, AnchorConvention.from_json_dictionary(conv)
    )
    return result.to_json_dictionary()


def aggregate(
    results: Iterable[SuiteResult], timings: bool
) -> list[UIORecord]:
    records: dict[str, UIORecord] = {}
    ordered = sorted(results, key=lambda r: (r.h, list(Suite).index(r.suite)))
    for result in ordered:
        record = records.setdefault(result.h, UIORecord(h=result.h))
        record.absorb(result, timings)
    return list(records.values())


def run_sweep(
    config: SweepConfig, conv: AnchorConvention = DEFAULT_CONVENTION
) -> VerificationReport:
    """Run every selected suite on every UIO of size N and write the report if asked."""
    validate(config)
    started = time.perf_counter()
    config_hash = config.config_hash()
    tasks = plan_tasks(config)
    progress = None
    done: dict[tuple[str, str], SuiteResult] = {}
    if config.out_path:
        progress = ProgressLog(progress_path(config.out_path), config_hash)
        if config.resume:
            done = {key: r for key, r in progress.load().items() if key in set(tasks)}
        progress.open(done.values())
    pending = [task for task in tasks if task not in done]
    _LOGGER.info(
        "sweep N=%d: %d tasks, %d already done, %d jobs",
        config.n, len(tasks), len(done), config.jobs,
    )
    splits = config.splits()
    payloads = [(h, suite, splits, conv.as_dictionary()) for h, suite in pending]
    results = list(done.values())
    try:
        if config.jobs > 1 and len(payloads) > 1:
            with Pool(processes=config.jobs) as pool:
                for raw in pool.imap_unordered(_run_task, payloads):
                    result = SuiteResult.model_validate(raw)
                    results.append(result)
                    if progress:
                        progress.append(result)
        else:
            for payload in payloads:
                result = SuiteResult.model_validate(_run_task(payload))
                results.append(result)
                if progress:
                    progress.append(result)
    finally:
        if progress:
            progress.close()

    wall_time = round(time.perf_counter() - started, 3) if config.timings else None
    report = VerificationReport.build(
        config.identity(), config_hash, aggregate(results, config.timings), wall_time
    )
    _LOGGER.info(
        "sweep N=%d finished: %d UIOs, %d checks, %d failures",
        config.n, report.summary.uios, report.summary.checks, report.summary.failures,
    )
    if config.out_path:
        atomic_write(config.out_path, render(report, config.format))
        progress.remove()
    return report


def check_single(
    h: str, lam: Partition, conv: AnchorConvention = DEFAULT_CONVENTION, trace: bool = False
) -> tuple[list[str], bool]:
    """Human-readable record for one UIO and one partition, and whether every check passed."""
    uio = UIO.parse(h)
    lam = Partition(lam)
    size = uio.size
    if lam.weight != size:
        raise ValueError(f"partition {lam} has weight {lam.weight}, UIO has {size} elements")
    lines = [f"h={uio} lambda={lam}"]
    ok = True
    m_value = ghom.m_coeff_U(uio, lam)
    eschers = escher.enumerate_eschers(uio, size)
    lines.append(f"m={m_value}")
    lines.append(f"eschers={len(eschers)}")
    if len(lam) != 2:
        if len(lam) == 1:
            corrects = escher.count_full_corrects(uio)
            lines.append(f"corrects={corrects}")
            ok = corrects == len(eschers) == m_value
        return lines, ok
    n, k = lam
    pairs = escher.disjoint_pair_count(uio, n, k)
    lines.append(f"pairs={pairs}")
    expected = pairs - len(eschers) if n > k else (pairs - len(eschers)) / 2
    identity_ok = expected == m_value
    ok = ok and identity_ok
    lines.append(f"counting identity {'PASS' if identity_ok else 'FAIL'}")
    lines.append("FE table:")
    for w in eschers:
        first = escher.first_valid_subescher(uio, w, k)
        if first is None:
            lines.append(f"  [{w}] FE=none")
            ok = False
        else:
            kind = "exceptional" if first.exceptional else "ordinary"
            lines.append(f"  [{w}] FE={first.index} {kind}")
    lines.append("FI table:")
    for u, v in full_pairs(uio, n, k):
        fi = escher.first_valid_insertion(uio, u, v)
        lines.append(f"  u=[{u}] v=[{v}] FI={'none' if fi is None else fi}")
    if n > k:
        trip_ok = True
        for w in eschers:
            pair = escher.phi(uio, w, n, k, conv)
            back = escher.psi(uio, pair.u, pair.v, conv)
            same = back == w
            trip_ok = trip_ok and same
            if not same or trace:
                lines.append(
                    f"  [{w}] -> u=[{pair.u}] v=[{pair.v}] -> "
                    f"[{back if back is not None else 'none'}] {'ok' if same else 'MISMATCH'}"
                )
        asserted = math.gcd(n, k) == 1
        verdict = "PASS" if trip_ok else "FAIL"
        lines.append(f"roundtrip {verdict}" + ("" if asserted else " (not asserted)"))
        if asserted:
            ok = ok and trip_ok
    return lines, ok


def inspect_escher(
    h: str, w: str, lam: Partition, conv: AnchorConvention = DEFAULT_CONVENTION
) -> tuple[list[str], bool]:
    """FE of one Escher, the pair phi cuts it into, FI of that pair and psi's splice back."""
    uio = UIO.parse(h)
    seq = EscherSeq.parse(w)
    lam = Partition(lam)
    if len(lam) != 2:
        raise ValueError(f"lambda must have two parts, got {lam}")
    if lam.weight != uio.size:
        raise ValueError(f"partition {lam} has weight {lam.weight}, UIO has {uio.size} elements")
    n, k = lam
    if seq.support != frozenset(uio.elements):
        raise ValueError(f"[{seq}] does not visit every element of {uio} exactly once")
    if not escher.is_escher(uio, seq):
        raise ValueError(f"[{seq}] is not an Escher of {uio}")
    lines = [f"h={uio} w=[{seq}] n={n} k={k}"]
    first = escher.first_valid_subescher(uio, seq, k)
    if first is None:
        lines.append("FE=none")
        return lines, False
    lines.append(f"FE={first.index} {'exceptional' if first.exceptional else 'ordinary'}")
    pair = escher.phi(uio, seq, n, k, conv)
    lines.append(f"phi: u=[{pair.u}] v=[{pair.v}]")
    insertions = escher.valid_insertions(uio, pair.u, pair.v)
    fi = insertions[0] if insertions else None
    lines.append(
        f"FI={'none' if fi is None else fi} insertions={','.join(map(str, insertions)) or 'none'}"
    )
    back = escher.psi(uio, pair.u, pair.v, conv)
    same = back == seq
    lines.append(f"psi: [{back if back is not None else 'none'}] {'ok' if same else 'MISMATCH'}")
    if math.gcd(n, k) != 1:
        lines.append("(n, k) not coprime: round trip not asserted")
        return lines, True
    return lines, same


def merge_files(paths: list[str]) -> VerificationReport:
    return merge_reports([load_report(path) for path in paths])


def describe_graph(text: str) -> list[str]:
    """e-coefficients, positivity and sink histogram of a graph in text form."""
    graph = chromo.parse_graph(text)
    coefficients = chromo.e_coefficients(graph)
    report = chromo.positivity_report(coefficients)
    lines = [f"vertices={graph.number_of_nodes()} edges={graph.number_of_edges()}"]
    lines.append("e-coefficients: " + repr(coefficients))
    lines.append(f"e-positive: {report.is_e_positive}")
    if graph.number_of_nodes() <= chromo.MAX_SINK_VERTICES:
        histogram = chromo.sink_histogram(graph)
        lines.append("sinks: " + ", ".join(f"{j}:{c}" for j, c in histogram.items()))
    return lines


def uio_graph_text(h: str) -> str:
    """Incomparability graph of a UIO in the graph file format."""
    return chromo.format_graph(UIO.parse(h).incomparability_graph())
