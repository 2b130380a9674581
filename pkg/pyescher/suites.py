"""Per-UIO verification suites run by the sweep.

Each suite returns a SuiteResult. A failed mathematical check is recorded with
a counterexample, never raised.
"""

import itertools
import logging
import math
import time
from typing import Any, Iterator, Optional

from pyescher import chromo, escher, ghom, uio as uiomod
from pyescher.enums import Purity, Suite, SubEscherCase
from pyescher.errors import InvariantViolation
from pyescher.escher import DEFAULT_CONVENTION, AnchorConvention, EscherSeq
from pyescher.report import CheckOutcome, SuiteResult
from pyescher.symcore import Partition, partitions_of
from pyescher.uio import UIO

_LOGGER = logging.getLogger(__name__)

FUNLEMMA_MAX_SIZE = 5
S_POSITIVITY_MAX_SIZE = 5
GNECHROM_MAX_WEIGHT = 6
CAUCHY_MAX_DEGREE = 6
MIXED_PURITY = "mixed pure sequence"


def _lam(n: int, k: int) -> str:
    return f"{n},{k}"


def _outcome(
    passed: bool,
    value: Any = None,
    counterexample: Optional[dict[str, Any]] = None,
    asserted: bool = True,
    detail: Optional[str] = None,
) -> CheckOutcome:
    return CheckOutcome(
        passed=passed,
        value=value,
        counterexample=None if passed else counterexample,
        asserted=asserted,
        detail=detail,
    )


def full_pairs(uio: UIO, n: int, k: int) -> Iterator[tuple[EscherSeq, EscherSeq]]:
    """Every (n-Escher, k-Escher) pair on complementary supports, in original labels."""
    everything = set(uio.elements)
    for subset in itertools.combinations(uio.elements, n):
        rest = sorted(everything - set(subset))
        left = escher.enumerate_eschers(uio.induced(subset), n)
        if not left:
            continue
        right = escher.enumerate_eschers(uio.induced(rest), k)
        for u in left:
            for v in right:
                yield (
                    EscherSeq(subset[x - 1] for x in u),
                    EscherSeq(rest[x - 1] for x in v),
                )


def run_counts(uio: UIO, splits: list[tuple[int, int]], result: SuiteResult):
    size = uio.size
    eschers = {m: escher.count_eschers(uio, m) for m in range(1, size + 1)}
    for m, count in eschers.items():
        result.counts[f"eschers-{m}"] = count
    corrects = escher.count_full_corrects(uio)
    result.counts["corrects"] = corrects
    m_full = ghom.m_coeff_U(uio, Partition((size,)))
    result.coefficients[f"m:{size}"] = m_full
    result.checks["correct-escher"] = _outcome(
        corrects == eschers[size] == m_full,
        value=m_full,
        counterexample={"corrects": corrects, "eschers": eschers[size], "m": m_full},
    )
    result.checks["divisibility"] = _outcome(
        eschers[size] % size == 0,
        value=eschers[size],
        counterexample={"eschers": eschers[size], "size": size},
    )
    for n, k in splits:
        pairs = escher.disjoint_pair_count(uio, n, k)
        result.counts[f"pairs:{_lam(n, k)}"] = pairs
        m_nk = ghom.m_coeff_U(uio, Partition((n, k)))
        result.coefficients[f"m:{_lam(n, k)}"] = m_nk
        difference = pairs - eschers[size]
        if n == k:
            expected = difference // 2 if difference % 2 == 0 else None
        else:
            expected = difference
        result.checks[f"counting-identity:{_lam(n, k)}"] = _outcome(
            expected == m_nk,
            value=m_nk,
            counterexample={"m": m_nk, "pairs": pairs, "eschers": eschers[size]},
        )
        result.checks[f"nonnegative:{_lam(n, k)}"] = _outcome(m_nk >= 0, value=m_nk)
    poset = uio.to_poset()
    result.checks["scott-suppes"] = _outcome(
        uiomod.is_unit_interval_order(poset),
        counterexample={"relations": sorted(poset.relations)},
    )
    endpoints = uio.to_left_endpoints()
    realized = uiomod.from_left_endpoints(endpoints)
    result.checks["realization"] = _outcome(
        realized == uio,
        counterexample={"endpoints": [str(x) for x in endpoints], "realized": str(realized)},
    )


def run_roundtrip(
    uio: UIO, splits: list[tuple[int, int]], result: SuiteResult, conv: AnchorConvention
):
    for n, k in splits:
        if n == k:
            continue
        coprime = math.gcd(n, k) == 1
        try:
            checked, failure = escher.round_trip(uio, n, k, conv)
        except InvariantViolation as ex:
            if coprime:
                raise
            checked, failure = 0, dict(ex.payload, error=ex.message)
        result.counts[f"roundtrip-eschers:{_lam(n, k)}"] = checked
        result.checks[f"roundtrip:{_lam(n, k)}"] = _outcome(
            failure is None,
            counterexample=failure,
            asserted=coprime,
            detail=None if coprime else "n and k share a factor; reported only",
        )


def run_lemmas(uio: UIO, splits: list[tuple[int, int]], result: SuiteResult):
    size = uio.size
    full = escher.enumerate_eschers(uio, size)
    case_failure = strengthened_failure = missing_fe = mixed = None
    for w in full:
        for k in range(1, size):
            for m in range(size):
                try:
                    case = escher.subescher_case(uio, w, m, k)
                except InvariantViolation as ex:
                    case_failure = case_failure or ex.payload
                    continue
                if case is SubEscherCase.CASE2 and strengthened_failure is None:
                    for window in escher.strengthened_windows(w, m, k):
                        if not escher.is_escher(uio, window):
                            strengthened_failure = {
                                "w": list(w), "m": m, "k": k, "window": window,
                            }
                            break
            try:
                if escher.first_valid_subescher(uio, w, k) is None and missing_fe is None:
                    missing_fe = {"w": list(w), "k": k}
            except InvariantViolation as ex:
                case_failure = case_failure or ex.payload
            for start in range(size):
                chain = [w[(start + i) % size] for i in range(size)]
                try:
                    escher.purity(uio, chain, k)
                except InvariantViolation as ex:
                    if ex.message == MIXED_PURITY:
                        mixed = mixed or ex.payload
                    else:
                        case_failure = case_failure or ex.payload
    result.counts["lemma-eschers"] = len(full)
    result.checks["subescher-cases"] = _outcome(case_failure is None, counterexample=case_failure)
    result.checks["strengthened"] = _outcome(
        strengthened_failure is None, counterexample=strengthened_failure
    )
    result.checks["valid-subescher"] = _outcome(missing_fe is None, counterexample=missing_fe)

    for n, k in splits:
        if not (n > k and math.gcd(n, k) == 1):
            continue
        ordinary_failure = exceptional_failure = None
        for u, v in full_pairs(uio, n, k):
            insertions = escher.valid_insertions(uio, u, v)
            if not insertions:
                continue
            for j, gap in escher.consecutive_insertions(insertions, n * k):
                try:
                    if gap <= n and ordinary_failure is None:
                        seq = escher.spliced_sequence(u, v, j, gap)
                        if escher.purity(uio, seq, k) is not Purity.NOT_PURE:
                            ordinary_failure = {"u": list(u), "v": list(v), "j": j, "gap": gap}
                    if gap >= n and exceptional_failure is None:
                        seq = escher.exceptional_spliced_sequence(u, v, j, gap)
                        if escher.purity(uio, seq, k) is not Purity.NOT_PURE:
                            exceptional_failure = {"u": list(u), "v": list(v), "j": j, "gap": gap}
                except InvariantViolation as ex:
                    mixed = mixed or ex.payload
        result.checks[f"spliced-not-pure:{_lam(n, k)}"] = _outcome(
            ordinary_failure is None, counterexample=ordinary_failure
        )
        result.checks[f"exceptional-spliced-not-pure:{_lam(n, k)}"] = _outcome(
            exceptional_failure is None, counterexample=exceptional_failure
        )
    result.checks["no-mixed-purity"] = _outcome(mixed is None, counterexample=mixed)

    if size <= FUNLEMMA_MAX_SIZE:
        found = escher.funlemma_violations(uio)
        result.checks["funlemma"] = _outcome(
            not found, value=len(found), counterexample=found[0] if found else None
        )


def run_chromatic(uio: UIO, result: SuiteResult):
    graph = uio.incomparability_graph()
    size = uio.size
    colored = chromo.chromatic_sym(graph, size)
    by_edges = chromo.chromatic_sym_edges(graph, size)
    result.checks["dual-algorithm"] = _outcome(
        colored == by_edges,
        counterexample={"colorings": repr(colored), "edgeSubsets": repr(by_edges)},
    )
    coefficients = chromo.e_coefficients(graph)
    for lam in partitions_of(size):
        result.coefficients[f"c:{lam}"] = coefficients[lam]
    mismatches = {}
    for lam in partitions_of(size):
        m_value = ghom.m_coeff_U(uio, lam)
        if m_value != coefficients[lam]:
            mismatches[str(lam)] = {"m": m_value, "c": coefficients[lam]}
    result.checks["coefficient-bridge"] = _outcome(not mismatches, counterexample=mismatches)
    if size <= S_POSITIVITY_MAX_SIZE:
        schur = chromo.s_coefficients(graph)
        for lam, c in schur.items():
            result.coefficients[f"s:{lam}"] = c
        negative = {str(lam): c for lam, c in schur.items() if c < 0}
        result.checks["s-positive"] = _outcome(not negative, counterexample=negative)


def run_positivity(uio: UIO, result: SuiteResult):
    coefficients = chromo.e_coefficients(uio.incomparability_graph())
    for lam in partitions_of(uio.size):
        result.coefficients[f"c:{lam}"] = coefficients[lam]
    report = chromo.positivity_report(coefficients)
    result.checks["e-positive"] = _outcome(
        report.is_e_positive,
        counterexample=report.as_dictionary()["negativeTerms"],
    )


def run_sinks(uio: UIO, result: SuiteResult):
    graph = uio.incomparability_graph()
    histogram = chromo.sink_histogram(graph)
    for j, count in histogram.items():
        result.counts[f"sinks-{j}"] = count
    expected = chromo.sinks_by_length(chromo.e_coefficients(graph))
    result.checks["sinks"] = _outcome(
        histogram == expected,
        counterexample={
            "histogram": {str(j): c for j, c in histogram.items()},
            "coefficientSums": {str(j): c for j, c in expected.items()},
        },
    )


def run_gnechrom(uio: UIO, result: SuiteResult):
    graph = uio.incomparability_graph()
    expansion_failure = bridge_failure = None
    checked = 0
    for alpha in ghom.alphas_up_to(uio.size, GNECHROM_MAX_WEIGHT):
        checked += 1
        if expansion_failure is None and not ghom.verify_gnechrom(graph, alpha):
            expansion_failure = {"alpha": list(alpha)}
        if bridge_failure is None:
            mismatches = ghom.alpha_bridge_mismatches(graph, alpha)
            if mismatches:
                lam, ours, theirs = mismatches[0]
                bridge_failure = {
                    "alpha": list(alpha), "lambda": str(lam), "coefficient": ours, "expected": theirs,
                }
    result.counts["alphas"] = checked
    violations = ghom.poscrit_violations(graph, GNECHROM_MAX_WEIGHT)
    negative = None
    if violations:
        alpha, lam, c = violations[0]
        negative = {"alpha": list(alpha), "lambda": str(lam), "coefficient": c}
    result.checks["clique-expansion"] = _outcome(
        expansion_failure is None, counterexample=expansion_failure
    )
    result.checks["alpha-bridge"] = _outcome(bridge_failure is None, counterexample=bridge_failure)
    result.checks["alpha-nonnegative"] = _outcome(negative is None, counterexample=negative)
    cauchy_failure = None
    for degree in range(1, CAUCHY_MAX_DEGREE + 1):
        left, right = ghom.gcauchy_sides(graph, degree)
        for mu in partitions_of(degree):
            if left[mu] != right[mu]:
                cauchy_failure = {"degree": degree, "mu": str(mu)}
                break
        if cauchy_failure:
            break
    result.checks["cauchy"] = _outcome(cauchy_failure is None, counterexample=cauchy_failure)


def run_suite(
    uio: UIO,
    suite: Suite,
    splits: list[tuple[int, int]],
    conv: AnchorConvention = DEFAULT_CONVENTION,
) -> SuiteResult:
    """Run one suite on one UIO; an invariant violation becomes a failed check."""
    result = SuiteResult(h=str(uio), suite=suite)
    started = time.perf_counter()
    try:
        if suite is Suite.COUNTS:
            run_counts(uio, splits, result)
        elif suite is Suite.ROUNDTRIP:
            run_roundtrip(uio, splits, result, conv)
        elif suite is Suite.LEMMAS:
            run_lemmas(uio, splits, result)
        elif suite is Suite.CHROMATIC:
            run_chromatic(uio, result)
        elif suite is Suite.POSITIVITY:
            run_positivity(uio, result)
        elif suite is Suite.SINKS:
            run_sinks(uio, result)
        elif suite is Suite.GNECHROM:
            run_gnechrom(uio, result)
    except InvariantViolation as ex:
        _LOGGER.error("invariant violated in %s suite for h=%s: %s", suite.value, uio, ex.message)
        result.checks[f"{suite.value}-invariant"] = _outcome(
            False, counterexample=ex.payload, detail=ex.message
        )
    result.duration = time.perf_counter() - started
    _LOGGER.debug("%s suite for h=%s took %.3fs", suite.value, uio, result.duration)
    return result
