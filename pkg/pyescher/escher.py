"""Eschers, correct sequences, sub-Escher cases, insertions and the maps phi and psi.

All indices into an Escher are residues modulo its length. A window written
[a, b] means the consecutive residues a..b; anchors are chosen among the
integer representatives in [a, b].
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, NamedTuple, Optional, Sequence

from typing_extensions import Self

from pyescher.enums import (
    ExceptionalStart,
    KAnchor,
    LogicalSymbol,
    NAnchor,
    OrdinaryStart,
    Purity,
    Relation,
    SubEscherCase,
)
from pyescher.errors import CalibrationError, InvariantViolation
from pyescher.uio import UIO, generate_all

_LOGGER = logging.getLogger(__name__)

MAX_CALIBRATION_SIZE = 8
MAX_LOGICAL_POSITIONS = 5


class EscherSeq(tuple):
    """Sequence of distinct UIO elements, indexed cyclically."""

    def __new__(cls, elements: Iterable[int] = ()):
        elements = tuple(int(x) for x in elements)
        if len(set(elements)) != len(elements):
            raise ValueError(f"repeated elements in {list(elements)}")
        return super().__new__(cls, elements)

    @classmethod
    def parse(cls, text: str) -> Self:
        """Comma-separated element ids, e.g. "1,3,2"."""
        try:
            return cls(int(part) for part in text.split(","))
        except ValueError as ex:
            raise ValueError(f"invalid sequence {text!r}: {ex}")

    def at(self, i: int) -> int:
        return self[i % len(self)]

    def window(self, start: int, stop: int) -> list[int]:
        """Elements at residues start..stop inclusive."""
        return [self.at(i) for i in range(start, stop + 1)]

    def rotated_to(self, element: int) -> "EscherSeq":
        pos = self.index(element)
        return EscherSeq(self[pos:] + self[:pos])

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self)

    def __str__(self) -> str:
        return ",".join(str(x) for x in self)


class EscherPair(object):
    """An n-Escher u and a k-Escher v on disjoint supports."""

    def __init__(self, u: Sequence[int], v: Sequence[int]):
        self.u = EscherSeq(u)
        self.v = EscherSeq(v)
        if self.u.support & self.v.support:
            raise ValueError(
                f"supports overlap: {sorted(self.u.support & self.v.support)}"
            )

    def covers(self, uio: UIO) -> bool:
        return (self.u.support | self.v.support) == frozenset(uio.elements)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EscherPair):
            return NotImplemented
        return self.u == other.u and self.v == other.v

    def __hash__(self) -> int:
        return hash((self.u, self.v))

    def __repr__(self) -> str:
        return f"EscherPair(u=[{self.u}], v=[{self.v}])"

    def as_dictionary(self) -> dict[str, list[int]]:
        return {"u": list(self.u), "v": list(self.v)}


@dataclass(frozen=True)
class AnchorConvention:
    """Rotation rules for the two windows phi cuts out and for psi's starting point."""

    k_anchor: KAnchor
    n_anchor: NAnchor
    ordinary_start: OrdinaryStart
    exceptional_start: ExceptionalStart

    def __str__(self) -> str:
        return (
            f"k-anchor {self.k_anchor.value}, n-anchor {self.n_anchor.value}, "
            f"ordinary start {self.ordinary_start.value}, "
            f"exceptional start {self.exceptional_start.value}"
        )

    def as_dictionary(self) -> dict[str, str]:
        return {
            "kAnchor": self.k_anchor.name,
            "nAnchor": self.n_anchor.name,
            "ordinaryStart": self.ordinary_start.name,
            "exceptionalStart": self.exceptional_start.name,
        }

    @classmethod
    def from_json_dictionary(cls, js: dict[str, str]) -> Self:
        return cls(
            KAnchor[js["kAnchor"]],
            NAnchor[js["nAnchor"]],
            OrdinaryStart[js["ordinaryStart"]],
            ExceptionalStart[js["exceptionalStart"]],
        )


# The rules read literally: both windows start at multiples of their lengths.
LITERAL_CONVENTION = AnchorConvention(
    KAnchor.ZERO_MOD_K, NAnchor.ZERO_MOD_N, OrdinaryStart.U_0, ExceptionalStart.V_N_MOD_K
)

# v_j sits at w-index j and u_j at w-index j + k, so the splice point of psi
# is FE(w) and w_0 is u_0 (ordinary) or v_(n mod k) (exceptional).
DEFAULT_CONVENTION = AnchorConvention(
    KAnchor.ZERO_MOD_K, NAnchor.K_MOD_N, OrdinaryStart.U_0, ExceptionalStart.V_N_MOD_K
)


class FirstSubEscher(NamedTuple):
    index: int
    exceptional: bool


def _check_distinct(seq: Sequence[int]):
    if len(set(seq)) != len(seq):
        raise ValueError(f"repeated elements in {list(seq)}")


def is_escher(uio: UIO, seq: Sequence[int]) -> bool:
    _check_distinct(seq)
    size = len(seq)
    return all(uio.arrow(seq[i], seq[(i + 1) % size]) for i in range(size))


def _escher_paths(uio: UIO, length: int) -> Iterator[list[int]]:
    if not 1 <= length <= uio.size:
        raise ValueError(f"Escher length must be in 1..{uio.size}, got {length}")
    path: list[int] = []
    used = [False] * (uio.size + 1)

    def extend() -> Iterator[list[int]]:
        if len(path) == length:
            if uio.arrow(path[-1], path[0]):
                yield path
            return
        last = path[-1]
        for x in uio.elements:
            if not used[x] and uio.arrow(last, x):
                used[x] = True
                path.append(x)
                yield from extend()
                path.pop()
                used[x] = False

    for first in uio.elements:
        used[first] = True
        path.append(first)
        yield from extend()
        path.pop()
        used[first] = False


def enumerate_eschers(uio: UIO, length: int) -> list[EscherSeq]:
    """All Eschers of the given length, lexicographic."""
    return [EscherSeq(path) for path in _escher_paths(uio, length)]


def count_eschers(uio: UIO, length: int) -> int:
    return sum(1 for _ in _escher_paths(uio, length))


def _connected_prefix_step(uio: UIO, earlier: Sequence[int], x: int) -> bool:
    # a prefix stays connected in the incomparability graph iff each new
    # element intersects some earlier one
    return any(uio.relation(y, x) is Relation.INTERSECT for y in earlier)


def _literal_step(uio: UIO, earlier: Sequence[int], x: int) -> bool:
    return any(not uio.precedes(y, x) for y in earlier)


def is_correct(uio: UIO, seq: Sequence[int]) -> bool:
    """Consecutive arrows hold and every prefix is connected in the incomparability graph."""
    _check_distinct(seq)
    arrows = all(uio.arrow(a, b) for a, b in zip(seq, seq[1:]))
    connected = all(
        _connected_prefix_step(uio, seq[:j], seq[j]) for j in range(1, len(seq))
    )
    literal = all(_literal_step(uio, seq[:j], seq[j]) for j in range(1, len(seq)))
    if arrows and connected != literal:
        raise InvariantViolation(
            "correctness formulations disagree", {"sequence": list(seq)}
        )
    return arrows and connected


def count_full_corrects(uio: UIO) -> int:
    """Correct orderings of all of U, by backtracking on the prefix conditions."""
    count = 0
    path: list[int] = []
    used = [False] * (uio.size + 1)

    def extend():
        nonlocal count
        if len(path) == uio.size:
            count += 1
            return
        for x in uio.elements:
            if used[x] or (path and not uio.arrow(path[-1], x)):
                continue
            if path:
                connected = _connected_prefix_step(uio, path, x)
                if connected != _literal_step(uio, path, x):
                    raise InvariantViolation(
                        "correctness formulations disagree", {"sequence": path + [x]}
                    )
                if not connected:
                    continue
            used[x] = True
            path.append(x)
            extend()
            path.pop()
            used[x] = False

    extend()
    return count


def _case(uio: UIO, a: int, b: int, c: int, d: int, where: dict[str, Any]) -> SubEscherCase:
    closes_window = uio.arrow(c, b)
    closes_rest = uio.arrow(a, d)
    if closes_window and closes_rest:
        return SubEscherCase.CASE1
    if closes_rest:
        return SubEscherCase.CASE2
    if closes_window:
        return SubEscherCase.CASE3
    raise InvariantViolation("no sub-Escher case applies", where)


def subescher_case(uio: UIO, w: Sequence[int], m: int, k: int) -> SubEscherCase:
    """Case of the window [w_(m+1), ..., w_(m+k)] of a cyclic Escher."""
    size = len(w)
    if not 1 <= k < size:
        raise ValueError(f"window length must be in 1..{size - 1}, got {k}")
    return _case(
        uio,
        w[m % size],
        w[(m + 1) % size],
        w[(m + k) % size],
        w[(m + k + 1) % size],
        {"uio": str(uio), "w": list(w), "m": m, "k": k},
    )


def first_valid_subescher(uio: UIO, w: Sequence[int], k: int) -> Optional[FirstSubEscher]:
    """FE(w): smallest l with a valid k-subEscher [w_(l+1), ..., w_(l+k)]."""
    if not is_escher(uio, w):
        raise ValueError(f"[{','.join(map(str, w))}] is not an Escher")
    size = len(w)
    for l in range(size):
        if subescher_case(uio, w, l, k) is SubEscherCase.CASE1:
            return FirstSubEscher(l, l + k >= size)
    return None


def strengthened_windows(w: Sequence[int], m: int, k: int) -> list[list[int]]:
    """The three n-windows starting at m+k, m+k+1 and m+k+2."""
    size = len(w)
    n = size - k
    seq = EscherSeq(w)
    return [seq.window(m + k + s, m + k + s + n - 1) for s in range(3)]


def purity(uio: UIO, seq: Sequence[int], k: int) -> Purity:
    """Purity of a linear arrow chain w_0 -> ... -> w_L over the windows inside it.

    A chain too short to contain a window is reported as PureMinus.
    """
    if any(not uio.arrow(a, b) for a, b in zip(seq, seq[1:])):
        raise ValueError(f"[{','.join(map(str, seq))}] is not an arrow chain")
    last = len(seq) - 1
    cases = set()
    for m in range(0, last - k):
        case = _case(
            uio,
            seq[m],
            seq[m + 1],
            seq[m + k],
            seq[m + k + 1],
            {"uio": str(uio), "chain": list(seq), "m": m, "k": k},
        )
        if case is SubEscherCase.CASE1:
            return Purity.NOT_PURE
        cases.add(case)
    if cases == {SubEscherCase.CASE3}:
        return Purity.PURE_PLUS
    if len(cases) > 1:
        raise InvariantViolation(
            "mixed pure sequence", {"uio": str(uio), "chain": list(seq), "k": k}
        )
    return Purity.PURE_MINUS


def _check_pair(u: Sequence[int], v: Sequence[int]):
    overlap = set(u) & set(v)
    if overlap:
        raise ValueError(f"supports overlap: {sorted(overlap)}")


def is_valid_insertion(uio: UIO, u: Sequence[int], v: Sequence[int], l: int) -> bool:
    n, k = len(u), len(v)
    return uio.arrow(u[l % n], v[(l + 1) % k]) and uio.arrow(v[l % k], u[(l + 1) % n])


def valid_insertions(uio: UIO, u: Sequence[int], v: Sequence[int]) -> list[int]:
    """Every l in [0, n*k) with u_l -> v_(l+1) and v_l -> u_(l+1)."""
    _check_pair(u, v)
    return [l for l in range(len(u) * len(v)) if is_valid_insertion(uio, u, v, l)]


def first_valid_insertion(uio: UIO, u: Sequence[int], v: Sequence[int]) -> Optional[int]:
    """FI(u, v), or None when no insertion is valid."""
    _check_pair(u, v)
    for l in range(len(u) * len(v)):
        if is_valid_insertion(uio, u, v, l):
            return l
    return None


def consecutive_insertions(insertions: Sequence[int], period: int) -> list[tuple[int, int]]:
    """(j, r) for each valid insertion j and the cyclic gap r to the next one."""
    pairs = []
    for pos, j in enumerate(insertions):
        nxt = insertions[(pos + 1) % len(insertions)]
        gap = (nxt - j) % period or period
        pairs.append((j, gap))
    return pairs


def spliced_sequence(u: Sequence[int], v: Sequence[int], j: int, r: int) -> list[int]:
    """u_j -> ... -> u_(j+r) -> v_(j+r+1) -> ... -> v_(j+r+k)."""
    n, k = len(u), len(v)
    return [u[i % n] for i in range(j, j + r + 1)] + [
        v[i % k] for i in range(j + r + 1, j + r + k + 1)
    ]


def exceptional_spliced_sequence(
    u: Sequence[int], v: Sequence[int], j: int, gap: int
) -> list[int]:
    """v_(j+n) -> ... -> v_(j+L) -> u_(j+L-n+1) -> ... -> u_(j+L) -> v_(j+L+1) -> ... -> v_(j+L+k), L = gap."""
    n, k = len(u), len(v)
    if gap < n:
        raise ValueError(f"gap {gap} is shorter than the n-Escher")
    return (
        [v[i % k] for i in range(j + n, j + gap + 1)]
        + [u[i % n] for i in range(j + gap - n + 1, j + gap + 1)]
        + [v[i % k] for i in range(j + gap + 1, j + gap + k + 1)]
    )


def _anchor(start: int, length: int, target: Optional[int], modulus: int) -> int:
    """The representative q in [start, start+length-1] with q = target mod modulus; start if target is None."""
    if target is None:
        return start
    for q in range(start, start + length):
        if (q - target) % modulus == 0:
            return q
    raise InvariantViolation(
        "window has no anchor", {"start": start, "length": length, "target": target}
    )


def phi(uio: UIO, w: Sequence[int], n: int, k: int, conv: AnchorConvention = DEFAULT_CONVENTION) -> EscherPair:
    """Cut an (n+k)-Escher at its first valid k-subEscher."""
    if not n > k >= 1:
        raise ValueError(f"phi needs n > k >= 1, got n={n}, k={k}")
    if len(w) != n + k:
        raise ValueError(f"sequence has length {len(w)}, expected {n + k}")
    first = first_valid_subescher(uio, w, k)
    if first is None:
        raise InvariantViolation(
            "Escher has no valid sub-Escher", {"uio": str(uio), "w": list(w), "k": k}
        )
    seq = EscherSeq(w)
    L = first.index
    q = _anchor(L + 1, k, 0 if conv.k_anchor is KAnchor.ZERO_MOD_K else None, k)
    v = [seq.at(L + 1 + (q - (L + 1) + j) % k) for j in range(k)]
    if conv.n_anchor is NAnchor.ZERO_MOD_N:
        target = 0
    elif conv.n_anchor is NAnchor.K_MOD_N:
        target = k % n
    else:
        target = None
    q = _anchor(L + k + 1, n, target, n)
    u = [seq.at(L + k + 1 + (q - (L + k + 1) + j) % n) for j in range(n)]
    return EscherPair(u, v)


def psi(
    uio: UIO, u: Sequence[int], v: Sequence[int], conv: AnchorConvention = DEFAULT_CONVENTION
) -> Optional[EscherSeq]:
    """Splice v into u after the first valid insertion; None if there is none."""
    _check_pair(u, v)
    if set(u) | set(v) != set(uio.elements):
        raise ValueError("pair does not cover the UIO")
    L = first_valid_insertion(uio, u, v)
    if L is None:
        return None
    n, k = len(u), len(v)
    cycle = EscherSeq(
        [u[i % n] for i in range(L + 1, L + n + 1)]
        + [v[i % k] for i in range(L + 1, L + k + 1)]
    )
    if L < n:
        start = u[0] if conv.ordinary_start is OrdinaryStart.U_0 else u[k % n]
    else:
        start = v[n % k] if conv.exceptional_start is ExceptionalStart.V_N_MOD_K else v[0]
    return cycle.rotated_to(start)


def round_trip(
    uio: UIO, n: int, k: int, conv: AnchorConvention = DEFAULT_CONVENTION
) -> tuple[int, Optional[dict[str, Any]]]:
    """Check psi(phi(w)) = w and injectivity of phi over every (n+k)-Escher.

    Returns the number of Eschers checked and the first failure, if any.
    """
    images: dict[EscherPair, EscherSeq] = {}
    checked = 0
    for w in enumerate_eschers(uio, n + k):
        checked += 1
        pair = phi(uio, w, n, k, conv)
        back = psi(uio, pair.u, pair.v, conv)
        if back != w:
            return checked, {
                "uio": str(uio),
                "w": list(w),
                "pair": pair.as_dictionary(),
                "psi": list(back) if back is not None else None,
            }
        if pair in images:
            return checked, {
                "uio": str(uio),
                "w": list(w),
                "collidesWith": list(images[pair]),
                "pair": pair.as_dictionary(),
            }
        images[pair] = w
    return checked, None


def coprime_splits(size: int) -> list[tuple[int, int]]:
    return [(size - k, k) for k in range(1, size) if size - k > k and math.gcd(size - k, k) == 1]


def candidate_conventions() -> list[AnchorConvention]:
    """Search order: the literal rules, the derived default, then the rest of the rule space."""
    ordered = [LITERAL_CONVENTION, DEFAULT_CONVENTION]
    for combo in itertools.product(KAnchor, NAnchor, OrdinaryStart, ExceptionalStart):
        conv = AnchorConvention(*combo)
        if conv not in ordered:
            ordered.append(conv)
    return ordered


def calibrate_convention(max_size: int) -> AnchorConvention:
    """First convention under which psi inverts phi on every UIO of size 3..max_size, coprime n > k."""
    if not 3 <= max_size <= MAX_CALIBRATION_SIZE:
        raise ValueError(f"calibration size must be in 3..{MAX_CALIBRATION_SIZE}, got {max_size}")
    rejected = []
    for conv in candidate_conventions():
        failure = None
        for size in range(3, max_size + 1):
            for uio in generate_all(size):
                for n, k in coprime_splits(size):
                    _, failure = round_trip(uio, n, k, conv)
                    if failure:
                        break
                if failure:
                    break
            if failure:
                break
        if failure is None:
            _LOGGER.info("calibrated anchor convention up to size %d: %s", max_size, conv)
            return conv
        _LOGGER.info("rejected anchor convention (%s): %s", conv, failure)
        rejected.append({"convention": conv.as_dictionary(), "counterexample": failure})
    raise CalibrationError(
        "no anchor convention inverts phi", {"maxSize": max_size, "rejected": rejected}
    )


def disjoint_pair_count(uio: UIO, n: int, k: int) -> int:
    """Ordered (n-Escher, k-Escher) pairs with disjoint supports covering U."""
    if n + k != uio.size or n < 1 or k < 1:
        raise ValueError(f"need n + k = {uio.size} with n, k >= 1, got n={n}, k={k}")
    everything = set(uio.elements)
    total = 0
    for subset in itertools.combinations(uio.elements, n):
        left = count_eschers(uio.induced(subset), n)
        if left:
            total += left * count_eschers(uio.induced(everything - set(subset)), k)
    return total


def logical_sequence_holds(
    uio: UIO, elements: Sequence[int], symbols: Sequence[LogicalSymbol]
) -> bool:
    """Truth of w_1 s_1 w_2 ... s_(m-1) w_m; elements may repeat."""
    if len(symbols) != len(elements) - 1:
        raise ValueError("need one symbol between each pair of neighbours")
    for a, symbol, b in zip(elements, symbols, elements[1:]):
        if symbol is LogicalSymbol.PREC:
            if not uio.precedes(a, b):
                return False
        elif not uio.arrow(a, b):
            return False
    return True


def funlemma_violations(uio: UIO, max_positions: int = MAX_LOGICAL_POSITIONS) -> list[dict[str, Any]]:
    """Closed logical sequences (w_m = w_1) with at least as many ≺ as → that hold in uio."""
    if max_positions > MAX_LOGICAL_POSITIONS:
        raise ValueError(f"logical sequences limited to {MAX_LOGICAL_POSITIONS} positions")
    found = []
    for positions in range(2, max_positions + 1):
        for symbols in itertools.product(LogicalSymbol, repeat=positions - 1):
            precs = sum(1 for s in symbols if s is LogicalSymbol.PREC)
            if precs < len(symbols) - precs:
                continue
            for head in itertools.product(uio.elements, repeat=positions - 1):
                elements = list(head) + [head[0]]
                if logical_sequence_holds(uio, elements, symbols):
                    found.append(
                        {"elements": elements, "symbols": [s.value for s in symbols]}
                    )
    return found
