"""Unit interval orders in Hessenberg form, their relations and pattern checks."""

from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

import networkx as nx
from typing_extensions import Self

from pyescher.enums import Relation

MAX_GENERATE_SIZE = 12


class UIO(object):
    """Unit interval order on 1..N given by its 1-based Hessenberg vector.

    For i < j the elements intersect iff j <= h(i), otherwise i precedes j.
    """

    __slots__ = ("h",)

    def __init__(self, h: Sequence[int]):
        h = tuple(int(x) for x in h)
        size = len(h)
        if size == 0:
            raise ValueError("invalid Hessenberg vector: empty")
        for i, value in enumerate(h, start=1):
            if not i <= value <= size:
                raise ValueError(f"invalid Hessenberg vector {list(h)}: h({i})={value}")
            if i > 1 and value < h[i - 2]:
                raise ValueError(
                    f"invalid Hessenberg vector {list(h)}: not weakly increasing at {i}"
                )
        self.h = h

    @classmethod
    def parse(cls, text: str) -> Self:
        """Parse the comma-separated text form, e.g. "2,3,3"."""
        try:
            values = [int(part) for part in text.split(",")]
        except ValueError:
            raise ValueError(f"invalid Hessenberg vector: {text!r}")
        return cls(values)

    @property
    def size(self) -> int:
        return len(self.h)

    @property
    def elements(self) -> range:
        return range(1, len(self.h) + 1)

    def hval(self, i: int) -> int:
        return self.h[i - 1]

    def _check_element(self, i: int):
        if not 1 <= i <= len(self.h):
            raise ValueError(f"element {i} outside 1..{len(self.h)}")

    def relation(self, i: int, j: int) -> Relation:
        self._check_element(i)
        self._check_element(j)
        if i == j:
            raise ValueError("self-relation undefined; use arrow")
        if i < j:
            return Relation.PREC if j > self.h[i - 1] else Relation.INTERSECT
        return Relation.SUCC if i > self.h[j - 1] else Relation.INTERSECT

    def arrow(self, i: int, j: int) -> bool:
        """i -> j, i.e. i does not succeed j."""
        size = len(self.h)
        if not (1 <= i <= size and 1 <= j <= size):
            raise ValueError(f"elements {i}, {j} must lie in 1..{size}")
        return i <= self.h[j - 1]

    def precedes(self, i: int, j: int) -> bool:
        size = len(self.h)
        if not (1 <= i <= size and 1 <= j <= size):
            raise ValueError(f"elements {i}, {j} must lie in 1..{size}")
        return i < j and j > self.h[i - 1]

    def induced(self, subset: Iterable[int]) -> "UIO":
        """Restriction to subset, relabeled 1..|subset| in original order."""
        members = sorted(set(subset))
        if not members:
            raise ValueError("cannot induce on an empty subset")
        for s in members:
            self._check_element(s)
        h = []
        for s in members:
            reach = self.h[s - 1]
            h.append(max(b for b, t in enumerate(members, start=1) if t <= reach))
        return UIO(h)

    def incomparability_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.elements)
        for i in self.elements:
            for j in range(i + 1, self.h[i - 1] + 1):
                graph.add_edge(i, j)
        return graph

    def to_poset(self) -> "Poset":
        return Poset(
            self.size,
            [(i, j) for i in self.elements for j in self.elements if self.precedes(i, j)],
        )

    def to_left_endpoints(self) -> list[Fraction]:
        """A strictly increasing interval realization, built greedily.

        x_i must clear x_j + 1 exactly for the prefix of j whose h(j) < i and
        stay below x_j + 1 for the remaining j < i.
        """
        xs: list[Fraction] = [Fraction(0)]
        for i in range(2, self.size + 1):
            # 1-based: elements 1..p are the ones i must clear
            p = sum(1 for j in range(1, i) if self.h[j - 1] < i)
            lo = xs[i - 2]
            if p:
                lo = max(lo, xs[p - 1] + 1)
            if p + 1 < i:
                hi = xs[p] + 1
                xs.append((lo + hi) / 2)
            else:
                xs.append(xs[i - 2] + 1)
        return xs

    def __eq__(self, other) -> bool:
        if not isinstance(other, UIO):
            return NotImplemented
        return self.h == other.h

    def __hash__(self) -> int:
        return hash(self.h)

    def __lt__(self, other: "UIO") -> bool:
        return (len(self.h), self.h) < (len(other.h), other.h)

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.h)

    def __repr__(self) -> str:
        return f"UIO({str(self)})"


def from_hessenberg(h: Sequence[int]) -> UIO:
    return UIO(h)


def from_left_endpoints(xs: Sequence[Union[int, float, Fraction]]) -> UIO:
    """UIO of unit intervals starting at xs; equal endpoints keep input order."""
    if not xs:
        raise ValueError("no endpoints given")
    ordered = sorted(xs)
    h = []
    for x in ordered:
        h.append(max(j for j, y in enumerate(ordered, start=1) if y < x + 1))
    return UIO(h)


def generate_all(size: int) -> Iterator[UIO]:
    """Every Hessenberg vector of the given size once, in lexicographic order."""
    if not 1 <= size <= MAX_GENERATE_SIZE:
        raise ValueError(f"size must be in 1..{MAX_GENERATE_SIZE}, got {size}")

    def extend(prefix: list[int]) -> Iterator[tuple[int, ...]]:
        i = len(prefix) + 1
        if i > size:
            yield tuple(prefix)
            return
        low = max(i, prefix[-1]) if prefix else 1
        for value in range(low, size + 1):
            prefix.append(value)
            yield from extend(prefix)
            prefix.pop()

    for h in extend([]):
        yield UIO(h)


class Poset(object):
    """Finite strict partial order on 1..size."""

    def __init__(self, size: int, relations: Iterable[tuple[int, int]]):
        if size < 0:
            raise ValueError("poset size must be non-negative")
        self.size = size
        self.relations: frozenset[tuple[int, int]] = frozenset(
            (int(a), int(b)) for a, b in relations
        )
        for a, b in self.relations:
            if a == b:
                raise ValueError(f"relation is not irreflexive at {a}")
            if not (1 <= a <= size and 1 <= b <= size):
                raise ValueError(f"relation ({a}, {b}) outside 1..{size}")
        for a, b in self.relations:
            for c, d in self.relations:
                if b == c and (a, d) not in self.relations:
                    raise ValueError(f"relation is not transitive: {a}<{b}<{d}")
        self._chains: dict[int, list[tuple[int, ...]]] = {}

    @classmethod
    def chain(cls, size: int) -> Self:
        return cls(size, [(a, b) for a in range(1, size + 1) for b in range(a + 1, size + 1)])

    @classmethod
    def antichain(cls, size: int) -> Self:
        return cls(size, [])

    def disjoint_union(self, other: "Poset") -> "Poset":
        shift = self.size
        return Poset(
            self.size + other.size,
            list(self.relations) + [(a + shift, b + shift) for a, b in other.relations],
        )

    def less(self, a: int, b: int) -> bool:
        return (a, b) in self.relations

    def comparable(self, a: int, b: int) -> bool:
        return a == b or (a, b) in self.relations or (b, a) in self.relations

    def chains(self, length: int) -> list[tuple[int, ...]]:
        """All chains c_1 < ... < c_length, memoized per length."""
        if length not in self._chains:
            if length <= 0:
                self._chains[length] = [()]
            elif length == 1:
                self._chains[length] = [(x,) for x in range(1, self.size + 1)]
            else:
                self._chains[length] = [
                    chain + (y,)
                    for chain in self.chains(length - 1)
                    for y in range(1, self.size + 1)
                    if self.less(chain[-1], y)
                ]
        return self._chains[length]


def is_ab_free(poset: Poset, a: int, b: int) -> bool:
    """No a-chain and b-chain with every cross pair incomparable."""
    if a < 1 or b < 1:
        raise ValueError("chain lengths must be positive")
    for first in poset.chains(a):
        for second in poset.chains(b):
            if all(not poset.comparable(x, y) for x in first for y in second):
                return False
    return True


def is_unit_interval_order(poset: Poset) -> bool:
    """(2+2)- and (3+1)-free."""
    return is_ab_free(poset, 2, 2) and is_ab_free(poset, 3, 1)
