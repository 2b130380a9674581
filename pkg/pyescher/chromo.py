"""Chromatic symmetric functions, clique expansions and sink counts."""

import logging
import math
from collections import Counter
from functools import lru_cache
from typing import Iterable, Iterator

import networkx as nx
from networkx.utils import UnionFind
from typing_extensions import Self

from pyescher.symcore import (
    EBasisExpr,
    MultiPoly,
    Partition,
    expand_in_e,
    expand_in_s,
    m_poly,
    p_lambda_poly,
)

_LOGGER = logging.getLogger(__name__)

MAX_SINK_VERTICES = 8


class AlphaMap(tuple):
    """Per-vertex multiplicities, aligned with the sorted vertex order of a graph."""

    def __new__(cls, values: Iterable[int] = ()):
        values = tuple(int(a) for a in values)
        if any(a < 1 for a in values):
            raise ValueError(f"multiplicities must be positive: {values}")
        return super().__new__(cls, values)

    @classmethod
    def ones(cls, size: int) -> Self:
        return cls((1,) * size)

    @property
    def total(self) -> int:
        return sum(self)

    def factorial_product(self) -> int:
        return math.prod(math.factorial(a) for a in self)

    def __str__(self) -> str:
        return ",".join(str(a) for a in self)


class PositivityReport(object):
    def __init__(self, negative_terms: list[tuple[Partition, int]]):
        self.negative_terms = negative_terms

    @property
    def is_e_positive(self) -> bool:
        return not self.negative_terms

    def as_dictionary(self):
        return {
            "isEPositive": self.is_e_positive,
            "negativeTerms": {str(lam): c for lam, c in self.negative_terms},
        }


def vertex_order(graph: nx.Graph) -> list:
    return sorted(graph.nodes)


def adjacency_masks(graph: nx.Graph) -> tuple[list, list[int]]:
    """Sorted vertices and, per vertex position, the bitmask of neighbour positions."""
    vertices = vertex_order(graph)
    index = {v: i for i, v in enumerate(vertices)}
    masks = [0] * len(vertices)
    for a, b in graph.edges:
        if a == b:
            raise ValueError(f"graph has a loop at {a}")
        masks[index[a]] |= 1 << index[b]
        masks[index[b]] |= 1 << index[a]
    return vertices, masks


def _check_colors(graph: nx.Graph, colors: int):
    if graph.number_of_nodes() == 0:
        raise ValueError("graph has no vertices")
    if colors < graph.number_of_nodes():
        raise ValueError("insufficient colors for faithful expansion")


def stable_partition_types(graph: nx.Graph) -> Counter[Partition]:
    """Block-size types of all partitions of V into independent sets.

    This is coloring backtracking up to renaming colors: a vertex either reuses
    a color class it is not adjacent to or opens the next unused class. Vertices
    are visited by descending degree.
    """
    vertices, masks = adjacency_masks(graph)
    order = sorted(range(len(vertices)), key=lambda i: (-bin(masks[i]).count("1"), i))
    types: Counter[Partition] = Counter()
    classes: list[int] = []

    def place(pos: int):
        if pos == len(order):
            sizes = sorted((bin(c).count("1") for c in classes), reverse=True)
            types[Partition(sizes)] += 1
            return
        vertex = order[pos]
        bit = 1 << vertex
        for c, members in enumerate(classes):
            if not members & masks[vertex]:
                classes[c] = members | bit
                place(pos + 1)
                classes[c] = members
        classes.append(bit)
        place(pos + 1)
        classes.pop()

    place(0)
    return types


def chromatic_sym(graph: nx.Graph, colors: int) -> MultiPoly:
    """Sum over proper colorings with the given number of colors of prod x_c(v)."""
    _check_colors(graph, colors)
    result = MultiPoly.zero(colors)
    for lam, count in stable_partition_types(graph).items():
        # each block assignment to distinct colors is a coloring; equal-size blocks commute
        multiplicity = count * math.prod(
            math.factorial(m) for m in Counter(lam).values()
        )
        result = result + m_poly(lam, colors) * multiplicity
    return result


def chromatic_sym_edges(graph: nx.Graph, colors: int) -> MultiPoly:
    """Inclusion-exclusion over edge subsets into power sums of component sizes."""
    _check_colors(graph, colors)
    vertices = vertex_order(graph)
    edges = list(graph.edges)
    signed: Counter[Partition] = Counter()
    for subset in range(1 << len(edges)):
        components = UnionFind(vertices)
        picked = 0
        for e, (a, b) in enumerate(edges):
            if subset >> e & 1:
                components.union(a, b)
                picked += 1
        sizes = sorted((len(block) for block in components.to_sets()), reverse=True)
        signed[Partition(sizes)] += -1 if picked % 2 else 1
    result = MultiPoly.zero(colors)
    for lam, coeff in signed.items():
        if coeff:
            result = result + p_lambda_poly(lam, colors) * coeff
    return result


def e_coefficients(graph: nx.Graph) -> EBasisExpr:
    return expand_in_e(chromatic_sym(graph, graph.number_of_nodes()))


def s_coefficients(graph: nx.Graph) -> dict[Partition, int]:
    return expand_in_s(chromatic_sym(graph, graph.number_of_nodes()))


def clique_expand(graph: nx.Graph, alpha: AlphaMap) -> nx.Graph:
    """Replace vertex v by a clique of size alpha(v); cliques of adjacent vertices are joined."""
    vertices = vertex_order(graph)
    if len(alpha) != len(vertices):
        raise ValueError(
            f"multiplicity map has {len(alpha)} entries for {len(vertices)} vertices"
        )
    blocks = {}
    next_label = 1
    for v, a in zip(vertices, alpha):
        blocks[v] = list(range(next_label, next_label + a))
        next_label += a
    expanded = nx.Graph()
    expanded.add_nodes_from(range(1, next_label))
    for block in blocks.values():
        expanded.add_edges_from(
            (x, y) for i, x in enumerate(block) for y in block[i + 1:]
        )
    for a, b in graph.edges:
        expanded.add_edges_from((x, y) for x in blocks[a] for y in blocks[b])
    return expanded


def independent_subsets(candidates: int, masks: list[int]) -> Iterator[int]:
    """Nonempty independent subsets of the candidate bitmask."""

    def extend(remaining: int, chosen: int) -> Iterator[int]:
        if chosen:
            yield chosen
        while remaining:
            low = remaining & -remaining
            v = low.bit_length() - 1
            remaining &= ~low
            yield from extend(remaining & ~masks[v], chosen | low)

    yield from extend(candidates, 0)


def neighbourhood(subset: int, masks: list[int]) -> int:
    result = 0
    while subset:
        low = subset & -subset
        result |= masks[low.bit_length() - 1]
        subset &= ~low
    return result


def acyclic_orientations(graph: nx.Graph) -> Iterator[frozenset[tuple]]:
    """Every acyclic orientation as a set of directed edges (tail, head).

    Peels off the sink set T, orients every edge into T from the rest, and
    recurses on the rest, whose own sinks must all have a neighbour in T.
    """
    vertices, masks = adjacency_masks(graph)
    everything = (1 << len(vertices)) - 1

    def orient(remaining: int, allowed: int) -> Iterator[list[tuple[int, int]]]:
        if not remaining:
            yield []
            return
        for sinks in independent_subsets(remaining & allowed, masks):
            rest = remaining & ~sinks
            into = [
                (x, t)
                for t in range(len(vertices))
                if sinks >> t & 1
                for x in range(len(vertices))
                if rest >> x & 1 and masks[t] >> x & 1
            ]
            for tail in orient(rest, neighbourhood(sinks, masks) & rest):
                yield into + tail

    for arcs in orient(everything, everything):
        yield frozenset((vertices[a], vertices[b]) for a, b in arcs)


def sink_histogram(graph: nx.Graph) -> dict[int, int]:
    """Number of acyclic orientations with exactly j sinks, for each j that occurs."""
    size = graph.number_of_nodes()
    if size > MAX_SINK_VERTICES:
        raise ValueError(f"sink histogram limited to {MAX_SINK_VERTICES} vertices, got {size}")
    vertices, masks = adjacency_masks(graph)
    everything = (1 << size) - 1

    @lru_cache(maxsize=None)
    def count(remaining: int, allowed: int) -> int:
        if not remaining:
            return 1
        total = 0
        for sinks in independent_subsets(remaining & allowed, masks):
            rest = remaining & ~sinks
            total += count(rest, neighbourhood(sinks, masks) & rest)
        return total

    histogram: Counter[int] = Counter()
    for sinks in independent_subsets(everything, masks):
        rest = everything & ~sinks
        ways = count(rest, neighbourhood(sinks, masks) & rest)
        if ways:
            histogram[bin(sinks).count("1")] += ways
    _LOGGER.debug("sink histogram of %d-vertex graph: %s", size, dict(histogram))
    return dict(sorted(histogram.items()))


def sinks_by_length(expr: EBasisExpr) -> dict[int, int]:
    """Sum of c_lambda grouped by the length of lambda, dropping zero totals."""
    totals: Counter[int] = Counter()
    for lam, c in expr.items():
        totals[len(lam)] += c
    return {j: c for j, c in sorted(totals.items()) if c}


def positivity_report(expr: EBasisExpr) -> PositivityReport:
    return PositivityReport([(lam, c) for lam, c in expr.items() if c < 0])


def parse_graph(text: str) -> nx.Graph:
    """Vertex count on the first line, then one "i j" pair per edge, 1-based."""
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty graph description")
    size = int(lines[0])
    graph = nx.Graph()
    graph.add_nodes_from(range(1, size + 1))
    for line in lines[1:]:
        a, b = (int(x) for x in line.split())
        if a == b:
            raise ValueError(f"loop at vertex {a}")
        if not (1 <= a <= size and 1 <= b <= size):
            raise ValueError(f"edge {a} {b} outside 1..{size}")
        graph.add_edge(a, b)
    return graph


def format_graph(graph: nx.Graph) -> str:
    vertices = vertex_order(graph)
    index = {v: i + 1 for i, v in enumerate(vertices)}
    lines = [str(len(vertices))]
    for a, b in sorted(tuple(sorted((index[x], index[y]))) for x, y in graph.edges):
        lines.append(f"{a} {b}")
    return "\n".join(lines) + "\n"


def complete_graph(size: int) -> nx.Graph:
    return nx.complete_graph(range(1, size + 1))


def path_graph(size: int) -> nx.Graph:
    return nx.path_graph(range(1, size + 1))


def empty_graph(size: int) -> nx.Graph:
    return nx.empty_graph(range(1, size + 1))