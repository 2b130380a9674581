import random

import networkx as nx
import pytest

from pyescher.chromo import (
    AlphaMap,
    acyclic_orientations,
    chromatic_sym,
    chromatic_sym_edges,
    clique_expand,
    complete_graph,
    e_coefficients,
    empty_graph,
    format_graph,
    parse_graph,
    path_graph,
    positivity_report,
    s_coefficients,
    sink_histogram,
    sinks_by_length,
    stable_partition_types,
)
from pyescher.symcore import EBasisExpr, MultiPoly, Partition, e_poly, p_lambda_poly
from pyescher.uio import UIO, generate_all


def P(*parts):
    return Partition(parts)


def test_chromatic_sym_small_graphs():
    assert chromatic_sym(complete_graph(3), 3) == e_poly(3, 3) * 6
    x1, x2 = MultiPoly.variable(2, 1), MultiPoly.variable(2, 2)
    assert chromatic_sym(empty_graph(2), 2) == (x1 + x2) ** 2
    with pytest.raises(ValueError, match="insufficient colors"):
        chromatic_sym(complete_graph(3), 2)


def test_stable_partition_types_of_path():
    assert stable_partition_types(path_graph(3)) == {P(2, 1): 1, P(1, 1, 1): 1}


def test_chromatic_sym_edges():
    assert chromatic_sym_edges(complete_graph(2), 2) == e_poly(2, 2) * 2
    expected = (
        p_lambda_poly(P(1, 1, 1), 3)
        - p_lambda_poly(P(2, 1), 3) * 2
        + p_lambda_poly(P(3), 3)
    )
    assert chromatic_sym_edges(path_graph(3), 3) == expected
    assert chromatic_sym_edges(empty_graph(3), 3) == p_lambda_poly(P(1, 1, 1), 3)


@pytest.mark.parametrize("size", [1, 2, 3, 4, 5])
def test_two_algorithms_agree_on_uio_graphs(size):
    for uio in generate_all(size):
        graph = uio.incomparability_graph()
        assert chromatic_sym(graph, size) == chromatic_sym_edges(graph, size)


@pytest.mark.parametrize("seed", range(8))
def test_two_algorithms_agree_on_random_graphs(seed):
    rng = random.Random(seed)
    size = rng.randint(2, 6)
    edges = rng.randint(0, min(9, size * (size - 1) // 2))
    graph = nx.gnm_random_graph(size, edges, seed=seed)
    graph = nx.convert_node_labels_to_integers(graph, first_label=1)
    assert chromatic_sym(graph, size) == chromatic_sym_edges(graph, size)


@pytest.mark.parametrize(
    "graph, expected",
    [
        (complete_graph(4), {P(4): 24}),
        (empty_graph(3), {P(1, 1, 1): 1}),
        (path_graph(3), {P(2, 1): 1, P(3): 3}),
        (UIO([2, 3, 3]).incomparability_graph(), {P(2, 1): 1, P(3): 3}),
    ],
)
def test_e_coefficients(graph, expected):
    assert e_coefficients(graph) == EBasisExpr(expected)


def test_claw_is_not_e_positive():
    claw = nx.star_graph([1, 2, 3, 4])
    report = positivity_report(e_coefficients(claw))
    assert not report.is_e_positive
    assert report.as_dictionary()["negativeTerms"] == {"2,2": -2}


def test_s_coefficients():
    assert s_coefficients(complete_graph(3)) == {P(1, 1, 1): 6}
    assert s_coefficients(path_graph(3)) == {P(2, 1): 1, P(1, 1, 1): 4}


def test_clique_expand():
    assert sorted(clique_expand(path_graph(3), AlphaMap.ones(3)).edges) == [(1, 2), (2, 3)]
    single = nx.Graph()
    single.add_node(1)
    assert clique_expand(single, AlphaMap((3,))).number_of_edges() == 3
    triangle = clique_expand(complete_graph(2), AlphaMap((2, 1)))
    assert triangle.number_of_nodes() == 3
    assert triangle.number_of_edges() == 3
    with pytest.raises(ValueError):
        clique_expand(path_graph(3), AlphaMap((1, 1)))
    with pytest.raises(ValueError):
        AlphaMap((0, 1))


@pytest.mark.parametrize(
    "graph, expected",
    [
        (complete_graph(3), {1: 6}),
        (empty_graph(2), {2: 1}),
        (path_graph(3), {1: 3, 2: 1}),
    ],
)
def test_sink_histogram(graph, expected):
    assert sink_histogram(graph) == expected
    assert sinks_by_length(e_coefficients(graph)) == expected


def test_acyclic_orientations_match_histogram():
    graph = nx.cycle_graph([1, 2, 3, 4])
    orientations = list(acyclic_orientations(graph))
    # 2^4 orientations minus the two directed cycles
    assert len(orientations) == 14
    assert len(set(orientations)) == 14
    counts = {}
    for arcs in orientations:
        assert len(arcs) == 4
        tails = {a for a, _ in arcs}
        sinks = sum(1 for v in graph.nodes if v not in tails)
        counts[sinks] = counts.get(sinks, 0) + 1
    assert counts == sink_histogram(graph)


@pytest.mark.parametrize("size", [1, 2, 3, 4, 5])
def test_sink_histogram_matches_coefficients_on_uio_graphs(size):
    for uio in generate_all(size):
        graph = uio.incomparability_graph()
        assert sink_histogram(graph) == sinks_by_length(e_coefficients(graph))


def test_positivity_report():
    assert positivity_report(EBasisExpr({P(3): 6})).is_e_positive
    report = positivity_report(EBasisExpr({P(2, 1): -1, P(3): 3}))
    assert not report.is_e_positive
    assert report.negative_terms == [(P(2, 1), -1)]


def test_graph_text_form():
    text = "3\n1 2\n2 3\n"
    graph = parse_graph(text)
    assert sorted(graph.nodes) == [1, 2, 3]
    assert format_graph(graph) == text
    assert format_graph(parse_graph("2\n")) == "2\n"
    with pytest.raises(ValueError):
        parse_graph("2\n1 1\n")
    with pytest.raises(ValueError):
        parse_graph("2\n1 3\n")
    with pytest.raises(ValueError):
        parse_graph("")
