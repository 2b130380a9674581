import random

import networkx as nx
import pytest

from pyescher import ghom
from pyescher.chromo import AlphaMap, complete_graph, e_coefficients, path_graph
from pyescher.symcore import EBasisExpr, MultiPoly, Partition, partitions_of
from pyescher.uio import UIO, generate_all


def P(*parts):
    return Partition(parts)


def v(i, num_vars):
    return MultiPoly.variable(num_vars, i)


def single_vertex():
    graph = nx.Graph()
    graph.add_node(1)
    return graph


def test_e_G():
    assert ghom.e_G(complete_graph(2), 2).is_zero()
    assert ghom.e_G(complete_graph(2), 1) == v(1, 2) + v(2, 2)
    assert ghom.e_G(path_graph(3), 2) == v(1, 3) * v(3, 3)
    assert ghom.e_G(path_graph(3), 0) == 1


def test_apply_rho():
    # p_2 = e_1^2 - 2 e_2 and e_2 vanishes on a clique
    p2 = EBasisExpr({P(1, 1): 1, P(2): -2})
    assert ghom.apply_rho(complete_graph(2), p2) == (v(1, 2) + v(2, 2)) ** 2
    assert ghom.apply_rho(path_graph(3), EBasisExpr({P(1): 1})) == v(1, 3) + v(2, 3) + v(3, 3)
    assert ghom.apply_rho(complete_graph(3), EBasisExpr({P(3): 1})).is_zero()


def random_expr(rng, max_degree=3):
    lams = [lam for d in range(1, max_degree + 1) for lam in partitions_of(d)]
    return EBasisExpr({lam: rng.randint(-3, 3) for lam in rng.sample(lams, 3)})


@pytest.mark.parametrize("seed", range(8))
def test_apply_rho_is_a_ring_homomorphism(seed):
    rng = random.Random(seed)
    graph = rng.choice(list(generate_all(4))).incomparability_graph()
    a, b = random_expr(rng), random_expr(rng)
    assert ghom.apply_rho(graph, a + b) == ghom.apply_rho(graph, a) + ghom.apply_rho(graph, b)
    assert ghom.apply_rho(graph, a * b) == ghom.apply_rho(graph, a) * ghom.apply_rho(graph, b)
    assert ghom.apply_rho(graph, EBasisExpr({P(): 1})) == 1
    cap = (2, 1, 1, 2)
    capped = ghom.apply_rho(graph, a, cap) * ghom.apply_rho(graph, b, cap)
    assert ghom.apply_rho(graph, a * b, cap) == capped


def test_cap_truncates_products():
    capped = ghom.apply_rho(complete_graph(2), EBasisExpr({P(1, 1): 1}), cap=(1, 1))
    assert capped == v(1, 2) * v(2, 2) * 2


def test_squarefree_and_alpha_coefficients():
    a = v(1, 2) + v(2, 2)
    assert ghom.squarefree_coeff(a ** 2) == 2
    assert ghom.squarefree_coeff(v(1, 2) ** 2 + v(2, 2) ** 2) == 0
    assert ghom.coeff_alpha(a ** 3, AlphaMap((2, 1))) == 3
    assert ghom.coeff_alpha(a ** 2, AlphaMap.ones(2)) == ghom.squarefree_coeff(a ** 2)
    with pytest.raises(ValueError):
        ghom.coeff_alpha(a, AlphaMap((1,)))


def test_p_G_counts_eschers():
    graph = UIO([2, 3, 3]).incomparability_graph()
    assert ghom.squarefree_coeff(ghom.p_G(graph, 3)) == 3


@pytest.mark.parametrize(
    "h, lam, expected",
    [
        ([1, 2, 3], P(3), 0),
        ([3, 3, 3], P(3), 6),
        ([2, 3, 3], P(2, 1), 1),
        ([3, 3, 3], P(2, 1), 0),
        ([1, 3, 3], P(2, 1), 2),
    ],
)
def test_m_coeff_U(h, lam, expected):
    assert ghom.m_coeff_U(UIO(h), lam) == expected


def test_m_coeff_U_rejects_weight_mismatch():
    with pytest.raises(ValueError):
        ghom.m_coeff_U(UIO([2, 3, 3]), P(2, 2))


@pytest.mark.parametrize("size", [1, 2, 3, 4])
def test_m_coeff_U_is_the_e_coefficient(size):
    for uio in generate_all(size):
        coefficients = e_coefficients(uio.incomparability_graph())
        for lam in partitions_of(size):
            assert ghom.m_coeff_U(uio, lam) == coefficients[lam]


def test_s_G_of_single_column_is_e_G():
    graph = path_graph(3)
    assert ghom.s_G(graph, P(1, 1)) == ghom.e_G(graph, 2)


@pytest.mark.parametrize(
    "graph, alpha",
    [
        (single_vertex(), AlphaMap((2,))),
        (path_graph(3), AlphaMap.ones(3)),
        (UIO([2, 2]).incomparability_graph(), AlphaMap((2, 1))),
        (path_graph(3), AlphaMap((1, 2, 1))),
    ],
)
def test_clique_expansion_identity(graph, alpha):
    left, right = ghom.gnechrom_sides(graph, alpha)
    assert left == right
    assert ghom.verify_gnechrom(graph, alpha)


def test_alpha_bridge_uses_factorials():
    graph = single_vertex()
    alpha = AlphaMap((2,))
    assert ghom.alpha_coefficients(graph, alpha) == EBasisExpr({P(2): 1})
    assert ghom.alpha_bridge_mismatches(graph, alpha) == []


@pytest.mark.parametrize("h", [[1, 2], [2, 2], [2, 3, 3], [3, 3, 3]])
def test_alpha_bridge_on_small_uios(h):
    graph = UIO(h).incomparability_graph()
    for alpha in ghom.alphas_up_to(len(h), 5):
        assert ghom.alpha_bridge_mismatches(graph, alpha) == []


def test_poscrit_on_uio_and_claw():
    assert ghom.poscrit_violations(UIO([2, 3, 3]).incomparability_graph(), 5) == []
    claw = nx.star_graph([1, 2, 3, 4])
    violations = ghom.poscrit_violations(claw, 4)
    assert (AlphaMap.ones(4), P(2, 2), -2) in violations


@pytest.mark.slow
@pytest.mark.parametrize("size", [1, 2, 3, 4, 5])
def test_poscrit_holds_on_every_small_uio(size):
    for uio in generate_all(size):
        assert ghom.poscrit_violations(uio.incomparability_graph(), 6) == []


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_cauchy_sides_agree(n):
    left, right = ghom.gcauchy_sides(UIO([2, 3, 3]).incomparability_graph(), n)
    assert left.keys() == right.keys()
    for mu in left:
        assert left[mu] == right[mu]


def test_alphas_up_to():
    alphas = list(ghom.alphas_up_to(2, 3))
    assert alphas == [AlphaMap((1, 1)), AlphaMap((1, 2)), AlphaMap((2, 1))]


def test_gnechrom_weight_limit():
    with pytest.raises(ValueError):
        ghom.gnechrom_sides(single_vertex(), AlphaMap((ghom.MAX_GNECHROM_WEIGHT + 1,)))
