"""The homomorphism rho_G from symmetric functions to vertex-variable polynomials.

rho_G sends e_i to e_i^G, the sum over independent i-sets of G of the product
of their vertex variables. Everything else (p, m, s) is routed through its
e-basis expansion first.
"""

import itertools
import logging
from functools import lru_cache
from typing import Iterator, Optional

import networkx as nx
from typing_extensions import Self

from pyescher.chromo import (
    AlphaMap,
    adjacency_masks,
    chromatic_sym,
    clique_expand,
    e_coefficients,
    independent_subsets,
)
from pyescher.symcore import (
    EBasisExpr,
    MultiPoly,
    Partition,
    e_lambda_poly,
    expand_in_e,
    m_poly,
    p_poly,
    partitions_of,
    s_poly,
)
from pyescher.uio import UIO

_LOGGER = logging.getLogger(__name__)

MAX_GRAPH_VERTICES = 16
MAX_GNECHROM_WEIGHT = 7


class GPoly(MultiPoly):
    """Polynomial in vertex variables v_1..v_N, optionally truncated at a cap.

    With a cap every stored monomial has exponent(v) <= cap(v); products drop
    anything that overshoots, which never changes a coefficient inside the cap.
    """

    __slots__ = ("cap",)

    def __init__(
        self,
        num_vars: int,
        terms: Optional[dict[tuple[int, ...], int]] = None,
        cap: Optional[tuple[int, ...]] = None,
    ):
        super().__init__(num_vars, terms)
        self.cap = _check_cap(cap, num_vars)
        if self.cap is not None:
            self.element = self.truncated(self.cap).element

    @classmethod
    def lift(cls, poly: MultiPoly, cap: Optional[tuple[int, ...]] = None) -> Self:
        cap = _check_cap(cap, poly.num_vars)
        lifted = cls.wrap(poly.num_vars, poly.element if cap is None else poly.truncated(cap).element)
        lifted.cap = cap
        return lifted

    def __add__(self, other):
        return GPoly.lift(MultiPoly.__add__(self, other), self.cap)

    __radd__ = __add__

    def __neg__(self):
        return GPoly.lift(MultiPoly.__neg__(self), self.cap)

    def __sub__(self, other):
        return GPoly.lift(MultiPoly.__sub__(self, other), self.cap)

    def __mul__(self, other):
        if isinstance(other, int):
            return GPoly.lift(MultiPoly.__mul__(self, other), self.cap)
        return GPoly.lift(self.mul_truncated(other, self.cap), self.cap)

    __rmul__ = __mul__


def _check_cap(cap: Optional[tuple[int, ...]], num_vars: int) -> Optional[tuple[int, ...]]:
    if cap is None:
        return None
    cap = tuple(cap)
    if len(cap) != num_vars:
        raise ValueError(f"cap has {len(cap)} entries for {num_vars} variables")
    return cap


def _vertex_count(graph: nx.Graph) -> int:
    size = graph.number_of_nodes()
    if not 1 <= size <= MAX_GRAPH_VERTICES:
        raise ValueError(f"graph must have 1..{MAX_GRAPH_VERTICES} vertices, got {size}")
    return size


def e_G_table(
    graph: nx.Graph, cap: Optional[tuple[int, ...]] = None
) -> dict[int, GPoly]:
    """e_i^G for every i from 0 to the independence number, from one pass over independent sets."""
    size = _vertex_count(graph)
    _, masks = adjacency_masks(graph)
    terms: dict[int, dict[tuple[int, ...], int]] = {0: {(0,) * size: 1}}
    for subset in independent_subsets((1 << size) - 1, masks):
        mono = tuple(subset >> v & 1 for v in range(size))
        terms.setdefault(sum(mono), {})[mono] = 1
    return {i: GPoly(size, t, cap) for i, t in terms.items()}


def e_G(graph: nx.Graph, i: int, cap: Optional[tuple[int, ...]] = None) -> GPoly:
    size = _vertex_count(graph)
    if i < 0:
        return GPoly(size, cap=cap)
    return e_G_table(graph, cap).get(i, GPoly(size, cap=cap))


def apply_rho(
    graph: nx.Graph, expr: EBasisExpr, cap: Optional[tuple[int, ...]] = None
) -> GPoly:
    """sum c_lambda prod_i e^G_(lambda_i), truncated at cap when one is given."""
    size = _vertex_count(graph)
    table = e_G_table(graph, cap)
    zero = GPoly(size, cap=cap)
    result = zero
    for lam, c in expr.items():
        term = GPoly(size, {(0,) * size: c}, cap)
        for part in lam:
            term = term * table.get(part, zero)
            if term.is_zero():
                break
        result = result + term
    return result


@lru_cache(maxsize=None)
def _p_in_e(m: int) -> EBasisExpr:
    return expand_in_e(p_poly(m, m))


@lru_cache(maxsize=None)
def _m_in_e(lam: Partition) -> EBasisExpr:
    return expand_in_e(m_poly(lam, lam.weight))


@lru_cache(maxsize=None)
def _s_in_e(lam: Partition) -> EBasisExpr:
    return expand_in_e(s_poly(lam, lam.weight))


def p_G(graph: nx.Graph, m: int, cap: Optional[tuple[int, ...]] = None) -> GPoly:
    if m < 1:
        raise ValueError("power sums are indexed by positive integers")
    return apply_rho(graph, _p_in_e(m), cap)


def m_G(graph: nx.Graph, lam: Partition, cap: Optional[tuple[int, ...]] = None) -> GPoly:
    return apply_rho(graph, _m_in_e(Partition(lam)), cap)


def s_G(graph: nx.Graph, lam: Partition, cap: Optional[tuple[int, ...]] = None) -> GPoly:
    return apply_rho(graph, _s_in_e(Partition(lam)), cap)


def squarefree_coeff(f: MultiPoly) -> int:
    """Coefficient of v_1 v_2 ... v_N."""
    return f.coefficient((1,) * f.num_vars)


def coeff_alpha(f: MultiPoly, alpha: AlphaMap) -> int:
    if len(alpha) != f.num_vars:
        raise ValueError(f"multiplicity map has {len(alpha)} entries for {f.num_vars} variables")
    return f.coefficient(tuple(alpha))


def m_coeff_U(uio: UIO, lam: Partition) -> int:
    """Squarefree coefficient of m_lambda^G for G the incomparability graph of uio."""
    lam = Partition(lam)
    if lam.weight != uio.size:
        raise ValueError(
            f"partition {lam} has weight {lam.weight}, UIO has {uio.size} elements"
        )
    graph = uio.incomparability_graph()
    return squarefree_coeff(m_G(graph, lam, cap=(1,) * uio.size))


def alpha_coefficients(graph: nx.Graph, alpha: AlphaMap) -> EBasisExpr:
    """[v^alpha] m^G_lambda for every lambda of weight sum(alpha)."""
    alpha = AlphaMap(alpha)
    return EBasisExpr(
        {
            lam: coeff_alpha(m_G(graph, lam, cap=tuple(alpha)), alpha)
            for lam in partitions_of(alpha.total)
        }
    )


def gnechrom_sides(graph: nx.Graph, alpha: AlphaMap) -> tuple[MultiPoly, MultiPoly]:
    """[v^alpha] of the degree-n part of sum m_lambda(x) e^G_lambda(v), times prod alpha(v)!, and X of the clique expansion."""
    alpha = AlphaMap(alpha)
    n = alpha.total
    if n > MAX_GNECHROM_WEIGHT:
        raise ValueError(f"clique expansion weight limited to {MAX_GNECHROM_WEIGHT}, got {n}")
    size = _vertex_count(graph)
    if len(alpha) != size:
        raise ValueError(f"multiplicity map has {len(alpha)} entries for {size} vertices")
    cap = tuple(alpha)
    table = e_G_table(graph, cap)
    left = MultiPoly.zero(n)
    for lam in partitions_of(n):
        product = GPoly(size, {(0,) * size: 1}, cap)
        for part in lam:
            product = product * table.get(part, GPoly(size, cap=cap))
        c = coeff_alpha(product, alpha)
        if c:
            left = left + m_poly(lam, n) * c
    left = left * alpha.factorial_product()
    right = chromatic_sym(clique_expand(graph, alpha), n)
    return left, right


def verify_gnechrom(graph: nx.Graph, alpha: AlphaMap) -> bool:
    left, right = gnechrom_sides(graph, alpha)
    if left != right:
        _LOGGER.warning("clique expansion identity fails for alpha=%s", alpha)
    return left == right


def gcauchy_sides(graph: nx.Graph, n: int) -> tuple[dict[Partition, GPoly], dict[Partition, GPoly]]:
    """Coefficient of m_mu(x) in sum m_lambda(x) e^G_lambda(v) and in sum e_lambda(x) m^G_lambda(v).

    The m_mu with mu of weight n are independent in n variables, so the two
    degree-n sums agree iff the two returned maps agree.
    """
    size = _vertex_count(graph)
    table = e_G_table(graph)
    zero = GPoly(size)
    left: dict[Partition, GPoly] = {}
    for mu in partitions_of(n):
        product = GPoly(size, {(0,) * size: 1})
        for part in mu:
            product = product * table.get(part, zero)
        left[mu] = product
    m_images = {lam: m_G(graph, lam) for lam in partitions_of(n)}
    right: dict[Partition, GPoly] = {}
    for mu in partitions_of(n):
        total = zero
        for lam, image in m_images.items():
            c = e_lambda_poly(lam, n).coefficient(mu.padded(n))
            if c:
                total = total + image * c
        right[mu] = total
    return left, right


def alphas_up_to(size: int, max_weight: int) -> Iterator[AlphaMap]:
    """Every multiplicity map on size vertices with total at most max_weight."""
    for alpha in itertools.product(range(1, max_weight + 1), repeat=size):
        if sum(alpha) <= max_weight:
            yield AlphaMap(alpha)


def poscrit_violations(
    graph: nx.Graph, max_weight: int
) -> list[tuple[AlphaMap, Partition, int]]:
    """Negative [v^alpha] m^G_lambda over all alpha with total at most max_weight."""
    violations = []
    for alpha in alphas_up_to(graph.number_of_nodes(), max_weight):
        for lam, c in alpha_coefficients(graph, alpha).items():
            if c < 0:
                violations.append((alpha, lam, c))
    return violations


def alpha_bridge_mismatches(
    graph: nx.Graph, alpha: AlphaMap
) -> list[tuple[Partition, int, int]]:
    """Partitions where prod alpha(v)! [v^alpha] m^G_lambda differs from c_lambda of X of the clique expansion.

    Returns (lambda, scaled coefficient, c_lambda) triples.
    """
    alpha = AlphaMap(alpha)
    scale = alpha.factorial_product()
    ours = alpha_coefficients(graph, alpha)
    theirs = e_coefficients(clique_expand(graph, alpha))
    return [
        (lam, scale * ours[lam], theirs[lam])
        for lam in partitions_of(alpha.total)
        if scale * ours[lam] != theirs[lam]
    ]
