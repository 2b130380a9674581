import random

import pytest
from sympy.polys.rings import PolyElement

from pyescher.errors import InvariantViolation
from pyescher.symcore import (
    EBasisExpr,
    MultiPoly,
    Partition,
    determinant,
    e_lambda_poly,
    e_poly,
    expand_in_e,
    expand_in_s,
    m_poly,
    mnk_powersum_form,
    newton_p_in_e,
    p_poly,
    partitions_of,
    poly_ring,
    s_poly,
)


def P(*parts):
    return Partition(parts)


def x(i, num_vars):
    return MultiPoly.variable(num_vars, i)


def random_poly(rng, num_vars=3, size=4):
    return MultiPoly(
        num_vars,
        {
            tuple(rng.randint(0, 2) for _ in range(num_vars)): rng.randint(-5, 5)
            for _ in range(size)
        },
    )


def test_partitions_of_order_and_counts():
    assert partitions_of(0) == [P()]
    assert partitions_of(4) == [P(4), P(3, 1), P(2, 2), P(2, 1, 1), P(1, 1, 1, 1)]
    assert len(partitions_of(7)) == 15


def test_partition_validation_and_text_form():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))
    assert Partition.from_string("1,2") == P(2, 1)
    assert Partition.from_string("") == P()
    assert str(P(3, 2, 1)) == "3,2,1"


def test_partition_conjugate_and_dominance():
    assert P(3).conjugate() == P(1, 1, 1)
    assert P(2, 1).conjugate() == P(2, 1)
    assert P(4, 2, 1).conjugate() == P(3, 2, 1, 1)
    assert P(3).dominates(P(2, 1))
    assert not P(2, 1).dominates(P(3))
    assert not P(3, 1).dominates(P(2))


def test_padded_needs_enough_variables():
    assert P(2, 1).padded(4) == (2, 1, 0, 0)
    with pytest.raises(ValueError, match="too few variables"):
        P(1, 1, 1).padded(2)


def test_e_poly_small_cases():
    assert e_poly(2, 3) == x(1, 3) * x(2, 3) + x(1, 3) * x(3, 3) + x(2, 3) * x(3, 3)
    assert e_poly(0, 5) == 1
    assert e_poly(4, 3).is_zero()


def test_p_poly_and_m_poly():
    assert p_poly(1, 3) == e_poly(1, 3)
    assert p_poly(2, 2) == x(1, 2) ** 2 + x(2, 2) ** 2
    assert m_poly(P(3), 4) == p_poly(3, 4)
    assert m_poly(P(1, 1), 2) == e_poly(2, 2)
    m21 = m_poly(P(2, 1), 3)
    assert len(m21.terms) == 6
    assert m21.coefficient((2, 1, 0)) == 1
    assert m21.coefficient((1, 1, 1)) == 0


@pytest.mark.parametrize("lam", [lam for d in range(1, 7) for lam in partitions_of(d)], ids=str)
def test_schur_polynomials_are_monomial_positive(lam):
    s = s_poly(lam, 6)
    assert s.is_symmetric()
    assert s.coefficient(lam.padded(6)) == 1
    assert all(c >= 0 for c in s.terms.values())


def test_s_poly_small_cases():
    assert s_poly(P(1, 1, 1), 4) == e_poly(3, 4)
    assert s_poly(P(2, 1), 3) == e_poly(1, 3) * e_poly(2, 3) - e_poly(3, 3)
    assert s_poly(P(2), 2) == x(1, 2) ** 2 + x(1, 2) * x(2, 2) + x(2, 2) ** 2


def test_multipoly_arithmetic():
    a = x(1, 2) + x(2, 2)
    assert (a * a - a ** 2).is_zero()
    assert (a ** 2).coefficient((1, 1)) == 2
    assert a - a == 0
    assert 3 * a == a + a + a
    assert (a ** 2).homogeneous_degree() == 2
    with pytest.raises(ValueError):
        (a + 1).homogeneous_degree()
    with pytest.raises(ValueError):
        a + MultiPoly.variable(3, 1)


@pytest.mark.parametrize("seed", range(10))
def test_multipoly_ring_laws(seed):
    rng = random.Random(seed)
    a, b, c = (random_poly(rng) for _ in range(3))
    zero, one = MultiPoly.zero(3), MultiPoly.one(3)
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + zero == a
    assert a * one == a
    assert (a * zero).is_zero()
    assert (a - b) + b == a
    assert -(-a) == a
    assert a ** 2 == a * a
    assert (a * 6).exact_div(3) == a * 2
    assert a.mul_truncated(b, (2, 1, 2)) == (a * b).truncated((2, 1, 2))


@pytest.mark.parametrize(
    "coeffs",
    [{(1,): 0.5}, {(1,): "2"}, {(1,): 2.0}],
)
def test_multipoly_rejects_non_integer_coefficients(coeffs):
    with pytest.raises(TypeError):
        MultiPoly(1, coeffs)


def test_multipoly_rejects_non_integer_scalars():
    with pytest.raises(TypeError):
        MultiPoly.constant(2, 1.5)
    with pytest.raises(TypeError):
        EBasisExpr({P(1): 0.5})


def test_multipoly_is_backed_by_a_sympy_ring():
    a = x(1, 2)
    assert isinstance(a.element, PolyElement)
    assert a.element.ring is poly_ring(2)
    assert (a * 2).terms == {(1, 0): 2}
    with pytest.raises(ValueError):
        poly_ring(0)


def test_determinant():
    x1, x2 = x(1, 2), x(2, 2)
    assert determinant([[x1, x2], [x2, x1]], 2) == x1 ** 2 - x2 ** 2
    assert determinant([], 2) == 1
    singular = [[x1, x2], [x1 * 2, x2 * 2]]
    assert determinant(singular, 2).is_zero()


def test_symmetry_check():
    assert e_poly(2, 4).is_symmetric()
    assert not x(1, 2).is_symmetric()


def test_mul_truncated_keeps_capped_monomials():
    a = x(1, 2) + x(2, 2)
    product = a.mul_truncated(a, (1, 1))
    assert product == x(1, 2) * x(2, 2) * 2


def test_exact_div():
    a = (x(1, 2) + x(2, 2)) ** 2
    assert (a * 2).exact_div(2) == a
    with pytest.raises(InvariantViolation):
        a.exact_div(2)


@pytest.mark.parametrize(
    "f, expected",
    [
        (p_poly(2, 2), {P(1, 1): 1, P(2): -2}),
        (p_poly(3, 3), {P(3): 3, P(2, 1): -3, P(1, 1, 1): 1}),
        (e_poly(3, 4), {P(3): 1}),
        (m_poly(P(2, 1), 3), {P(2, 1): 1, P(3): -3}),
    ],
)
def test_expand_in_e(f, expected):
    assert expand_in_e(f) == EBasisExpr(expected)


def test_expand_in_e_reconstructs():
    f = m_poly(P(3, 1), 4) + s_poly(P(2, 2), 4) * 3
    assert expand_in_e(f).to_poly(4) == f


@pytest.mark.parametrize("seed", range(8))
def test_expand_in_e_inverts_to_poly(seed):
    rng = random.Random(seed)
    degree = rng.randint(1, 6)
    lams = partitions_of(degree)
    expr = EBasisExpr(
        {lam: rng.randint(-4, 4) for lam in rng.sample(lams, min(3, len(lams)))}
    )
    assert expand_in_e(expr.to_poly(6)) == expr


def test_expand_in_e_rejects_bad_input():
    with pytest.raises(ValueError):
        expand_in_e(x(1, 2))
    with pytest.raises(ValueError):
        expand_in_e(p_poly(3, 2))
    assert expand_in_e(MultiPoly.zero(3)).is_zero()


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6, 7])
def test_newton_matches_expansion(m):
    assert newton_p_in_e(m) == expand_in_e(p_poly(m, m))


def test_expand_in_s():
    assert expand_in_s(e_poly(2, 3)) == {P(1, 1): 1}
    assert expand_in_s(s_poly(P(2, 1), 3) * 2 + s_poly(P(3), 3)) == {P(3): 1, P(2, 1): 2}


@pytest.mark.parametrize("n, k, num_vars", [(2, 1, 3), (1, 1, 2), (3, 2, 5), (2, 2, 4)])
def test_mnk_powersum_form(n, k, num_vars):
    assert mnk_powersum_form(n, k, num_vars) == m_poly(P(n, k), num_vars)


def test_ebasis_expr_algebra():
    a = EBasisExpr({P(2): 1, P(1, 1): 0})
    assert a.coeffs == {P(2): 1}
    assert a[P(1, 1)] == 0
    b = a * EBasisExpr({P(1): 2})
    assert b == EBasisExpr({P(2, 1): 2})
    assert (b - b).is_zero()
    assert b.to_poly(3) == e_lambda_poly(P(2, 1), 3) * 2
    assert EBasisExpr.from_json_dictionary(b.as_dictionary()) == b
