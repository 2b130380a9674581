"""Exact symmetric-function kernel in finitely many variables.

Partitions, integer polynomials over sympy's sparse ZZ[x1, ..., xN] rings, the
e/p/m/s bases and the expansion of a symmetric polynomial into the elementary
basis. Coefficients are exact integers, so arithmetic never wraps around.
"""

import itertools
from functools import lru_cache
from numbers import Integral
from typing import Any, Iterable, Iterator, Optional, Union

from more_itertools import distinct_permutations
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement, PolyRing, ring
from typing_extensions import Self

from pyescher.errors import InvariantViolation


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p < 1 for p in parts) or any(
            a < b for a, b in zip(parts, parts[1:])
        ):
            raise ValueError(f"not a partition: {parts}")
        return super().__new__(cls, parts)

    @classmethod
    def from_string(cls, text: str) -> Self:
        """Parse the comma-separated form, e.g. "3,2,1". An empty string is the empty partition."""
        text = text.strip()
        if not text:
            return cls(())
        return cls(sorted((int(p) for p in text.split(",")), reverse=True))

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def conjugate(self) -> "Partition":
        if not self:
            return Partition(())
        return Partition(
            sum(1 for p in self if p > i) for i in range(self[0])
        )

    def dominates(self, other: "Partition") -> bool:
        """True if every partial sum of self is at least the matching partial sum of other."""
        if self.weight != other.weight:
            return False
        a = b = 0
        for i in range(max(len(self), len(other))):
            a += self[i] if i < len(self) else 0
            b += other[i] if i < len(other) else 0
            if a < b:
                return False
        return True

    def padded(self, num_vars: int) -> tuple[int, ...]:
        if len(self) > num_vars:
            raise ValueError("too few variables")
        return tuple(self) + (0,) * (num_vars - len(self))

    def __str__(self) -> str:
        return ",".join(str(p) for p in self)

    def __repr__(self) -> str:
        return f"Partition({str(self)})"


def partitions_of(n: int, max_part: Optional[int] = None) -> list[Partition]:
    """All partitions of n in reverse-lexicographic order."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return [Partition(p) for p in _partition_tuples(n, n if max_part is None else max_part)]


def _partition_tuples(n: int, max_part: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partition_tuples(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def poly_ring(num_vars: int) -> PolyRing:
    """ZZ[x1, ..., x_num_vars], shared by every polynomial in that many variables."""
    if num_vars < 1:
        raise ValueError("a polynomial needs at least one variable")
    return ring(",".join(f"x{i}" for i in range(1, num_vars + 1)), ZZ)[0]


def _check_coefficient(coeff: Any) -> int:
    if not isinstance(coeff, Integral):
        raise TypeError(f"coefficients must be integers, got {coeff!r}")
    return int(coeff)


class MultiPoly(object):
    """Integer polynomial in a fixed number of variables, backed by a sympy ring element.

    Monomials are dense exponent tuples. Instances are treated as immutable;
    every operation returns a new polynomial.
    """

    __slots__ = ("num_vars", "element")

    def __init__(
        self, num_vars: int, terms: Optional[dict[tuple[int, ...], int]] = None
    ):
        R = poly_ring(num_vars)
        clean: dict[tuple[int, ...], int] = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != num_vars or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent vector {mono} for {num_vars} variables")
            clean[mono] = _check_coefficient(coeff)
        self.num_vars = num_vars
        self.element: PolyElement = R.from_dict(clean)

    @classmethod
    def wrap(cls, num_vars: int, element: PolyElement) -> Self:
        poly = cls.__new__(cls)
        poly.num_vars = num_vars
        poly.element = element
        return poly

    @classmethod
    def _raw(cls, num_vars: int, terms: dict[tuple[int, ...], int]) -> Self:
        # terms must already have the right length
        return cls.wrap(num_vars, poly_ring(num_vars).from_dict(terms))

    @classmethod
    def constant(cls, num_vars: int, value: int) -> Self:
        return cls.wrap(num_vars, poly_ring(num_vars).ground_new(_check_coefficient(value)))

    @classmethod
    def zero(cls, num_vars: int) -> Self:
        return cls.wrap(num_vars, poly_ring(num_vars).zero)

    @classmethod
    def one(cls, num_vars: int) -> Self:
        return cls.wrap(num_vars, poly_ring(num_vars).one)

    @classmethod
    def variable(cls, num_vars: int, index: int) -> Self:
        """The variable x_index, 1-based."""
        if not 1 <= index <= num_vars:
            raise ValueError(f"variable index {index} out of range 1..{num_vars}")
        return cls.wrap(num_vars, poly_ring(num_vars).gens[index - 1])

    @property
    def terms(self) -> dict[tuple[int, ...], int]:
        return {mono: int(coeff) for mono, coeff in self.element.items()}

    def _coerce(self, other: Union["MultiPoly", int]) -> Union[PolyElement, Any]:
        if isinstance(other, MultiPoly):
            if other.num_vars != self.num_vars:
                raise ValueError(
                    f"variable count mismatch: {self.num_vars} vs {other.num_vars}"
                )
            return other.element
        if isinstance(other, Integral):
            return poly_ring(self.num_vars).ground_new(int(other))
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.element

    def coefficient(self, mono: Iterable[int]) -> int:
        return int(self.element.get(tuple(mono), 0))

    def degrees(self) -> set[int]:
        return {sum(mono) for mono in self.element.keys()}

    def homogeneous_degree(self) -> int:
        """Degree of a homogeneous polynomial; ValueError otherwise."""
        degrees = self.degrees()
        if len(degrees) != 1:
            raise ValueError("polynomial is not homogeneous")
        return degrees.pop()

    def permuted(self, perm: tuple[int, ...]) -> "MultiPoly":
        """Substitute x_i -> x_perm[i] (0-based positions)."""
        terms: dict[tuple[int, ...], int] = {}
        for mono, coeff in self.element.items():
            image = [0] * self.num_vars
            for i, e in enumerate(mono):
                image[perm[i]] = e
            terms[tuple(image)] = coeff
        return MultiPoly._raw(self.num_vars, terms)

    def is_symmetric(self) -> bool:
        # adjacent transpositions generate the symmetric group
        for i in range(self.num_vars - 1):
            perm = list(range(self.num_vars))
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
            if self.permuted(tuple(perm)) != self:
                return False
        return True

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly.wrap(self.num_vars, self.element + other)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly.wrap(self.num_vars, -self.element)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly.wrap(self.num_vars, self.element - other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Integral):
            return MultiPoly.wrap(self.num_vars, self.element * int(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly.wrap(self.num_vars, self.element * other)

    __rmul__ = __mul__

    def mul_truncated(
        self, other: "MultiPoly", cap: Optional[tuple[int, ...]]
    ) -> "MultiPoly":
        """Product keeping only monomials whose exponents stay within cap (all kept if cap is None)."""
        product = MultiPoly.__mul__(self, other)
        return product if cap is None else product.truncated(cap)

    def truncated(self, cap: tuple[int, ...]) -> "MultiPoly":
        return MultiPoly._raw(
            self.num_vars,
            {
                mono: c
                for mono, c in self.element.terms()
                if all(e <= b for e, b in zip(mono, cap))
            },
        )

    def __pow__(self, exponent: int) -> "MultiPoly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a non-negative integer")
        return MultiPoly.wrap(self.num_vars, self.element ** exponent)

    def exact_div(self, divisor: int) -> "MultiPoly":
        for mono, coeff in self.element.terms():
            if coeff % divisor:
                raise InvariantViolation(
                    "inexact division of polynomial coefficients",
                    {"monomial": list(mono), "coefficient": int(coeff), "divisor": divisor},
                )
        return MultiPoly.wrap(self.num_vars, self.element.quo_ground(divisor))

    def __eq__(self, other) -> bool:
        if isinstance(other, Integral):
            return self == MultiPoly.constant(self.num_vars, int(other))
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.num_vars == other.num_vars and self.element == other.element

    __hash__ = None

    def __repr__(self) -> str:
        if not self.element:
            return "0"
        parts = []
        for mono, coeff in sorted(self.terms.items(), reverse=True):
            factors = [
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
                for i, e in enumerate(mono)
                if e
            ]
            if not factors:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append("*".join(factors))
            elif coeff == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{coeff}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")

    def as_dictionary(self) -> dict[str, Any]:
        return {
            "numVars": self.num_vars,
            "terms": [[list(mono), coeff] for mono, coeff in sorted(self.terms.items())],
        }


class EBasisExpr(object):
    """Integer combination of e_lambda; zero coefficients are not stored."""

    def __init__(self, coeffs: Optional[dict[Partition, int]] = None):
        self.coeffs: dict[Partition, int] = {}
        if coeffs:
            for lam, c in coeffs.items():
                c = _check_coefficient(c)
                if c:
                    self.coeffs[Partition(lam)] = c

    def __getitem__(self, lam: Iterable[int]) -> int:
        return self.coeffs.get(Partition(lam), 0)

    def items(self):
        return sorted(self.coeffs.items(), reverse=True)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "EBasisExpr") -> "EBasisExpr":
        coeffs = dict(self.coeffs)
        for lam, c in other.coeffs.items():
            coeffs[lam] = coeffs.get(lam, 0) + c
        return EBasisExpr(coeffs)

    def __neg__(self) -> "EBasisExpr":
        return EBasisExpr({lam: -c for lam, c in self.coeffs.items()})

    def __sub__(self, other: "EBasisExpr") -> "EBasisExpr":
        return self + (-other)

    def __mul__(self, other: Union["EBasisExpr", int]) -> "EBasisExpr":
        if isinstance(other, int):
            return EBasisExpr({lam: c * other for lam, c in self.coeffs.items()})
        coeffs: dict[Partition, int] = {}
        for lam, a in self.coeffs.items():
            for mu, b in other.coeffs.items():
                key = Partition(sorted(lam + mu, reverse=True))
                coeffs[key] = coeffs.get(key, 0) + a * b
        return EBasisExpr(coeffs)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, EBasisExpr):
            return NotImplemented
        return self.coeffs == other.coeffs

    __hash__ = None

    def to_poly(self, num_vars: int) -> MultiPoly:
        """Reconstruct sum c_lambda e_lambda in num_vars variables."""
        result = MultiPoly.zero(num_vars)
        for lam, c in self.coeffs.items():
            result = result + e_lambda_poly(lam, num_vars) * c
        return result

    def __repr__(self) -> str:
        inner = ", ".join(f"({lam}): {c}" for lam, c in self.items())
        return "{" + inner + "}"

    def as_dictionary(self) -> dict[str, int]:
        return {str(lam): c for lam, c in self.items()}

    @classmethod
    def from_json_dictionary(cls, js: dict[str, int]) -> Self:
        return cls({Partition.from_string(key): value for key, value in js.items()})


@lru_cache(maxsize=None)
def e_poly(m: int, num_vars: int) -> MultiPoly:
    """The m-th elementary symmetric polynomial; 0 outside 0..num_vars."""
    if num_vars < 1:
        raise ValueError("num_vars must be positive")
    if m < 0 or m > num_vars:
        return MultiPoly.zero(num_vars)
    terms = {}
    for subset in itertools.combinations(range(num_vars), m):
        mono = [0] * num_vars
        for i in subset:
            mono[i] = 1
        terms[tuple(mono)] = 1
    return MultiPoly._raw(num_vars, terms)


@lru_cache(maxsize=None)
def p_poly(m: int, num_vars: int) -> MultiPoly:
    """The m-th power sum."""
    if m < 1:
        raise ValueError("power sums are indexed by positive integers")
    terms = {}
    for i in range(num_vars):
        mono = [0] * num_vars
        mono[i] = m
        terms[tuple(mono)] = 1
    return MultiPoly(num_vars, terms)


@lru_cache(maxsize=None)
def m_poly(lam: Partition, num_vars: int) -> MultiPoly:
    """Monomial symmetric polynomial: every distinct rearrangement of lam once."""
    lam = Partition(lam)
    exponents = lam.padded(num_vars)
    return MultiPoly._raw(
        num_vars, {tuple(mono): 1 for mono in distinct_permutations(exponents)}
    )


@lru_cache(maxsize=None)
def e_lambda_poly(lam: Partition, num_vars: int) -> MultiPoly:
    result = MultiPoly.one(num_vars)
    for part in lam:
        result = result * e_poly(part, num_vars)
    return result


@lru_cache(maxsize=None)
def p_lambda_poly(lam: Partition, num_vars: int) -> MultiPoly:
    result = MultiPoly.one(num_vars)
    for part in lam:
        result = result * p_poly(part, num_vars)
    return result


def determinant(matrix: list[list[MultiPoly]], num_vars: int) -> MultiPoly:
    """Fraction-free determinant over ZZ[x1, ..., x_num_vars]."""
    if not matrix:
        return MultiPoly.one(num_vars)
    domain = poly_ring(num_vars).to_domain()
    rows = [[entry.element for entry in row] for row in matrix]
    return MultiPoly.wrap(num_vars, DomainMatrix(rows, (len(rows), len(rows)), domain).det())


@lru_cache(maxsize=None)
def s_poly(lam: Partition, num_vars: int) -> MultiPoly:
    """Schur polynomial as det(e_{lam*_i + j - i})."""
    conj = Partition(lam).conjugate()
    size = len(conj)
    matrix = [
        [e_poly(conj[i] + j - i, num_vars) for j in range(size)]
        for i in range(size)
    ]
    return determinant(matrix, num_vars)


def _check_expandable(f: MultiPoly) -> int:
    if f.is_zero():
        return 0
    degree = f.homogeneous_degree()
    if degree > f.num_vars:
        raise ValueError(
            f"degree {degree} needs at least {degree} variables, got {f.num_vars}"
        )
    if not f.is_symmetric():
        raise ValueError("polynomial is not symmetric")
    return degree


def expand_in_e(f: MultiPoly) -> EBasisExpr:
    """Coefficients c_lambda with f = sum c_lambda e_lambda.

    e_lambda has leading monomial x^(lambda*) and every other monomial of
    e_lambda is dominated by it, so walking monomial orbits in
    reverse-lexicographic order gives a unitriangular solve.
    """
    degree = _check_expandable(f)
    if f.is_zero():
        return EBasisExpr()
    num_vars = f.num_vars
    solved: dict[Partition, int] = {}
    for mu in partitions_of(degree):
        residual = f.coefficient(mu.padded(num_vars))
        for lam, c in solved.items():
            residual -= c * e_lambda_poly(lam, num_vars).coefficient(
                mu.padded(num_vars)
            )
        solved[mu.conjugate()] = residual
    return EBasisExpr(solved)


def expand_in_s(f: MultiPoly) -> dict[Partition, int]:
    """Coefficients in the Schur basis, by the Kostka unitriangular solve."""
    degree = _check_expandable(f)
    if f.is_zero():
        return {}
    num_vars = f.num_vars
    solved: dict[Partition, int] = {}
    for mu in partitions_of(degree):
        residual = f.coefficient(mu.padded(num_vars))
        for lam, c in solved.items():
            residual -= c * s_poly(lam, num_vars).coefficient(mu.padded(num_vars))
        solved[mu] = residual
    return {lam: c for lam, c in solved.items() if c}


def newton_p_in_e(m: int) -> EBasisExpr:
    """p_m in the e-basis via p_m = sum_{i<m} (-1)^(i-1) e_i p_(m-i) + (-1)^(m-1) m e_m."""
    if m < 1:
        raise ValueError("power sums are indexed by positive integers")
    table: list[EBasisExpr] = [EBasisExpr()]
    for j in range(1, m + 1):
        total = EBasisExpr({Partition((j,)): (-1) ** (j - 1) * j})
        for i in range(1, j):
            total = total + EBasisExpr({Partition((i,)): (-1) ** (i - 1)}) * table[j - i]
        table.append(total)
    return table[m]


def mnk_powersum_form(n: int, k: int, num_vars: int) -> MultiPoly:
    """m_(n,k) written through power sums: p_n p_k - p_(n+k), halved when n = k."""
    if not n >= k >= 1:
        raise ValueError("need n >= k >= 1")
    if num_vars < 2:
        raise ValueError("too few variables")
    if n > k:
        return p_poly(n, num_vars) * p_poly(k, num_vars) - p_poly(n + k, num_vars)
    return (p_poly(n, num_vars) ** 2 - p_poly(2 * n, num_vars)).exact_div(2)
