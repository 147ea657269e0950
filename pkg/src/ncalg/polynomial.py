"""Univariate polynomials with Laurent coefficients, used for F, F-tilde and G."""
from typing import Iterable, List, Tuple, Union

from src.ncalg.laurent import LaurentPoly, Scalar, q_power
from src.ncalg.ncpoly import NCPoly


class Polynomial:
    """c_0 + c_1 X + ... + c_n X^n with c_j in Z[q, q^-1]."""

    __slots__ = ('_coeffs',)

    def __init__(self, coefficients: Iterable[Scalar] = ()):
        coeffs = [LaurentPoly.coerce(c) for c in coefficients]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self._coeffs: Tuple[LaurentPoly, ...] = tuple(coeffs)

    @classmethod
    def linear_product(cls, exponents: Iterable[int]) -> 'Polynomial':
        """prod over e of (1 - q^e X)."""
        result = cls([1])
        for e in exponents:
            result = result * cls([1, -q_power(e)])
        return result

    @property
    def coefficients(self) -> Tuple[LaurentPoly, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        return len(self._coeffs) - 1

    def coefficient(self, j: int) -> LaurentPoly:
        return self._coeffs[j] if 0 <= j < len(self._coeffs) else LaurentPoly()

    def __add__(self, other: 'Polynomial') -> 'Polynomial':
        n = max(len(self._coeffs), len(other._coeffs))
        return Polynomial(self.coefficient(j) + other.coefficient(j) for j in range(n))

    def __neg__(self) -> 'Polynomial':
        return Polynomial(-c for c in self._coeffs)

    def __sub__(self, other: 'Polynomial') -> 'Polynomial':
        return self + (-other)

    def __mul__(self, other: Union['Polynomial', Scalar]) -> 'Polynomial':
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        if not self._coeffs or not other._coeffs:
            return Polynomial()
        result: List[LaurentPoly] = [LaurentPoly()] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            for j, b in enumerate(other._coeffs):
                result[i + j] = result[i + j] + a * b
        return Polynomial(result)

    def __pow__(self, n: int) -> 'Polynomial':
        result = Polynomial([1])
        for _ in range(n):
            result = result * self
        return result

    def divide_by_x(self) -> 'Polynomial':
        """(P(X) - P(0)) / X."""
        return Polynomial(self._coeffs[1:])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._coeffs == other._coeffs

    __hash__ = None

    def substitute(self, x: NCPoly) -> NCPoly:
        """P(x) in O(S_q^3), by Horner's scheme."""
        result = NCPoly()
        for c in reversed(self._coeffs):
            result = result * x + NCPoly.scalar(c)
        return result

    def evaluate(self, q: float, x: float) -> float:
        result = 0.0
        for c in reversed(self._coeffs):
            result = result * x + c.evaluate(q)
        return result

    def to_text(self) -> str:
        terms = [f'({c.to_text()})*X^{j}' for j, c in enumerate(self._coeffs) if not c.is_zero()]
        return ' + '.join(terms) if terms else '0'

    def __repr__(self) -> str:
        return f'Polynomial({self.to_text()!r})'
