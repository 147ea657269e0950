"""Exact Laurent polynomials in the deformation parameter q."""
from typing import Dict, Iterator, Mapping, Tuple, Union

Scalar = Union[int, 'LaurentPoly']


class LaurentPoly:
    """
    Element of Z[q, q^-1] stored as a map exponent -> integer coefficient.

    Zero coefficients are never stored, so two polynomials are equal exactly
    when their maps are equal. Instances are immutable and hashable.
    """

    __slots__ = ('_terms', '_hash')

    def __init__(self, terms: Union[Mapping[int, int], int, None] = None):
        """
        Build a Laurent polynomial.

        Args:
            terms: Mapping exponent -> coefficient, an integer constant, or None for zero
        """
        if terms is None:
            items = {}
        elif isinstance(terms, int):
            items = {0: terms}
        else:
            items = dict(terms)
        self._terms: Dict[int, int] = {e: int(c) for e, c in items.items() if c != 0}
        self._hash = None

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> 'LaurentPoly':
        """Return coefficient * q^exponent."""
        return cls({exponent: coefficient})

    @classmethod
    def coerce(cls, value: Scalar) -> 'LaurentPoly':
        if isinstance(value, LaurentPoly):
            return value
        if isinstance(value, int):
            return cls(value)
        raise TypeError(f"Cannot use {type(value).__name__} as a Laurent coefficient")

    # -- inspection -----------------------------------------------------

    def items(self) -> Iterator[Tuple[int, int]]:
        """Iterate (exponent, coefficient) pairs in increasing exponent order."""
        for e in sorted(self._terms):
            yield e, self._terms[e]

    def coefficient(self, exponent: int) -> int:
        return self._terms.get(exponent, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_unit(self) -> bool:
        """True for +-q^n, the invertible elements of the ring."""
        return len(self._terms) == 1 and next(iter(self._terms.values())) in (1, -1)

    def degree_range(self) -> Tuple[int, int]:
        if not self._terms:
            raise ValueError("Zero polynomial has no degree range")
        return min(self._terms), max(self._terms)

    def evaluate(self, q: float) -> float:
        """Evaluate at a numeric q."""
        return sum(c * q ** e for e, c in self._terms.items())

    # -- ring operations ------------------------------------------------

    def __add__(self, other: Scalar) -> 'LaurentPoly':
        other = LaurentPoly.coerce(other)
        result = dict(self._terms)
        for e, c in other._terms.items():
            result[e] = result.get(e, 0) + c
        return LaurentPoly(result)

    __radd__ = __add__

    def __neg__(self) -> 'LaurentPoly':
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Scalar) -> 'LaurentPoly':
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other: Scalar) -> 'LaurentPoly':
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other: Scalar) -> 'LaurentPoly':
        other = LaurentPoly.coerce(other)
        result: Dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                result[e1 + e2] = result.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(result)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> 'LaurentPoly':
        if n < 0:
            return self.inverse() ** (-n)
        result = LaurentPoly(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> 'LaurentPoly':
        """Inverse of a unit +-q^n."""
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit of Z[q, q^-1]")
        (e, c), = self._terms.items()
        return LaurentPoly({-e: c})

    def shift(self, n: int) -> 'LaurentPoly':
        """Multiply by q^n."""
        return LaurentPoly({e + n: c for e, c in self._terms.items()})

    def substitute_power(self, n: int) -> 'LaurentPoly':
        """Return p(q^n), e.g. n=2 maps a polynomial in q to one in q^2."""
        return LaurentPoly({e * n: c for e, c in self._terms.items()})

    # -- comparison / display -------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            # constants hash like the int they compare equal to
            if set(self._terms) <= {0}:
                self._hash = hash(self._terms.get(0, 0))
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def to_text(self) -> str:
        """Canonical text, e.g. '1 + q^2' or '-q^-2 + 3*q'."""
        if not self._terms:
            return '0'
        parts = []
        for e, c in self.items():
            if e == 0:
                body = str(abs(c))
            else:
                power = 'q' if e == 1 else f'q^{e}'
                body = power if abs(c) == 1 else f'{abs(c)}*{power}'
            sign = '-' if c < 0 else '+'
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ('-' if first_sign == '-' else '') + first_body
        for sign, body in parts[1:]:
            text += f' {sign} {body}'
        return text

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f'LaurentPoly({self.to_text()!r})'


ZERO = LaurentPoly()
ONE = LaurentPoly(1)
Q = LaurentPoly.monomial(1)


def q_power(n: int) -> LaurentPoly:
    """q^n as a Laurent polynomial."""
    return LaurentPoly.monomial(n)
