"""Elements of O(S_q^3) in the PBW basis e_{p,r,s}."""
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union
import logging

from src.errors import ResourceLimitError, WordError
from src.ncalg.laurent import LaurentPoly, Scalar, q_power

logger = logging.getLogger(__name__)

Z0 = 'z0'
Z1 = 'z1'
Z1S = 'z1s'
Z0S = 'z0s'

# Letters in normal-form order: z0 < z1 < z1s < z0s
LETTERS: Tuple[str, ...] = (Z0, Z1, Z1S, Z0S)

STAR_LETTER = {Z0: Z0S, Z0S: Z0, Z1: Z1S, Z1S: Z1}

# Products whose normal form exceeds this many monomials abort.
MAX_TERMS = 10 ** 6

_term_budget: ContextVar[int] = ContextVar('term_budget', default=MAX_TERMS)


@contextmanager
def term_budget(limit: int):
    """
    Monomial budget for every product and normal form computed inside the block.

    Raises:
        ValueError: if limit < 1
    """
    if limit < 1:
        raise ValueError(f"Invalid max_terms: {limit} (must be >= 1)")
    token = _term_budget.set(limit)
    try:
        yield
    finally:
        _term_budget.reset(token)


def current_term_budget() -> int:
    return _term_budget.get()


@dataclass(frozen=True, order=True)
class Monomial:
    """
    Basis vector e_{p,r,s}.

    For p >= 0 this is z0^p z1^r z1s^s; for p < 0 it is z1^r z1s^s z0s^(-p),
    i.e. z0s is kept rightmost.
    """

    p: int
    r: int
    s: int

    def __post_init__(self):
        if self.r < 0 or self.s < 0:
            raise ValueError(f"Invalid monomial exponents: r={self.r}, s={self.s}")

    @property
    def z0_power(self) -> int:
        return max(self.p, 0)

    @property
    def z0s_power(self) -> int:
        return max(-self.p, 0)

    def word(self) -> Tuple[str, ...]:
        """Letters whose product is exactly this basis vector."""
        return ((Z0,) * self.z0_power + (Z1,) * self.r + (Z1S,) * self.s
                + (Z0S,) * self.z0s_power)

    def to_text(self) -> str:
        factors = []
        if self.p > 0:
            factors.append(f'z0^{self.p}')
        if self.r:
            factors.append(f'z1^{self.r}')
        if self.s:
            factors.append(f'z1s^{self.s}')
        if self.p < 0:
            factors.append(f'z0s^{-self.p}')
        return ' '.join(factors) if factors else '1'


UNIT = Monomial(0, 0, 0)

Terms = Dict[Monomial, LaurentPoly]


def _accumulate(target: Terms, monomial: Monomial, coefficient: LaurentPoly):
    value = target.get(monomial)
    value = coefficient if value is None else value + coefficient
    if value.is_zero():
        target.pop(monomial, None)
    else:
        target[monomial] = value


class NCPoly:
    """
    Finite combination of PBW monomials with Laurent coefficients.

    Instances are immutable; arithmetic always returns normal forms.
    """

    __slots__ = ('_terms',)

    def __init__(self, terms: Optional[Mapping[Monomial, Scalar]] = None):
        self._terms: Terms = {}
        for m, c in (terms or {}).items():
            c = LaurentPoly.coerce(c)
            if not c.is_zero():
                self._terms[m] = c

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls) -> 'NCPoly':
        return cls()

    @classmethod
    def one(cls) -> 'NCPoly':
        return cls({UNIT: 1})

    @classmethod
    def basis(cls, p: int, r: int, s: int, coefficient: Scalar = 1) -> 'NCPoly':
        """The element coefficient * e_{p,r,s}."""
        return cls({Monomial(p, r, s): coefficient})

    @classmethod
    def letter(cls, name: str) -> 'NCPoly':
        return normal_form([name])

    @classmethod
    def scalar(cls, value: Scalar) -> 'NCPoly':
        return cls({UNIT: value})

    # -- inspection -----------------------------------------------------

    def items(self) -> Iterator[Tuple[Monomial, LaurentPoly]]:
        """Iterate terms in increasing monomial order."""
        for m in sorted(self._terms):
            yield m, self._terms[m]

    def monomials(self) -> List[Monomial]:
        return sorted(self._terms)

    def coefficient(self, monomial: Monomial) -> LaurentPoly:
        return self._terms.get(monomial, LaurentPoly())

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other: Union['NCPoly', Scalar]) -> 'NCPoly':
        other = _coerce(other)
        result = dict(self._terms)
        for m, c in other._terms.items():
            _accumulate(result, m, c)
        return NCPoly._wrap(result)

    __radd__ = __add__

    def __neg__(self) -> 'NCPoly':
        return NCPoly._wrap({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Union['NCPoly', Scalar]) -> 'NCPoly':
        return self + (-_coerce(other))

    def __rsub__(self, other: Scalar) -> 'NCPoly':
        return _coerce(other) - self

    def __mul__(self, other: Union['NCPoly', Scalar]) -> 'NCPoly':
        if isinstance(other, NCPoly):
            return multiply(self, other)
        c = LaurentPoly.coerce(other)
        if c.is_zero():
            return NCPoly()
        return NCPoly._wrap({m: v * c for m, v in self._terms.items()})

    def __rmul__(self, other: Scalar) -> 'NCPoly':
        # Laurent scalars are central
        return self * other

    def __pow__(self, n: int) -> 'NCPoly':
        if n < 0:
            raise ValueError(f"Negative power: {n}")
        result = NCPoly.one()
        for _ in range(n):
            result = multiply(result, self)
        return result

    def star(self) -> 'NCPoly':
        return star(self)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, LaurentPoly)):
            other = NCPoly.scalar(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    # -- serialization --------------------------------------------------

    def to_text(self) -> str:
        """
        Canonical text form, one term per monomial in increasing order.

        Each term reads '(coeff) * z0^p z1^r z1s^s' with z0s^t written
        rightmost for negative p.
        """
        if not self._terms:
            return '0'
        return ' + '.join(f'({c.to_text()}) * {m.to_text()}' for m, c in self.items())

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f'NCPoly({self.to_text()!r})'

    @classmethod
    def _wrap(cls, terms: Terms) -> 'NCPoly':
        poly = cls.__new__(cls)
        poly._terms = terms
        return poly


def _coerce(value: Union[NCPoly, Scalar]) -> NCPoly:
    if isinstance(value, NCPoly):
        return value
    return NCPoly.scalar(value)


# -- right action of single letters -------------------------------------

def _times_letter(terms: Terms, letter: str) -> Terms:
    """Right-multiply a normal form by one letter, returning a normal form."""
    result: Terms = {}
    for m, c in terms.items():
        a, t, r, s = m.z0_power, m.z0s_power, m.r, m.s
        if letter == Z1:
            _accumulate(result, Monomial(m.p, r + 1, s), c.shift(-t))
        elif letter == Z1S:
            _accumulate(result, Monomial(m.p, r, s + 1), c.shift(-t))
        elif letter == Z0:
            if t == 0:
                _accumulate(result, Monomial(a + 1, r, s), c.shift(-(r + s)))
            else:
                # z0s z0 = 1 - q^-2 b, then b is pulled left through z0s^(t-1)
                _accumulate(result, Monomial(-(t - 1), r, s), c)
                _accumulate(result, Monomial(-(t - 1), r + 1, s + 1), -c.shift(-2 * t))
        elif letter == Z0S:
            if a == 0:
                _accumulate(result, Monomial(-(t + 1), r, s), c)
            else:
                # z0 W z0s = q^(r+s) W (1 - b)
                c = c.shift(r + s)
                _accumulate(result, Monomial(a - 1, r, s), c)
                _accumulate(result, Monomial(a - 1, r + 1, s + 1), -c)
        else:
            raise WordError(f"Unknown letter: {letter!r}")
    return result


def _times_z1_block(terms: Terms, r2: int, s2: int) -> Terms:
    """Right-multiply by z1^r2 z1s^s2 in one step."""
    result: Terms = {}
    for m, c in terms.items():
        _accumulate(result, Monomial(m.p, m.r + r2, m.s + s2),
                    c.shift(-m.z0s_power * (r2 + s2)))
    return result


def _check_budget(terms: Terms, limit: int):
    if len(terms) > limit:
        raise ResourceLimitError(
            f"Normal form exceeded {limit} monomials ({len(terms)} reached)"
        )


def normal_form(word: Sequence[str], prefactor: Scalar = 1) -> NCPoly:
    """
    Expand prefactor * word in the e_{p,r,s} basis.

    Args:
        word: Letters from {'z0', 'z1', 'z1s', 'z0s'}
        prefactor: Laurent scalar multiplying the word

    Returns:
        The unique normal form

    Raises:
        ResourceLimitError: if the expansion exceeds the current term budget
    """
    prefactor = LaurentPoly.coerce(prefactor)
    limit = current_term_budget()
    terms: Terms = {UNIT: prefactor} if not prefactor.is_zero() else {}
    for letter in word:
        terms = _times_letter(terms, letter)
        _check_budget(terms, limit)
    return NCPoly._wrap(terms)


def multiply(x: NCPoly, y: NCPoly, max_terms: Optional[int] = None) -> NCPoly:
    """
    Product of two normal forms.

    Args:
        x: Left factor
        y: Right factor
        max_terms: Monomial budget (default: the enclosing term_budget, else MAX_TERMS)

    Returns:
        Normal form of x * y

    Raises:
        ResourceLimitError: if the result exceeds the budget
    """
    limit = current_term_budget() if max_terms is None else max_terms
    result: Terms = {}
    # x * z0^a is shared by every right monomial with the same z0 power
    z0_cache: Dict[int, Terms] = {0: x._terms}
    for m, c in y._terms.items():
        a = m.z0_power
        if a not in z0_cache:
            start = max(e for e in z0_cache if e <= a)
            partial = z0_cache[start]
            for e in range(start, a):
                partial = _times_letter(partial, Z0)
                z0_cache[e + 1] = partial
        partial = _times_z1_block(z0_cache[a], m.r, m.s)
        for _ in range(m.z0s_power):
            partial = _times_letter(partial, Z0S)
        _check_budget(partial, limit)
        for mon, coef in partial.items():
            _accumulate(result, mon, coef * c)
        _check_budget(result, limit)
    return NCPoly._wrap(result)


def star(x: NCPoly) -> NCPoly:
    """
    The involution: e_{p,r,s} -> e_{-p,s,r}, Laurent coefficients fixed.

    q is a real parameter, so coefficients are not conjugated.
    """
    return NCPoly._wrap({Monomial(-m.p, m.s, m.r): c for m, c in x._terms.items()})


def word_star(word: Sequence[str]) -> Tuple[str, ...]:
    """Adjoint of a letter word: reversed with every letter starred."""
    return tuple(STAR_LETTER[letter] for letter in reversed(word))


# -- grading ------------------------------------------------------------

def charge(m: Monomial, k: int, l: int) -> int:
    """Weight p*k + (r - s)*l; m lies in A_(n)(k,l) iff this equals -n*k*l."""
    return m.p * k + (m.r - m.s) * l


def letter_charge(letter: str, k: int, l: int) -> int:
    return {Z0: k, Z0S: -k, Z1: l, Z1S: -l}[letter]


def word_charge(word: Iterable[str], k: int, l: int) -> int:
    return sum(letter_charge(letter, k, l) for letter in word)


def spectral_projection(x: NCPoly, n: int, k: int, l: int) -> NCPoly:
    """Component of x in A_(n)(k,l): the monomials of charge -n*k*l."""
    target = -n * k * l
    return NCPoly._wrap({m: c for m, c in x._terms.items() if charge(m, k, l) == target})


def weight_components(x: NCPoly, k: int, l: int) -> Dict[int, NCPoly]:
    """Split x by charge; the components sum back to x."""
    parts: Dict[int, Terms] = {}
    for m, c in x._terms.items():
        parts.setdefault(charge(m, k, l), {})[m] = c
    return {w: NCPoly._wrap(t) for w, t in sorted(parts.items())}


def lens_membership(x: NCPoly, k: int, l: int, d: int) -> bool:
    """True iff every monomial charge is divisible by d*k*l."""
    if d < 1:
        raise ValueError(f"Invalid lens level d={d} (must be >= 1)")
    modulus = d * k * l
    return all(charge(m, k, l) % modulus == 0 for m in x._terms)


def leftmost_basis_factor(m: Monomial) -> LaurentPoly:
    """
    q-power c with (z0s)^t z1^r z1s^s = c * e_{p,r,s}, t = -p.

    Basis vectors with p >= 0 coincide in both conventions.
    """
    if m.p >= 0:
        return LaurentPoly(1)
    return q_power(m.p * (m.r + m.s))


# -- frequently used elements -------------------------------------------

def b_element() -> NCPoly:
    """b = z1 z1s."""
    return NCPoly.basis(0, 1, 1)


def a_element(k: int, l: int) -> NCPoly:
    """a = z0^l z1s^k."""
    return NCPoly.basis(l, 0, k)


def b_power(n: int) -> NCPoly:
    return NCPoly.basis(0, n, n)
