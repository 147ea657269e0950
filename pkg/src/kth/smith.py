"""Exact integer matrices and their Smith normal form."""
from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import List, Sequence, Tuple
import logging

import sympy

from src.errors import NumericalError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntMatrix:
    """Immutable matrix of Python ints, stored row-major."""

    rows: Tuple[Tuple[int, ...], ...]
    ncols: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int = None) -> 'IntMatrix':
        data = tuple(tuple(int(v) for v in row) for row in rows)
        width = len(data[0]) if data else (ncols or 0)
        if any(len(row) != width for row in data):
            raise ValueError("Ragged integer matrix")
        return cls(data, width)

    @classmethod
    def identity(cls, n: int) -> 'IntMatrix':
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zero(cls, m: int, n: int) -> 'IntMatrix':
        return cls.from_rows([[0] * n for _ in range(m)], n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.rows[i][j]

    def to_lists(self) -> List[List[int]]:
        return [list(row) for row in self.rows]

    def transpose(self) -> 'IntMatrix':
        return IntMatrix.from_rows([[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
                                   self.nrows)

    @property
    def T(self) -> 'IntMatrix':
        return self.transpose()

    def __matmul__(self, other: 'IntMatrix') -> 'IntMatrix':
        if self.ncols != other.nrows:
            raise ValueError(f"Shape mismatch: {self.shape} @ {other.shape}")
        cols = other.transpose().rows
        return IntMatrix.from_rows([[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self.rows],
                                   other.ncols)

    def __add__(self, other: 'IntMatrix') -> 'IntMatrix':
        return IntMatrix.from_rows([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
                                   self.ncols)

    def __sub__(self, other: 'IntMatrix') -> 'IntMatrix':
        return IntMatrix.from_rows([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
                                   self.ncols)

    def scale(self, factor: int) -> 'IntMatrix':
        return IntMatrix.from_rows([[factor * a for a in row] for row in self.rows], self.ncols)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def determinant(self) -> int:
        """Exact determinant (sympy, Bareiss)."""
        if not self.is_square():
            raise ValueError(f"Determinant of non-square matrix {self.shape}")
        if self.nrows == 0:
            return 1
        return int(sympy.Matrix(self.to_lists()).det(method='bareiss'))

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(row[j] for row in self.rows)


def matrix_power(m: IntMatrix, d: int) -> IntMatrix:
    """M^d by repeated squaring; M^0 = I."""
    if not m.is_square():
        raise ValueError(f"Power of non-square matrix {m.shape}")
    if d < 0:
        raise ValueError(f"Invalid exponent d={d} (must be >= 0)")
    result = IntMatrix.identity(m.nrows)
    base = m
    while d:
        if d & 1:
            result = result @ base
        base = base @ base
        d >>= 1
    return result


@dataclass(frozen=True)
class SmithDecomposition:
    """U A V = D with U, V unimodular and D diagonal, d_1 | d_2 | ..."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    def diagonal(self) -> List[int]:
        return [self.D[i, i] for i in range(min(self.D.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for v in self.diagonal() if v != 0)


def _swap_rows(a: List[List[int]], i: int, j: int):
    a[i], a[j] = a[j], a[i]


def _swap_cols(a: List[List[int]], i: int, j: int):
    for row in a:
        row[i], row[j] = row[j], row[i]


def _add_row(a: List[List[int]], target: int, source: int, factor: int):
    a[target] = [x + factor * y for x, y in zip(a[target], a[source])]


def _add_col(a: List[List[int]], target: int, source: int, factor: int):
    for row in a:
        row[target] += factor * row[source]


def _find_pivot(d: List[List[int]], t: int):
    best = None
    for i in range(t, len(d)):
        for j in range(t, len(d[0])):
            v = abs(d[i][j])
            # strict < keeps the lowest row, then lowest column, on ties
            if v and (best is None or v < best[0]):
                best = (v, i, j)
    return best


def smith_normal_form(a: IntMatrix) -> SmithDecomposition:
    """
    Smith normal form with transforms.

    Pivots are the smallest nonzero absolute value in the remaining block,
    ties broken by lowest row then lowest column, so U and V are
    reproducible. The result is verified before it is returned.

    Returns:
        SmithDecomposition with U A V = D
    """
    m, n = a.shape
    d = a.to_lists()
    u = IntMatrix.identity(m).to_lists()
    v = IntMatrix.identity(n).to_lists()

    for t in range(min(m, n)):
        while True:
            pivot = _find_pivot(d, t)
            if pivot is None:
                break
            _, pi, pj = pivot
            if pi != t:
                _swap_rows(d, t, pi)
                _swap_rows(u, t, pi)
            if pj != t:
                _swap_cols(d, t, pj)
                _swap_cols(v, t, pj)

            p = d[t][t]
            for i in range(t + 1, m):
                if d[i][t]:
                    factor = -(d[i][t] // p)
                    _add_row(d, i, t, factor)
                    _add_row(u, i, t, factor)
            for j in range(t + 1, n):
                if d[t][j]:
                    factor = -(d[t][j] // p)
                    _add_col(d, j, t, factor)
                    _add_col(v, j, t, factor)

            if any(d[i][t] for i in range(t + 1, m)) or any(d[t][j] for j in range(t + 1, n)):
                continue

            offender = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                             if d[i][j] % p), None)
            if offender is None:
                break
            # pull the non-divisible row into row t and reduce again
            _add_row(d, t, offender[0], 1)
            _add_row(u, t, offender[0], 1)

        if t < m and t < n and d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]

    result = SmithDecomposition(IntMatrix.from_rows(u, m), IntMatrix.from_rows(d, n), IntMatrix.from_rows(v, n))
    verify_smith(a, result)
    return result


def verify_smith(a: IntMatrix, snf: SmithDecomposition):
    """
    Check U A V = D, |det U| = |det V| = 1, D diagonal with a divisibility chain.

    Raises:
        NumericalError: on any violation
    """
    if snf.U @ a @ snf.V != snf.D:
        raise NumericalError("Smith transform check failed: U A V != D")
    for name, w in (('U', snf.U), ('V', snf.V)):
        if abs(w.determinant()) != 1:
            raise NumericalError(f"Smith transform {name} is not unimodular")
    m, n = snf.D.shape
    if any(snf.D[i, j] for i in range(m) for j in range(n) if i != j):
        raise NumericalError("Smith form is not diagonal")
    diagonal = snf.diagonal()
    for x, y in zip(diagonal, diagonal[1:]):
        if x < 0 or (x == 0 and y != 0) or (x and y % x):
            raise NumericalError(f"Smith diagonal {diagonal} breaks the divisibility chain")


def kernel_rank(a: IntMatrix) -> int:
    """Number of columns minus the rank."""
    return a.ncols - smith_normal_form(a).rank


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """
    Columns spanning Ker A over Z.

    They are the last ncols - rank columns of V, since A V = U^-1 D.
    """
    snf = smith_normal_form(a)
    n = a.ncols
    cols = [snf.V.column(j) for j in range(snf.rank, n)]
    return IntMatrix.from_rows([[c[i] for c in cols] for i in range(n)], len(cols))


def determinantal_invariants(a: IntMatrix) -> List[int]:
    """
    Nonzero invariant factors from gcds of minors: f_k = d_k / d_(k-1).

    Independent of smith_normal_form; exponential in the size, so for
    small matrices only.
    """
    m, n = a.shape
    factors = []
    previous = 1
    for size in range(1, min(m, n) + 1):
        divisor = 0
        for rows in combinations(range(m), size):
            for cols in combinations(range(n), size):
                minor = sympy.Matrix([[a[i, j] for j in cols] for i in rows]).det()
                divisor = gcd(divisor, int(minor))
        if divisor == 0:
            break
        factors.append(divisor // previous)
        previous = divisor
    return factors
