"""
Faithful representation of O(S_q^3) on l^2(N_0 x Z), truncated.

z1 e_(n,j) = q^(n+1) e_(n,j+1) and z0 e_(n,j) = sqrt(1 - q^2n) e_(n-1,j).
Used as a numerical oracle for the rewriting engine.
"""
from typing import Dict, Iterable, Sequence
import logging

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import norm as sparse_norm

from src.errors import NumericalError
from src.ncalg.ncpoly import Monomial, NCPoly, Z0, Z0S, Z1, Z1S
from src.ncalg.rewriting import defining_relations

logger = logging.getLogger(__name__)

# Largest defining-relation residual accepted when building the representation
RELATION_TOLERANCE = 1e-12


class SphereRep:
    """
    Sparse truncated sphere representation on the grid n <= N1, |j| <= N2.

    Words of length L are exact on basis vectors with n <= N1 - L and
    |j| <= N2 - L, so residuals are measured on those columns only.

    Raises:
        ValueError: if q or the grid is out of range
        NumericalError: if a defining relation fails by more than tolerance
    """

    def __init__(self, q: float, n1: int, n2: int, tolerance: float = RELATION_TOLERANCE):
        if not 0 < q < 1:
            raise ValueError(f"Invalid q: {q} (must be in (0, 1))")
        if n1 < 1 or n2 < 1:
            raise ValueError(f"Invalid sphere grid: N1={n1}, N2={n2}")
        self.q = q
        self.n1 = n1
        self.n2 = n2
        self.width = 2 * n2 + 1
        self.dim = (n1 + 1) * self.width

        n = np.arange(n1 + 1)
        shift_j = sp.spdiags(np.ones(self.width), -1, self.width, self.width)
        lower_n = sp.spdiags(np.sqrt(1 - q ** (2 * n)), 1, n1 + 1, n1 + 1)
        z1 = sp.kron(sp.diags(q ** (n + 1.0)), shift_j, format='csr')
        z0 = sp.kron(lower_n, sp.identity(self.width), format='csr')
        self.letters: Dict[str, sp.csr_matrix] = {
            Z0: z0, Z1: z1, Z0S: z0.T.tocsr(), Z1S: z1.T.tocsr(),
        }
        self._monomial_cache: Dict[Monomial, sp.csr_matrix] = {}

        self.residuals = self.relation_residuals()
        worst = max(self.residuals, key=self.residuals.get)
        if self.residuals[worst] > tolerance:
            raise NumericalError(f"Sphere representation violates {worst}: residual "
                                 f"{self.residuals[worst]:.3e} > {tolerance:.1e}")
        logger.debug(f"Sphere grid {n1}x{n2} at q={q}: max relation residual "
                     f"{self.residuals[worst]:.3e}")

    def identity(self) -> sp.csr_matrix:
        return sp.identity(self.dim, format='csr')

    def word(self, letters: Sequence[str]) -> sp.csr_matrix:
        result = self.identity()
        for letter in letters:
            result = result @ self.letters[letter]
        return result

    def monomial(self, m: Monomial) -> sp.csr_matrix:
        cached = self._monomial_cache.get(m)
        if cached is None:
            cached = self.word(m.word())
            self._monomial_cache[m] = cached
        return cached

    def evaluate(self, x: NCPoly) -> sp.csr_matrix:
        """Image of an element, coefficients evaluated at the numeric q."""
        result = sp.csr_matrix((self.dim, self.dim))
        for m, c in x.items():
            result = result + c.evaluate(self.q) * self.monomial(m)
        return result

    def interior_columns(self, guard: int) -> np.ndarray:
        """Indices of basis vectors at least guard steps from every edge."""
        n, j = np.divmod(np.arange(self.dim), self.width)
        j = j - self.n2
        return np.flatnonzero((n <= self.n1 - guard) & (np.abs(j) <= self.n2 - guard))

    def residual(self, difference: sp.spmatrix, guard: int) -> float:
        """Frobenius norm of the difference restricted to interior columns."""
        cols = self.interior_columns(guard)
        block = sp.csc_matrix(difference)[:, cols]
        return float(sparse_norm(block)) if block.nnz else 0.0

    def side(self, side) -> sp.csr_matrix:
        """Image of a linear combination of letter words."""
        result = sp.csr_matrix((self.dim, self.dim))
        for c, letters in side:
            result = result + c.evaluate(self.q) * self.word(letters)
        return result

    def relation_residuals(self, guard: int = 2) -> Dict[str, float]:
        """Residual of every defining relation, the representation's self-test."""
        return {
            relation.name: self.residual(self.side(relation.lhs) - self.side(relation.rhs), guard)
            for relation in defining_relations()
        }

    def word_oracle_residual(self, letters: Sequence[str], reduced: NCPoly) -> float:
        """
        Compare a raw word with a claimed normal form, relative to its size.

        The difference is divided by the coefficient mass of the normal form.
        """
        difference = self.word(letters) - self.evaluate(reduced)
        mass = sum(abs(c.evaluate(self.q)) for _, c in reduced.items())
        return self.residual(difference, max(len(letters), 1)) / max(1.0, mass)

    def b_spectrum(self) -> np.ndarray:
        """Eigenvalues q^(2n+2) of z1 z1s."""
        return self.q ** (2 * np.arange(self.n1 + 1) + 2.0)


def spectrum_contained(values: Iterable[float], spectrum: np.ndarray, tol: float = 1e-10) -> bool:
    """True iff every value lies within tol of some spectrum point."""
    spectrum = np.asarray(spectrum)
    return all(np.min(np.abs(spectrum - v)) <= tol for v in values)
