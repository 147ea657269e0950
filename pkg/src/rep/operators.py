"""
Truncated representations pi_s of O(W_q(k, l)) on l^2(N_0).

pi_s(b) e_p = q^(2s + 2lp) e_p and pi_s(a) e_p = w_p e_(p-1) with
w_p = q^(k(lp + s)) prod_{m=1}^{l} (1 - q^(2(lp + s - m)))^(1/2).
"""
from dataclasses import dataclass
from math import gcd
from pathlib import Path
from typing import Dict, Optional, Tuple, Union
import logging
import re

import numpy as np

from src.errors import NumericalError, WordError

logger = logging.getLogger(__name__)

RADICAND_TOLERANCE = 1e-13
CONTRACTION_TOLERANCE = 1e-12
MIN_DIMENSION = 8


@dataclass(frozen=True)
class RepParams:
    k: int
    l: int
    s: int
    q: float
    N: int

    def __post_init__(self):
        if self.k < 1 or self.l < 1 or gcd(self.k, self.l) != 1:
            raise ValueError(f"Invalid weights: k={self.k}, l={self.l} (must be coprime, >= 1)")
        if not 1 <= self.s <= self.l:
            raise ValueError(f"Invalid block index: s={self.s} (must be 1-{self.l})")
        if not 0 < self.q < 1:
            raise ValueError(f"Invalid q: {self.q} (must be in (0, 1))")
        if self.N < MIN_DIMENSION:
            raise ValueError(f"Invalid dimension: {self.N} (must be >= {MIN_DIMENSION})")

    @property
    def guard(self) -> int:
        """Rows/columns next to the truncation edge excluded from residuals."""
        return max(2 * self.l, 2 * self.k)

    def b_spectrum(self) -> np.ndarray:
        """x_p = q^(2s + 2lp) for p = 0..N-1."""
        p = np.arange(self.N)
        return self.q ** (2 * self.s + 2 * self.l * p)


@dataclass(frozen=True, eq=False)
class TruncOp:
    """
    Dense truncation of an operator, with provenance.

    offset is the band the nonzero entries live on (0 for diagonal, +1 for
    the superdiagonal, None when unknown).
    """

    matrix: np.ndarray
    tag: str = ''
    offset: Optional[int] = None

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=float)
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)

    @classmethod
    def diagonal(cls, values: np.ndarray, tag: str = '') -> 'TruncOp':
        return cls(np.diag(values), tag=tag, offset=0)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def T(self) -> 'TruncOp':
        offset = None if self.offset is None else -self.offset
        return TruncOp(self.matrix.T, tag=f'({self.tag})*', offset=offset)

    def diag(self) -> np.ndarray:
        return np.diag(self.matrix).copy()

    def __matmul__(self, other: 'TruncOp') -> 'TruncOp':
        offset = None
        if self.offset is not None and other.offset is not None:
            offset = self.offset + other.offset
        return TruncOp(self.matrix @ other.matrix, tag=f'{self.tag} {other.tag}'.strip(), offset=offset)

    def __add__(self, other: 'TruncOp') -> 'TruncOp':
        offset = self.offset if self.offset == other.offset else None
        return TruncOp(self.matrix + other.matrix, tag=f'{self.tag} + {other.tag}', offset=offset)

    def __sub__(self, other: 'TruncOp') -> 'TruncOp':
        offset = self.offset if self.offset == other.offset else None
        return TruncOp(self.matrix - other.matrix, tag=f'{self.tag} - {other.tag}', offset=offset)

    def scale(self, factor: float) -> 'TruncOp':
        return TruncOp(self.matrix * factor, tag=f'{factor:g}*{self.tag}', offset=self.offset)

    def norm(self) -> float:
        """Operator (spectral) norm."""
        return float(np.linalg.norm(self.matrix, 2))

    def guarded_norm(self, guard: int) -> float:
        """Operator norm of the leading (N - guard) x (N - guard) block."""
        n = self.dim - guard
        if n <= 0:
            return 0.0
        return float(np.linalg.norm(self.matrix[:n, :n], 2))

    def export_csv(self, path: Union[str, Path]):
        """Row-major CSV with a 'rows cols' header line."""
        rows, cols = self.matrix.shape
        np.savetxt(path, self.matrix, delimiter=',', header=f'{rows} {cols}', comments='# ')

    def export_binary(self, path: Union[str, Path]):
        """Two little-endian int64 dimensions followed by float64 entries, row-major."""
        with open(path, 'wb') as f:
            np.asarray(self.matrix.shape, dtype='<i8').tofile(f)
            np.ascontiguousarray(self.matrix, dtype='<f8').tofile(f)

    @classmethod
    def load_binary(cls, path: Union[str, Path], tag: str = '') -> 'TruncOp':
        with open(path, 'rb') as f:
            rows, cols = np.fromfile(f, dtype='<i8', count=2)
            data = np.fromfile(f, dtype='<f8', count=int(rows * cols))
        return cls(data.reshape(int(rows), int(cols)), tag=tag)


def check_radicand(values: np.ndarray, what: str) -> np.ndarray:
    """Clip tiny negative rounding noise to zero; anything larger is a bug."""
    lowest = float(np.min(values)) if values.size else 0.0
    if lowest < -RADICAND_TOLERANCE:
        raise NumericalError(f"Negative radicand in {what}: {lowest:.3e}")
    return np.clip(values, 0.0, None)


def check_contraction(op: TruncOp) -> TruncOp:
    norm = op.norm()
    if norm > 1 + CONTRACTION_TOLERANCE:
        raise NumericalError(f"{op.tag or 'operator'} is not a contraction: norm {norm:.15f}")
    return op


# -- closed forms --------------------------------------------------------

def _lattice_factor(x: np.ndarray, c: float) -> np.ndarray:
    """
    1 - c x for x on the spectrum q^(2n) and c = q^(-2m).

    The exact value is 0 or at least 1 - q^2 in size, so rounding residue
    at the zeros is snapped to 0.
    """
    factor = 1 - c * x
    factor[np.abs(factor) < 64 * np.finfo(float).eps] = 0.0
    return factor


def f_values(x: np.ndarray, q: float, l: int) -> np.ndarray:
    """F(x) = sum_{m=1}^{l} q^-2m prod_{i=1}^{m-1} (1 - q^-2i x), free of cancellation."""
    total = np.zeros_like(x, dtype=float)
    running = np.ones_like(x, dtype=float)
    for m in range(1, l + 1):
        total += q ** (-2 * m) * running
        running = running * _lattice_factor(x, q ** (-2 * m))
    return total


def ftilde_values(x: np.ndarray, q: float, l: int) -> np.ndarray:
    """F~(x) = sum_{m=0}^{l-1} q^2m prod_{i=0}^{m-1} (1 - q^2i x)."""
    total = np.zeros_like(x, dtype=float)
    running = np.ones_like(x, dtype=float)
    for m in range(l):
        total += q ** (2 * m) * running
        running = running * (1 - q ** (2 * m) * x)
    return total


def g_values(y: np.ndarray, k: int) -> np.ndarray:
    """G(y) = sum_{j<k} (1 - y)^j."""
    return sum((1 - y) ** j for j in range(k))


def lower_product(x: np.ndarray, q: float, l: int) -> np.ndarray:
    """prod_{m=0}^{l-1} (1 - q^2m x), the image of z0^l z0s^l."""
    result = np.ones_like(x, dtype=float)
    for m in range(l):
        result = result * (1 - q ** (2 * m) * x)
    return result


def upper_product(x: np.ndarray, q: float, l: int) -> np.ndarray:
    """prod_{m=1}^{l} (1 - q^-2m x), the image of z0s^l z0^l."""
    result = np.ones_like(x, dtype=float)
    for m in range(1, l + 1):
        result = result * _lattice_factor(x, q ** (-2 * m))
    return result


# -- generators ----------------------------------------------------------

def a_weights(params: RepParams) -> np.ndarray:
    """w_p for p = 0..N-1 (w_0 = 0)."""
    k, l, s, q = params.k, params.l, params.s, params.q
    p = np.arange(params.N)
    n = l * p + s
    radicand = np.ones(params.N)
    for m in range(1, l + 1):
        radicand = radicand * (1 - q ** (2 * (n - m)))
    weights = q ** (k * n[1:]) * np.sqrt(check_radicand(radicand[1:], 'rep_a weight'))
    return np.concatenate([[0.0], weights])


def rep_b(params: RepParams) -> TruncOp:
    return TruncOp.diagonal(params.b_spectrum(), tag='b')


def rep_a(params: RepParams) -> TruncOp:
    """pi_s(a): e_p -> w_p e_(p-1), so entry [p-1, p] = w_p and a e_0 = 0."""
    weights = a_weights(params)
    matrix = np.diag(weights[1:], 1)
    return check_contraction(TruncOp(matrix, tag='a', offset=1))


def abs_a_diagonal(params: RepParams) -> np.ndarray:
    """Diagonal of |pi_s(a)| = (b^k prod_{m=1}^{l} (1 - q^-2m b))^(1/2)."""
    x = params.b_spectrum()
    radicand = x ** params.k * upper_product(x, params.q, params.l)
    radicand[0] = 0.0
    return np.sqrt(check_radicand(radicand, '|a|'))


def counit_projection(r: int) -> int:
    """epsilon(p_r): 1 for r = 0, else 0."""
    return 1 if r == 0 else 0


# -- W_q words -------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    """One letter of a W_q word: 'a', 'a*', 'b', 'p' (with r) or 'chi' (with exponent)."""

    kind: str
    index: Optional[int] = None

    def to_text(self) -> str:
        if self.kind == 'p':
            return f'p_{self.index}'
        if self.kind == 'chi':
            return f'chi_{self.index}'
        return self.kind


_TOKEN_RE = re.compile(r'^(a\*|a|b|p_(\d+)|chi_(-?\d+))$')


@dataclass(frozen=True)
class WqWord:
    """
    Product of W_q tokens with a numeric prefactor.

    chi_e selects the spectral projection of b for the eigenvalue q^(2e).
    """

    tokens: Tuple[Token, ...]
    prefactor: float = 1.0

    @classmethod
    def parse(cls, text: str, prefactor: float = 1.0) -> 'WqWord':
        """Parse a space-separated word such as 'a* a p_1 chi_4'."""
        tokens = []
        for item in text.split():
            match = _TOKEN_RE.match(item)
            if not match:
                raise WordError(f"Malformed W_q token: {item!r}")
            if match.group(2) is not None:
                tokens.append(Token('p', int(match.group(2))))
            elif match.group(3) is not None:
                tokens.append(Token('chi', int(match.group(3))))
            else:
                tokens.append(Token(item))
        return cls(tuple(tokens), prefactor)

    def to_text(self) -> str:
        return ' '.join(t.to_text() for t in self.tokens) or '1'


def _token_image(params: RepParams, token: Token) -> TruncOp:
    n = params.N
    if token.kind == 'a':
        return rep_a(params)
    if token.kind == 'a*':
        return rep_a(params).T
    if token.kind == 'b':
        return rep_b(params)
    if token.kind == 'p':
        r = token.index
        if r is None or not 0 <= r <= params.l:
            raise WordError(f"Projection index out of range: p_{r} (must be 0-{params.l})")
        if r == 0:
            return TruncOp.diagonal(np.ones(n), tag='p_0')
        values = np.zeros(n)
        if r == params.s:
            values[0] = 1.0
        return TruncOp.diagonal(values, tag=f'p_{r}')
    if token.kind == 'chi':
        values = np.zeros(n)
        e = token.index
        # eigenvalue q^(2e) = q^(2s + 2lp) for an integer p >= 0
        if e is not None and (e - params.s) % params.l == 0:
            p = (e - params.s) // params.l
            if 0 <= p < n:
                values[p] = 1.0
        return TruncOp.diagonal(values, tag=f'chi_{e}')
    raise WordError(f"Unknown W_q token: {token.kind!r}")


def eval_word(params: RepParams, word: WqWord) -> TruncOp:
    """pi_s of a W_q word as a product of generator images."""
    result = TruncOp.diagonal(np.ones(params.N), tag='')
    for token in word.tokens:
        result = result @ _token_image(params, token)
    return TruncOp(result.matrix * word.prefactor, tag=word.to_text(), offset=result.offset)


def counit(word: WqWord) -> float:
    """
    The character epsilon: a, a*, b -> 0, p_0 -> 1, p_r -> 0 (r >= 1).

    chi_e projects onto a nonzero eigenvalue of b, so it maps to 0.
    """
    value = word.prefactor
    for token in word.tokens:
        if token.kind == 'p':
            value *= counit_projection(token.index)
        else:
            return 0.0
    return value


# -- functional calculus and the projection -----------------------------

def xi_diagonals(params: RepParams) -> Tuple[TruncOp, TruncOp]:
    """
    Diagonals of xi_1 = F(b)^(k/2) and xi_0 = G(z0^l z0s^l)^(1/2).

    Raises:
        NumericalError: if a radicand is below -1e-13
    """
    x = params.b_spectrum()
    f = check_radicand(f_values(x, params.q, params.l), 'F(b)')
    y = lower_product(x, params.q, params.l)
    g = check_radicand(g_values(y, params.k), 'G')
    xi1 = TruncOp.diagonal(f ** (params.k / 2), tag='xi_1')
    xi0 = TruncOp.diagonal(np.sqrt(g), tag='xi_0')
    return xi1, xi0


def build_projection(params: RepParams) -> TruncOp:
    """
    pi_s(P) as a 2N x 2N block matrix.

    P11 = xi_1 b^k xi_1, P12 = xi_1 a* xi_0, P21 = xi_0 a xi_1,
    P22 = xi_0 prod_{m=0}^{l-1} (1 - q^2m b) xi_0.
    """
    xi1, xi0 = xi_diagonals(params)
    x = params.b_spectrum()
    d1, d0 = xi1.diag(), xi0.diag()
    a = rep_a(params).matrix

    p11 = np.diag(d1 * x ** params.k * d1)
    p21 = d0[:, None] * a * d1[None, :]
    p12 = p21.T
    p22 = np.diag(d0 * lower_product(x, params.q, params.l) * d0)
    matrix = np.block([[p11, p12], [p21, p22]])
    logger.debug(f"Built projection for s={params.s}, N={params.N}")
    return TruncOp(matrix, tag='P')


def projection_residual(params: RepParams) -> float:
    """||P^2 - P|| on the guarded blocks."""
    n, g = params.N, params.guard
    proj = build_projection(params).matrix
    defect = proj @ proj - proj
    keep = np.r_[0:n - g, n:2 * n - g]
    return float(np.linalg.norm(defect[np.ix_(keep, keep)], 2))


def relation_residuals(params: RepParams) -> Dict[str, float]:
    """
    Guarded operator-norm residuals of the W_q relations.

    Returns:
        relation name -> residual
    """
    k, l, q, g = params.k, params.l, params.q, params.guard
    a = rep_a(params)
    b = rep_b(params)
    x = params.b_spectrum()
    residuals = {
        'b_selfadjoint': (b - b.T).guarded_norm(g),
        'b_a': (b @ a - (a @ b).scale(q ** (-2 * l))).guarded_norm(g),
        'a_astar': (a @ a.T - TruncOp.diagonal(q ** (2 * k * l) * x ** k * lower_product(x, q, l))).guarded_norm(g),
        'astar_a': (a.T @ a - TruncOp.diagonal(x ** k * upper_product(x, q, l))).guarded_norm(g),
    }
    for name, value in residuals.items():
        logger.debug(f"Relation {name}: residual {value:.3e}")
    return residuals


def pull_through_residual(params: RepParams, degree: int) -> float:
    """||a b^n - (q^2l b)^n a|| on the guarded block."""
    a = rep_a(params)
    x = params.b_spectrum()
    left = a @ TruncOp.diagonal(x ** degree)
    right = TruncOp.diagonal((params.q ** (2 * params.l) * x) ** degree) @ a
    return (left - right).guarded_norm(params.guard)
