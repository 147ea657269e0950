"""
Certified traces of trace-class diagonal operators.

A trace is the fsum of the first N diagonal entries plus a rigorous bound
on the geometric tail and on the accumulated rounding error.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import fsum
from typing import Any, Callable, Dict, Optional
import logging
import sys

import numpy as np

from src.errors import CertificationError
from src.ncalg.bundle import q_binomial
from src.ncalg.laurent import LaurentPoly, q_power
from src.rep.operators import (
    RepParams, WqWord, abs_a_diagonal, build_projection, eval_word, f_values,
    ftilde_values, xi_diagonals,
)

logger = logging.getLogger(__name__)

# Terms below this are treated as exhausted by the ratio test.
FLOOR = 1e-290
EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class CertificationSettings:
    window: int = 10
    ratio_margin: float = 1e-3
    rounding_threshold: float = 0.25
    max_bound: float = 1e-6

    @classmethod
    def from_config(cls, config: Dict[str, Any]) -> 'CertificationSettings':
        section = config.get('pairing', {})
        return cls(
            window=section.get('check_window', cls.window),
            ratio_margin=section.get('ratio_margin', cls.ratio_margin),
            rounding_threshold=section.get('rounding_threshold', cls.rounding_threshold),
            max_bound=section.get('max_bound', cls.max_bound),
        )

    def decay_ratio(self, asymptotic: float) -> float:
        """Ratio used for the tail majorant: slightly above the asymptotic one, below 1."""
        return min(asymptotic + self.ratio_margin, (1 + asymptotic) / 2)


DEFAULT_SETTINGS = CertificationSettings()


@dataclass(frozen=True)
class CertifiedReal:
    value: float
    bound: float

    def __post_init__(self):
        if not self.bound >= 0:
            raise ValueError(f"Invalid error bound: {self.bound}")

    def interval(self):
        return self.value - self.bound, self.value + self.bound

    def contains(self, x: float) -> bool:
        return abs(self.value - x) <= self.bound

    def certified_integer(self, threshold: float = 0.25) -> int:
        """
        Round to the nearest integer only when that is unambiguous.

        Raises:
            CertificationError: if |value - round(value)| + bound >= threshold
        """
        nearest = round(self.value)
        if abs(self.value - nearest) + self.bound >= threshold:
            raise CertificationError(
                f"Cannot certify {self.value!r} +- {self.bound:.3e} as an integer"
            )
        return int(nearest)

    def to_dict(self) -> Dict[str, float]:
        return {'value': self.value, 'bound': self.bound}


def certified_trace(terms: Callable[[np.ndarray], np.ndarray],
                    N: int,
                    rho: float,
                    settings: CertificationSettings = DEFAULT_SETTINGS,
                    magnitude: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                    what: str = 'trace') -> CertifiedReal:
    """
    Sum t_0 + ... + t_(N-1) with a certified error bound.

    Args:
        terms: Vectorized p -> t_p
        N: Number of terms summed
        rho: Claimed decay ratio, 0 < rho < 1
        settings: Window, rounding threshold and bound ceiling
        magnitude: Vectorized p -> size of the pieces t_p was computed from,
            for sums whose terms cancel internally (default |t_p|)
        what: Name used in log and error messages

    Returns:
        CertifiedReal with value and bound

    Raises:
        CertificationError: if the last-window ratio test fails or the bound
            exceeds settings.max_bound
    """
    if not 0 < rho < 1:
        raise ValueError(f"Invalid decay ratio: {rho} (must be in (0, 1))")
    p = np.arange(N)
    t = np.asarray(terms(p), dtype=float)
    a = np.abs(t)

    window = min(settings.window, N - 1)
    for i in range(N - window, N - 1):
        if a[i + 1] < FLOOR:
            continue
        if a[i + 1] > rho * a[i]:
            raise CertificationError(
                f"{what}: tail not geometric at p={i + 1} "
                f"(|t| ratio {a[i + 1] / a[i] if a[i] else float('inf'):.4g} > {rho:.4g}); increase N"
            )

    value = fsum(t.tolist())
    sizes = a if magnitude is None else np.abs(np.asarray(magnitude(p), dtype=float))
    tail = a[-1] * rho / (1 - rho)
    rounding = N * EPS * (float(np.max(sizes)) if N else 0.0)
    bound = float(tail + rounding)

    if bound > settings.max_bound:
        raise CertificationError(
            f"{what}: error bound {bound:.3e} exceeds {settings.max_bound:.1e} at N={N}; increase N"
        )
    logger.debug(f"{what}: value={value!r}, bound={bound:.3e} (N={N}, rho={rho:.4g})")
    return CertifiedReal(value, bound)


# -- traces of the generators --------------------------------------------

def sqrt_b_trace(l: int, s: int, q: float, N: int,
                 settings: CertificationSettings = DEFAULT_SETTINGS) -> CertifiedReal:
    """Tr pi_s(b)^(1/2), exactly q^s / (1 - q^l)."""
    return certified_trace(lambda p: q ** (s + l * p), N, settings.decay_ratio(q ** l),
                           settings, what='Tr b^(1/2)')


def b_trace(l: int, s: int, q: float, N: int,
            settings: CertificationSettings = DEFAULT_SETTINGS) -> CertifiedReal:
    """Tr pi_s(b), exactly q^2s / (1 - q^2l)."""
    return certified_trace(lambda p: q ** (2 * s + 2 * l * p), N, settings.decay_ratio(q ** (2 * l)),
                           settings, what='Tr b')


def abs_a_trace(params: RepParams,
                settings: CertificationSettings = DEFAULT_SETTINGS) -> CertifiedReal:
    """Tr |pi_s(a)|, finite since |a| <= b^(k/2)."""
    diagonal = abs_a_diagonal(params)
    return certified_trace(lambda p: diagonal[p], params.N,
                           settings.decay_ratio(params.q ** (params.k * params.l)),
                           settings, what='Tr |a|')


def _commutator_coefficients(l: int, q: float):
    """c_m with pi_s([z0^l, z0s^l]) = sum_m c_m b^m, m = 1..l."""
    return [c.evaluate(q) for c in _exact_commutator_coefficients(l)]


def _exact_commutator_coefficients(l: int):
    return [
        q_binomial(l, m).shift(m * (m - 1)) * (1 - q_power(-2 * m * l)) * (-1) ** m
        for m in range(1, l + 1)
    ]


def commutator_trace(l: int, s: int, q: float, N: int,
                     settings: CertificationSettings = DEFAULT_SETTINGS) -> CertifiedReal:
    """
    Tr pi_s([z0^l, z0s^l]) through its q-binomial expansion in b.

    The constant term vanishes, so the operator is trace class; the
    certified value rounds to 1 for every 1 <= s <= l. Entries whose
    expansion cancels from above 1 are evaluated in exact rational
    arithmetic at the binary value of q.
    """
    if not 1 <= s <= l:
        raise ValueError(f"Invalid block index: s={s} (must be 1-{l})")
    coefficients = _commutator_coefficients(l, q)
    p = np.arange(N)
    x = q ** (2 * s + 2 * l * p)
    powers = [x ** m for m in range(1, l + 1)]
    values = sum(c * xm for c, xm in zip(coefficients, powers))
    sizes = sum(abs(c) * xm for c, xm in zip(coefficients, powers))

    exact = Fraction(q)
    laurent = _exact_commutator_coefficients(l)
    for i in np.flatnonzero(sizes > 1.0):
        xe = exact ** (2 * s + 2 * l * int(i))
        value = sum(c.evaluate(exact) * xe ** m for m, c in enumerate(laurent, start=1))
        values[i] = float(value)
        sizes[i] = abs(values[i])

    return certified_trace(lambda i: values[i], N, settings.decay_ratio(q ** (2 * l)), settings,
                           magnitude=lambda i: sizes[i], what=f'Tr [z0^{l}, z0s^{l}] (s={s})')


def commutator_trace_closed_form(l: int, s: int, q: float) -> float:
    """sum_m c_m q^2ms / (1 - q^2ml), the exact trace of each b^m summed, in rational arithmetic."""
    exact = Fraction(q)
    total = sum(c.evaluate(exact) * exact ** (2 * m * s) / (1 - exact ** (2 * m * l))
                for m, c in enumerate(_exact_commutator_coefficients(l), start=1))
    return float(total)


def exact_commutator_identity(l: int, s: int) -> bool:
    """1 - prod_{m=1}^{l} (1 - q^2(s-m)) == 1 in Z[q, q^-1]."""
    if not 1 <= s <= l:
        raise ValueError(f"Invalid block index: s={s} (must be 1-{l})")
    product = LaurentPoly(1)
    for m in range(1, l + 1):
        product = product * (1 - q_power(2 * (s - m)))
    return 1 - product == 1


def projection_terms(params: RepParams) -> np.ndarray:
    """Diagonal of pi_s(P) - diag(0, 1) in cancellation-free form: b^k (F(b)^k - F~(b)^k)."""
    x = params.b_spectrum()
    k = params.k
    return x ** k * (f_values(x, params.q, params.l) ** k - ftilde_values(x, params.q, params.l) ** k)


def projection_trace(params: RepParams,
                     settings: CertificationSettings = DEFAULT_SETTINGS) -> CertifiedReal:
    """
    Tr(pi_s(P) - diag(0, 1)) for the assembled projection.

    The diagonal of P22 - 1 loses all digits once b is tiny, so the tail is
    certified on the closed-form terms and the discrepancy with the summed
    matrix diagonal is added to the bound.
    """
    n = params.N
    diagonal = np.diag(build_projection(params).matrix)
    raw = fsum((diagonal[:n] + diagonal[n:] - 1.0).tolist())
    stable = projection_terms(params)
    rho = settings.decay_ratio(params.q ** (2 * params.k * params.l))
    certified = certified_trace(lambda p: stable[p], n, rho, settings, what='Tr(P - diag(0,1))')
    return CertifiedReal(certified.value, certified.bound + abs(raw - certified.value))


def cyclicity_shadow(k: int, l: int, s: int, r: int, q: float, N: int,
                     settings: CertificationSettings = DEFAULT_SETTINGS):
    """
    Tr(xi_1 p_r b^k xi_1) as a matrix product against Tr(p_r b^k xi_1^2) entrywise.

    Returns:
        (CertifiedReal, CertifiedReal), which agree within the combined bounds
    """
    params = RepParams(k=k, l=l, s=s, q=q, N=N)
    xi1, _ = xi_diagonals(params)
    word = WqWord.parse(f'p_{r} ' + ' '.join(['b'] * k))
    product = xi1 @ eval_word(params, word) @ xi1
    left = np.diag(product.matrix)

    x = params.b_spectrum()
    p_r = np.diag(eval_word(params, WqWord.parse(f'p_{r}')).matrix)
    right = p_r * x ** k * xi1.diag() ** 2

    rho = settings.decay_ratio(q ** (2 * k * l))
    return (
        certified_trace(lambda p: left[p], N, rho, settings, what='Tr(xi_1 p_r b^k xi_1)'),
        certified_trace(lambda p: right[p], N, rho, settings, what='Tr(p_r b^k xi_1^2)'),
    )
