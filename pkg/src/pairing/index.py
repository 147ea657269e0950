"""Index pairings <[F_s], [I_r]> and the matrix M."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple
import logging
import os

import numpy as np

from src.errors import PairingMismatchError, UsageError
from src.pairing.traces import (
    DEFAULT_SETTINGS, CertificationSettings, CertifiedReal, certified_trace, projection_trace,
)
from src.rep.operators import (
    RepParams, WqWord, eval_word, f_values, g_values, upper_product,
)

logger = logging.getLogger(__name__)

THREADS_ENV = 'QNC_THREADS'


@dataclass(frozen=True)
class PairingEntry:
    s: int
    r: int
    trace: CertifiedReal
    value: int

    def to_dict(self) -> Dict[str, Any]:
        return {'s': self.s, 'r': self.r, 'value': self.value, **self.trace.to_dict()}


@dataclass(frozen=True)
class PairingMatrix:
    """Certified (l+1) x (l+1) pairing matrix; rows s, columns r."""

    k: int
    l: int
    q: float
    N: int
    M: Tuple[Tuple[int, ...], ...]
    entries: Tuple[PairingEntry, ...] = field(default=(), compare=False)

    @property
    def max_bound(self) -> float:
        return max((e.trace.bound for e in self.entries), default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'l': self.l,
            'k': self.k,
            'q': self.q,
            'N': self.N,
            'M': [list(row) for row in self.M],
            'max_bound': self.max_bound,
        }


def closed_form_M(l: int) -> Tuple[Tuple[int, ...], ...]:
    """M = I + N0, N0 with ones in column 0 of rows 1..l."""
    if l < 1:
        raise ValueError(f"Invalid l={l} (must be >= 1)")
    return tuple(
        tuple(1 if (s == r or (r == 0 and s >= 1)) else 0 for r in range(l + 1))
        for s in range(l + 1)
    )


def _unit_weight(params: RepParams) -> np.ndarray:
    """
    Diagonal of pi_s(Psi* Psi) = b^k F(b)^k + G(X) X with X = prod_{m=1}^{l} (1 - q^-2m b).

    Equal to 1 up to rounding by the partition of unity.
    """
    x = params.b_spectrum()
    big_x = upper_product(x, params.q, params.l)
    return x ** params.k * f_values(x, params.q, params.l) ** params.k + g_values(big_x, params.k) * big_x


def index_pairing(k: int, l: int, s: int, r: int, q: float, N: int,
                  settings: CertificationSettings = DEFAULT_SETTINGS) -> PairingEntry:
    """
    Certified pairing of the Fredholm module F_s with the class of p_r.

    s = 0 is the counit: 1 for r = 0 and 0 otherwise, exactly. For s >= 1
    and r >= 1 the trace Tr(pi_s(Psi p_r Psi*)) is moved cyclically to
    Tr(pi_s(p_r) pi_s(Psi* Psi)); for r = 0 it is Tr(pi_s(P) - diag(0, 1)).

    Raises:
        CertificationError: if the trace or its rounding cannot be certified
    """
    if not 0 <= s <= l or not 0 <= r <= l:
        raise ValueError(f"Invalid pairing indices: s={s}, r={r} (must be 0-{l})")

    if s == 0:
        value = 1 if r == 0 else 0
        return PairingEntry(s, r, CertifiedReal(float(value), 0.0), value)

    params = RepParams(k=k, l=l, s=s, q=q, N=N)
    if r == 0:
        trace = projection_trace(params, settings)
    else:
        projection = np.diag(eval_word(params, WqWord.parse(f'p_{r}')).matrix)
        terms = projection * _unit_weight(params)
        trace = certified_trace(lambda p: terms[p], N, settings.decay_ratio(q ** (2 * l)), settings,
                                what=f'pairing s={s} r={r}')

    value = trace.certified_integer(settings.rounding_threshold)
    logger.debug(f"Pairing (s={s}, r={r}) = {value} from {trace.value!r} +- {trace.bound:.3e}")
    return PairingEntry(s, r, trace, value)


def threads_from_env() -> Optional[int]:
    """
    QNC_THREADS as a positive int, None when unset or empty.

    Raises:
        UsageError: if the variable is not a positive integer
    """
    env = os.environ.get(THREADS_ENV, '').strip()
    if not env:
        return None
    try:
        threads = int(env)
    except ValueError:
        raise UsageError(f"Invalid {THREADS_ENV}: {env!r} (must be a positive integer)") from None
    if threads < 1:
        raise UsageError(f"Invalid {THREADS_ENV}: {threads} (must be >= 1)")
    return threads


def worker_count(jobs: int, requested: Optional[int] = None) -> int:
    """Threads for a sweep: requested, else QNC_THREADS, else the CPU count, capped by jobs."""
    if requested is None:
        requested = threads_from_env() or os.cpu_count() or 1
    return max(1, min(requested, jobs))


def pairing_matrix(k: int, l: int, q: float, N: int,
                   settings: CertificationSettings = DEFAULT_SETTINGS,
                   workers: Optional[int] = None) -> PairingMatrix:
    """
    All (l+1)^2 certified pairings, checked against closed_form_M(l).

    Raises:
        CertificationError: if any entry fails to certify
        PairingMismatchError: if the certified matrix differs from the closed form
    """
    jobs = [(s, r) for s in range(l + 1) for r in range(l + 1)]
    with ThreadPoolExecutor(max_workers=worker_count(len(jobs), workers)) as pool:
        futures = {job: pool.submit(index_pairing, k, l, job[0], job[1], q, N, settings) for job in jobs}
        results: Dict[Tuple[int, int], PairingEntry] = {job: f.result() for job, f in futures.items()}

    entries = tuple(results[job] for job in jobs)
    matrix = tuple(tuple(results[(s, r)].value for r in range(l + 1)) for s in range(l + 1))
    expected = closed_form_M(l)
    if matrix != expected:
        raise PairingMismatchError(f"Pairing matrix {matrix} differs from closed form {expected}")

    result = PairingMatrix(k=k, l=l, q=q, N=N, M=matrix, entries=entries)
    logger.info(f"Pairing matrix certified for (k, l) = ({k}, {l}), q={q}, N={N}, "
                f"max bound {result.max_bound:.3e}")
    return result
