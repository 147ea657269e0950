"""
Finitely generated abelian groups and the K-groups of the lens spaces.

The Gysin six-term sequences reduce to

    0 -> K_1 -> Z^(l+1) --(1 - M^d)--> Z^(l+1) -> K_0 -> 0

and its transpose for K-homology, so every group is a kernel or a
cokernel of an integer matrix.
"""
from dataclasses import dataclass, field
from itertools import product
from math import gcd, prod
from typing import Any, Dict, Iterable, List, Optional, Tuple
import logging

from src.kth.smith import (
    IntMatrix, kernel_basis, kernel_rank, matrix_power, smith_normal_form,
)
from src.pairing.index import closed_form_M

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AbelianGroup:
    """Z^rank + Z/d_1 + ... + Z/d_n with d_i >= 2 and d_1 | d_2 | ... ."""

    rank: int
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'torsion', tuple(int(d) for d in self.torsion))
        if self.rank < 0:
            raise ValueError(f"Invalid free rank: {self.rank}")
        if any(d < 2 for d in self.torsion):
            raise ValueError(f"Invalid torsion invariants: {self.torsion} (each must be >= 2)")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError(f"Torsion invariants {self.torsion} do not form a divisibility chain")

    @classmethod
    def from_orders(cls, rank: int, orders: Iterable[int]) -> 'AbelianGroup':
        """
        Normalise Z^rank + sum of Z/n_i for arbitrary n_i >= 0.

        Orders 0 add to the free rank; orders 1 vanish.
        """
        orders = [abs(int(n)) for n in orders]
        rank += sum(1 for n in orders if n == 0)
        finite = [n for n in orders if n > 1]
        if not finite:
            return cls(rank)
        diagonal = IntMatrix.from_rows([[n if i == j else 0 for j in range(len(finite))]
                                        for i, n in enumerate(finite)])
        invariants = [d for d in smith_normal_form(diagonal).diagonal() if d > 1]
        return cls(rank, tuple(invariants))

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    def order(self) -> Optional[int]:
        """Group order, None when infinite."""
        return prod(self.torsion) if self.is_finite else None

    def to_text(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append('Z')
        elif self.rank > 1:
            parts.append(f'Z^{self.rank}')
        parts.extend(f'Z/{d}' for d in self.torsion)
        return ' ⊕ '.join(parts) if parts else '0'

    def to_dict(self) -> Dict[str, Any]:
        return {'rank': self.rank, 'torsion': list(self.torsion)}

    def __str__(self) -> str:
        return self.to_text()


def cokernel(a: IntMatrix) -> AbelianGroup:
    """Z^rows / Im A read off the Smith diagonal."""
    snf = smith_normal_form(a)
    diagonal = snf.diagonal()
    free = a.nrows - snf.rank
    return AbelianGroup(free, tuple(d for d in diagonal if d > 1))


def torsion_counts(group: AbelianGroup, k: int) -> int:
    """Number of elements killed by k in the torsion part."""
    return prod(gcd(k, d) for d in group.torsion)


def _lattice_basis(a: IntMatrix) -> List[List[int]]:
    """
    Triangular basis h_0, ..., h_(m-1) of the column lattice A Z^n.

    h_i vanishes above coordinate i and h_i[i] > 0.

    Raises:
        ValueError: if A has rank below its row count
    """
    m, n = a.shape
    columns = [list(a.column(j)) for j in range(n)]
    basis = []
    for i in range(m):
        live = [c for c in columns if c[i] != 0]
        while len(live) > 1:
            pivot = min(live, key=lambda c: abs(c[i]))
            for c in live:
                if c is not pivot:
                    factor = c[i] // pivot[i]
                    for j in range(i, m):
                        c[j] -= factor * pivot[j]
            live = [c for c in live if c[i] != 0]
        if not live:
            raise ValueError(f"Cokernel is infinite: no pivot in row {i}")
        pivot = live[0]
        if pivot[i] < 0:
            pivot[:] = [-v for v in pivot]
        basis.append(pivot)
        columns = [c for c in columns if c is not pivot]
    return basis


def _reduce(v: List[int], basis: List[List[int]]) -> List[int]:
    """Canonical coset representative: 0 <= v[i] < h_i[i] for every i."""
    v = list(v)
    for i, h in enumerate(basis):
        factor = v[i] // h[i]
        if factor:
            for j in range(i, len(v)):
                v[j] -= factor * h[j]
    return v


def brute_force_torsion_counts(a: IntMatrix, limit: int = 1000) -> Dict[int, int]:
    """
    k -> #{x in Z^m / A Z^n : k x = 0} by enumeration, for every k dividing the order.

    The cosets are the boxes 0 <= x_i < h_i[i] of a triangular lattice
    basis, so the cost is linear in the cokernel order. Independent of the
    Smith form, used as its oracle.

    Raises:
        ValueError: if the cokernel is infinite or its order exceeds limit
    """
    basis = _lattice_basis(a)
    order = prod(h[i] for i, h in enumerate(basis))
    if order > limit:
        raise ValueError(f"Cokernel order {order} outside 1-{limit}")
    zero = [0] * a.nrows
    cosets = list(product(*(range(h[i]) for i, h in enumerate(basis))))
    counts = {}
    for k in (k for k in range(1, order + 1) if order % k == 0):
        counts[k] = sum(1 for x in cosets if _reduce([k * v for v in x], basis) == zero)
    return counts


@dataclass(frozen=True)
class KGroups:
    """K-theory and K-homology of one lens space."""

    K0: AbelianGroup
    K1: AbelianGroup
    K0_hom: AbelianGroup
    K1_hom: AbelianGroup
    K0_hom_basis: Optional[IntMatrix] = field(default=None, compare=False)

    def to_dict(self) -> Dict[str, Any]:
        record = {
            'K0': self.K0.to_dict(),
            'K1': self.K1.to_dict(),
            'K0_hom': self.K0_hom.to_dict(),
            'K1_hom': self.K1_hom.to_dict(),
        }
        if self.K0_hom_basis is not None:
            record['K0_hom_basis'] = self.K0_hom_basis.to_lists()
        return record

    def to_text(self) -> Dict[str, str]:
        return {'K0': self.K0.to_text(), 'K1': self.K1.to_text(),
                'K0_hom': self.K0_hom.to_text(), 'K1_hom': self.K1_hom.to_text()}


def gysin_kgroups(m: IntMatrix, d: int) -> KGroups:
    """
    K_0 = Coker(1 - M^d), K_1 = Ker(1 - M^d), and the transposed pair.

    K0_hom_basis holds a basis of Ker(1 - (M^t)^d) as columns.
    """
    if not m.is_square():
        raise ValueError(f"Non-square matrix {m.shape}")
    if d < 1:
        raise ValueError(f"Invalid d={d} (must be >= 1)")
    one = IntMatrix.identity(m.nrows)
    forward = one - matrix_power(m, d)
    backward = one - matrix_power(m.T, d)
    groups = KGroups(
        K0=cokernel(forward),
        K1=AbelianGroup(kernel_rank(forward)),
        K0_hom=AbelianGroup(kernel_rank(backward)),
        K1_hom=cokernel(backward),
        K0_hom_basis=kernel_basis(backward),
    )
    logger.info(f"Gysin sequence for d={d}: K0={groups.K0}, K1={groups.K1}, "
                f"K^0={groups.K0_hom}, K^1={groups.K1_hom}")
    return groups


def expected_kgroups(l: int, d: int) -> KGroups:
    """K0 = Z^l + Z/d, K1 = Z^l, K^0 = Z^l, K^1 = Z^l + Z/d (Z/1 dropped)."""
    if l < 1 or d < 1:
        raise ValueError(f"Invalid (l, d) = ({l}, {d}) (both must be >= 1)")
    torsion = (d,) if d > 1 else ()
    return KGroups(
        K0=AbelianGroup(l, torsion),
        K1=AbelianGroup(l),
        K0_hom=AbelianGroup(l),
        K1_hom=AbelianGroup(l, torsion),
    )


def base_kgroups(l: int) -> Dict[str, AbelianGroup]:
    """K-theory of the weighted projective line: K_0 = Z^(l+1), K_1 = 0."""
    return {'K0': AbelianGroup(l + 1), 'K1': AbelianGroup(0)}


def closed_form_matrix(l: int) -> IntMatrix:
    """The pairing matrix I + N0 as an IntMatrix."""
    return IntMatrix.from_rows(closed_form_M(l))


def nilpotent_part(l: int) -> IntMatrix:
    """N0: ones in column 0 of rows 1..l."""
    return IntMatrix.from_rows([[1 if (j == 0 and i >= 1) else 0 for j in range(l + 1)]
                                for i in range(l + 1)])


def transpose_duality(groups: KGroups) -> List[str]:
    """Names of the universal-coefficient shadows that fail (empty when all hold)."""
    failures = []
    if groups.K0.rank != groups.K0_hom.rank:
        failures.append('rank K0 == rank K^0')
    if groups.K0.torsion != groups.K1_hom.torsion:
        failures.append('torsion K0 == torsion K^1')
    return failures
