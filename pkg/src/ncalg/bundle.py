"""
Principal-bundle certificates for O(L_q(dlk; k, l)) over O(W_q(k, l)).

The certificate elements xi, eta, alpha, beta satisfy
sum xi_j eta_j = 1 = sum alpha_i beta_i, which makes the charge -kl and
+kl components finitely generated projective modules.
"""
from dataclasses import dataclass
from itertools import product
from math import comb, gcd
from typing import Dict, List, Sequence, Tuple
import logging

from src.ncalg.laurent import LaurentPoly, q_power
from src.ncalg.ncpoly import (
    NCPoly, Z0, Z0S, Z1, Z1S, a_element, b_element, charge, multiply, normal_form,
)
from src.ncalg.polynomial import Polynomial

logger = logging.getLogger(__name__)

Matrix = List[List[NCPoly]]


def _check_coprime(k: int, l: int):
    if k < 1 or l < 1:
        raise ValueError(f"Invalid weights k={k}, l={l} (must be >= 1)")
    if gcd(k, l) != 1:
        raise ValueError(f"Weights k={k}, l={l} are not coprime")


def poly_F(l: int) -> Polynomial:
    """F(X) = (1 - prod_{m=1}^{l} (1 - q^{-2m} X)) / X."""
    return (Polynomial([1]) - Polynomial.linear_product(-2 * m for m in range(1, l + 1))).divide_by_x()


def poly_Ftilde(l: int) -> Polynomial:
    """F~(X) = (1 - prod_{m=0}^{l-1} (1 - q^{2m} X)) / X."""
    return (Polynomial([1]) - Polynomial.linear_product(2 * m for m in range(l))).divide_by_x()


def poly_G(k: int) -> Polynomial:
    """G(X) = (1 - (1 - X)^k) / X."""
    return Polynomial((-1) ** j * comb(k, j + 1) for j in range(k))


@dataclass(frozen=True)
class BundleCertificate:
    k: int
    l: int
    xi: Tuple[NCPoly, ...]
    eta: Tuple[NCPoly, ...]
    alpha: Tuple[NCPoly, ...]
    beta: Tuple[NCPoly, ...]
    power: int = 1

    def charges(self) -> Dict[str, List[set]]:
        """Charges occurring in each element, keyed by list name."""
        return {
            name: [{charge(m, self.k, self.l) for m in x.monomials()} for x in getattr(self, name)]
            for name in ('xi', 'eta', 'alpha', 'beta')
        }


def bundle_generators(k: int, l: int) -> BundleCertificate:
    """
    Certificate elements for coprime weights (k, l).

    xi_1 = z1s^k F(b)^k, eta_1 = z1^k, xi_2 = z0s^l G(z0^l z0s^l), eta_2 = z0^l;
    alpha_1 = z1^k F~(b)^k, beta_1 = z1s^k, alpha_2 = z0^l G(z0s^l z0^l),
    beta_2 = z0s^l.

    Raises:
        ValueError: if k and l are not coprime
    """
    _check_coprime(k, l)
    b = b_element()
    z0_l = normal_form([Z0] * l)
    z0s_l = normal_form([Z0S] * l)
    z1_k = normal_form([Z1] * k)
    z1s_k = normal_form([Z1S] * k)

    f_b = poly_F(l).substitute(b)
    ftilde_b = poly_Ftilde(l).substitute(b)
    g = poly_G(k)

    xi1 = z1s_k * (f_b ** k)
    xi2 = z0s_l * g.substitute(z0_l * z0s_l)
    alpha1 = z1_k * (ftilde_b ** k)
    alpha2 = z0_l * g.substitute(z0s_l * z0_l)

    cert = BundleCertificate(
        k=k, l=l,
        xi=(xi1, xi2), eta=(z1_k, z0_l),
        alpha=(alpha1, alpha2), beta=(z1s_k, z0s_l),
    )
    logger.debug(f"Built bundle certificate for (k, l) = ({k}, {l})")
    return cert


def _sum_of_products(left: Sequence[NCPoly], right: Sequence[NCPoly]) -> NCPoly:
    total = NCPoly()
    for x, y in zip(left, right):
        total = total + multiply(x, y)
    return total


def verify_partition_of_unity(cert: BundleCertificate) -> bool:
    """True iff sum xi_j eta_j and sum alpha_i beta_i both reduce to 1."""
    if len(cert.xi) != len(cert.eta) or len(cert.alpha) != len(cert.beta):
        return False
    first = _sum_of_products(cert.xi, cert.eta) == 1
    second = _sum_of_products(cert.alpha, cert.beta) == 1
    if first and second:
        logger.info(f"Partition of unity verified for (k, l) = ({cert.k}, {cert.l}), power {cert.power}")
    else:
        logger.error(f"Partition of unity failed for (k, l) = ({cert.k}, {cert.l}): "
                     f"xi.eta={'ok' if first else 'FAIL'}, alpha.beta={'ok' if second else 'FAIL'}")
    return first and second


def _ordered_product(factors: Sequence[NCPoly]) -> NCPoly:
    result = NCPoly.one()
    for f in factors:
        result = multiply(result, f)
    return result


def power_certificate(cert: BundleCertificate, d: int) -> BundleCertificate:
    """
    Certificate for the d-th tensor power of the line module.

    xi_J = xi_{j1} ... xi_{jd} and eta_J = eta_{jd} ... eta_{j1}, so the sum
    over J telescopes to 1; alpha_I and beta_I likewise.
    """
    if d < 1:
        raise ValueError(f"Invalid power d={d} (must be >= 1)")
    if d == 1:
        return cert

    def build(left: Sequence[NCPoly], right: Sequence[NCPoly]):
        lefts, rights = [], []
        for index in product(range(len(left)), repeat=d):
            lefts.append(_ordered_product([left[j] for j in index]))
            rights.append(_ordered_product([right[j] for j in reversed(index)]))
        return tuple(lefts), tuple(rights)

    xi, eta = build(cert.xi, cert.eta)
    alpha, beta = build(cert.alpha, cert.beta)
    return BundleCertificate(k=cert.k, l=cert.l, xi=xi, eta=eta, alpha=alpha, beta=beta,
                             power=cert.power * d)


def line_idempotent(cert: BundleCertificate, sign: int) -> Matrix:
    """
    Idempotent matrix of the line module of charge sign * kl.

    sign +1: E_ij = eta_i xi_j. sign -1: E_ij = beta_i alpha_j.
    """
    if sign == 1:
        left, right = cert.eta, cert.xi
    elif sign == -1:
        left, right = cert.beta, cert.alpha
    else:
        raise ValueError(f"Invalid sign: {sign} (must be +1 or -1)")
    return [[multiply(x, y) for y in right] for x in left]


def matrix_multiply(a: Matrix, b: Matrix) -> Matrix:
    n, inner, m = len(a), len(b), len(b[0]) if b else 0
    return [[_sum_of_products([a[i][t] for t in range(inner)], [b[t][j] for t in range(inner)])
             for j in range(m)] for i in range(n)]


def is_idempotent(e: Matrix) -> bool:
    return matrix_multiply(e, e) == e


def q_binomial(l: int, m: int) -> LaurentPoly:
    """
    Gaussian binomial [l choose m]_{q^2}.

    Extracted from prod_{j=1}^{l} (1 + q^{2(j-1)} Y), whose Y^m coefficient
    is q^{m(m-1)} [l choose m]_{q^2}.

    Raises:
        ValueError: unless 0 <= m <= l
    """
    if l < 0 or not 0 <= m <= l:
        raise ValueError(f"Invalid q-binomial arguments: l={l}, m={m}")
    generating = Polynomial([1])
    for j in range(1, l + 1):
        generating = generating * Polynomial([1, q_power(2 * (j - 1))])
    return generating.coefficient(m).shift(-m * (m - 1))


def b_product(exponents) -> NCPoly:
    """prod over e of (1 - q^e b) in normal form."""
    return Polynomial.linear_product(exponents).substitute(b_element())


def commutator_expansion(l: int) -> NCPoly:
    """sum_{m=0}^{l} (-1)^m q^{m(m-1)} [l choose m]_{q^2} (1 - q^{-2ml}) b^m."""
    total = NCPoly()
    for m in range(l + 1):
        coefficient = q_binomial(l, m).shift(m * (m - 1)) * (1 - q_power(-2 * m * l)) * (-1) ** m
        total = total + NCPoly.basis(0, m, m, coefficient)
    return total


def commutator_expansion_check(l: int) -> bool:
    """[z0^l, z0s^l] against its q-binomial expansion in b."""
    if l < 1:
        raise ValueError(f"Invalid l={l} (must be >= 1)")
    commutator = normal_form([Z0] * l + [Z0S] * l) - normal_form([Z0S] * l + [Z0] * l)
    return commutator == commutator_expansion(l)


def wq_commutation_details(l: int) -> Dict[str, bool]:
    if l < 1:
        raise ValueError(f"Invalid l={l} (must be >= 1)")
    b = b_element()
    z0 = NCPoly.letter(Z0)
    return {
        'z0s_power_z0_power': normal_form([Z0S] * l + [Z0] * l) == b_product(-2 * m for m in range(1, l + 1)),
        'z0_power_z0s_power': normal_form([Z0] * l + [Z0S] * l) == b_product(2 * m for m in range(l)),
        'pull_through': (z0 * b - (b * z0) * q_power(2)).is_zero(),
    }


def wq_commutation_check(l: int) -> bool:
    """Both product identities for z0s^l z0^l, z0^l z0s^l and z0 b = q^2 b z0."""
    return all(wq_commutation_details(l).values())


def verify_wq_relations(k: int, l: int) -> Dict[str, bool]:
    """
    Relations of the generators a = z0^l z1s^k and b = z1 z1s.

    Returns:
        relation name -> True when it holds exactly
    """
    _check_coprime(k, l)
    a, b = a_element(k, l), b_element()
    b_k = NCPoly.basis(0, k, k)
    return {
        'b_selfadjoint': b.star() == b,
        'b_a': b * a == (a * b) * q_power(-2 * l),
        'a_astar': a * a.star() == (b_k * b_product(2 * m for m in range(l))) * q_power(2 * k * l),
        'astar_a': a.star() * a == b_k * b_product(-2 * m for m in range(1, l + 1)),
    }
