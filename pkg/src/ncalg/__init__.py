"""Exact symbolic model of O(S_q^3) and its weighted grading."""
from src.ncalg.laurent import LaurentPoly, q_power
from src.ncalg.ncpoly import (
    Monomial, NCPoly, charge, lens_membership, multiply, normal_form,
    leftmost_basis_factor, spectral_projection, star, term_budget, weight_components,
)
from src.ncalg.rewriting import RULES, Rule, defining_relations, rewrite
from src.ncalg.bundle import (
    BundleCertificate, bundle_generators, commutator_expansion_check, is_idempotent,
    line_idempotent, poly_F, poly_Ftilde, poly_G, power_certificate, q_binomial,
    verify_partition_of_unity, verify_wq_relations, wq_commutation_check,
)

__all__ = [
    'LaurentPoly', 'q_power', 'Monomial', 'NCPoly', 'charge', 'lens_membership',
    'multiply', 'normal_form', 'leftmost_basis_factor', 'spectral_projection', 'star', 'term_budget',
    'weight_components', 'RULES', 'Rule', 'defining_relations', 'rewrite',
    'BundleCertificate', 'bundle_generators', 'commutator_expansion_check',
    'is_idempotent', 'line_idempotent', 'poly_F', 'poly_Ftilde', 'poly_G',
    'power_certificate', 'q_binomial', 'verify_partition_of_unity',
    'verify_wq_relations', 'wq_commutation_check',
]
