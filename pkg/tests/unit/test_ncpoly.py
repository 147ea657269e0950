"""Unit tests for normal forms, products and the weighted grading."""
from math import gcd

import pytest

from src.errors import ResourceLimitError, WordError
from src.ncalg.laurent import q_power
from src.ncalg.ncpoly import (
    MAX_TERMS, Monomial, NCPoly, UNIT, Z0, Z0S, Z1, Z1S, a_element, b_element, b_power, charge,
    current_term_budget, lens_membership, multiply, normal_form, leftmost_basis_factor,
    spectral_projection, term_budget, word_charge, word_star, weight_components,
)
from src.ncalg.rewriting import RULES, random_words

COPRIME_WEIGHTS = [(k, l) for k in range(1, 5) for l in range(1, 5) if gcd(k, l) == 1]


@pytest.mark.unit
class TestMonomial:

    def test_word_keeps_z0s_rightmost(self):
        assert Monomial(2, 1, 0).word() == (Z0, Z0, Z1)
        assert Monomial(-2, 0, 1).word() == (Z1S, Z0S, Z0S)

    def test_negative_exponents_rejected(self):
        with pytest.raises(ValueError):
            Monomial(0, -1, 0)

    def test_to_text(self):
        assert UNIT.to_text() == '1'
        assert Monomial(1, 2, 0).to_text() == 'z0^1 z1^2'
        assert Monomial(-3, 0, 1).to_text() == 'z1s^1 z0s^3'


@pytest.mark.unit
class TestNormalForm:

    def test_commutation_relations(self):
        assert normal_form([Z1, Z0]) == NCPoly.basis(1, 1, 0, q_power(-1))
        assert normal_form([Z1S, Z0]) == NCPoly.basis(1, 0, 1, q_power(-1))
        assert normal_form([Z0S, Z1]) == NCPoly.basis(-1, 1, 0, q_power(-1))
        assert normal_form([Z1S, Z1]) == b_element()

    def test_sphere_relations(self):
        b = b_element()
        assert normal_form([Z0, Z0S]) == 1 - b
        assert normal_form([Z0S, Z0]) == 1 - b * q_power(-2)
        assert normal_form([Z0, Z0S]) + normal_form([Z1, Z1S]) == 1

    def test_basis_words_are_fixed(self):
        for m in (Monomial(3, 1, 2), Monomial(-2, 2, 0), UNIT):
            assert normal_form(m.word()) == NCPoly({m: 1})

    def test_prefactor(self):
        assert normal_form([Z1], prefactor=q_power(2)) == NCPoly.basis(0, 1, 0, q_power(2))
        assert normal_form([Z1], prefactor=0).is_zero()

    def test_unknown_letter(self):
        with pytest.raises(WordError):
            normal_form(['z2'])

    def test_multiply_matches_word_concatenation(self):
        words = random_words(30, 5, seed=11)
        for u, v in zip(words, words[1:]):
            assert multiply(normal_form(u), normal_form(v)) == normal_form(u + v)

    def test_multiply_is_associative(self):
        x = normal_form([Z0S, Z1]) + normal_form([Z0])
        y = normal_form([Z0, Z0, Z1S]) - 2
        z = b_element() + normal_form([Z0S])
        assert (x * y) * z == x * (y * z)

    def test_multiply_respects_budget(self):
        x = (1 + b_element()) ** 3
        with pytest.raises(ResourceLimitError):
            multiply(x, x, max_terms=2)

    def test_term_budget_applies_inside_block(self):
        x = (1 + b_element()) ** 3
        with term_budget(1):
            assert current_term_budget() == 1
            with pytest.raises(ResourceLimitError):
                multiply(x, x)
            with pytest.raises(ResourceLimitError, match='exceeded 1 monomials'):
                normal_form([Z0, Z0S])
        assert current_term_budget() == MAX_TERMS
        assert len(normal_form([Z0, Z0S])) == 2

    def test_explicit_max_terms_overrides_block(self):
        x = 1 + b_element()
        with term_budget(1):
            assert len(multiply(x, x, max_terms=10)) == 3

    def test_invalid_term_budget(self):
        with pytest.raises(ValueError, match='Invalid max_terms'):
            with term_budget(0):
                pass

    def test_star_matches_reversed_word(self):
        for w in random_words(40, 6, seed=5):
            assert normal_form(w).star() == normal_form(word_star(w))

    def test_to_text(self):
        assert NCPoly().to_text() == '0'
        x = NCPoly.basis(-2, 1, 0, q_power(-1)) + NCPoly.basis(1, 0, 0)
        assert x.to_text() == '(q^-1) * z1^1 z0s^2 + (1) * z0^1'


@pytest.mark.unit
class TestGrading:

    def test_charges(self):
        assert charge(Monomial(1, 0, 0), 2, 3) == 2
        assert charge(Monomial(0, 1, 0), 2, 3) == 3
        assert charge(Monomial(-1, 0, 2), 2, 3) == -8
        assert word_charge([Z0, Z0, Z0, Z1S, Z1S], 2, 3) == 0

    def test_generators_have_charge_zero(self):
        for k, l in ((1, 1), (2, 3), (3, 5)):
            assert lens_membership(a_element(k, l), k, l, 1)
            assert lens_membership(b_power(2), k, l, 4)

    def test_lens_membership(self):
        assert not lens_membership(normal_form([Z0]), 2, 3, 1)
        assert lens_membership(normal_form([Z0] * 6), 2, 3, 2)
        assert not lens_membership(normal_form([Z0] * 6), 2, 3, 3)
        with pytest.raises(ValueError):
            lens_membership(b_element(), 2, 3, 0)

    def test_weight_components_sum_back(self):
        x = normal_form([Z0, Z1S]) + normal_form([Z1]) + b_element() + normal_form([Z0S, Z0S])
        parts = weight_components(x, 2, 3)

        assert sum(parts.values(), NCPoly()) == x
        assert set(parts) == {-1, 3, 0, -4}

    def test_spectral_projection(self):
        x = normal_form([Z1S, Z1S]) + normal_form([Z0S] * 3) + b_element()
        # charge -kl = -6 is degree 1
        assert spectral_projection(x, 1, 2, 3) == normal_form([Z1S, Z1S]) + normal_form([Z0S] * 3)
        assert spectral_projection(x, 0, 2, 3) == b_element()

    def test_leftmost_basis_factor(self):
        assert leftmost_basis_factor(Monomial(2, 1, 1)) == 1
        assert leftmost_basis_factor(Monomial(-2, 1, 1)) == q_power(-4)
        word = (Z0S, Z0S, Z1, Z1S)
        m = Monomial(-2, 1, 1)
        assert normal_form(word) == NCPoly({m: leftmost_basis_factor(m)})

    @pytest.mark.parametrize('k,l', COPRIME_WEIGHTS)
    def test_rewrite_rules_conserve_charge(self, k, l):
        for rule in RULES:
            lhs = word_charge(rule.lhs, k, l)
            for _, word in rule.rhs:
                assert word_charge(word, k, l) == lhs, rule.name
            for m in normal_form(rule.lhs).monomials():
                assert charge(m, k, l) == lhs, rule.name

    @pytest.mark.parametrize('k,l', [(1, 1), (2, 3), (3, 4)])
    def test_product_charge_is_additive(self, k, l):
        grid = [Monomial(p, r, s) for p in (-2, -1, 0, 1, 2) for r in (0, 1) for s in (0, 2)]
        for m1 in grid:
            for m2 in grid:
                product = multiply(NCPoly.basis(m1.p, m1.r, m1.s), NCPoly.basis(m2.p, m2.r, m2.s))
                expected = charge(m1, k, l) + charge(m2, k, l)
                assert {charge(m, k, l) for m in product.monomials()} <= {expected}
