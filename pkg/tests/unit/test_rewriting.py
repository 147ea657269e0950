"""Unit tests for the rewriting engine and its soundness suites."""
import pytest

from src.errors import WordError
from src.ncalg.laurent import q_power
from src.ncalg.ncpoly import NCPoly, Z0, Z0S, Z1, Z1S, normal_form
from src.ncalg.rewriting import (
    RULES, Rule, check_confluence, check_relation_soundness, check_rule_soundness,
    corrupt_rule, defining_relations, find_matches, random_words, rewrite, rule_table,
    star_word_check,
)


@pytest.mark.unit
class TestRewrite:

    @pytest.mark.parametrize('strategy', ['leftmost', 'rightmost', 'random'])
    def test_strategies_agree_with_closed_form(self, strategy):
        for word in random_words(60, 7, seed=3):
            assert rewrite(word, strategy=strategy, seed=9) == normal_form(word)

    def test_bridge_reduces_z0_w_z0s(self):
        word = (Z0, Z1, Z1S, Z0S)
        assert find_matches(word, rule_table())
        assert rewrite(word) == normal_form(word)

    def test_irreducible_words_are_basis_words(self):
        word = (Z0, Z0, Z1, Z1S, Z1S)
        assert not find_matches(word, rule_table())
        assert rewrite(word) == NCPoly.basis(2, 1, 2)

    def test_empty_word_and_prefactor(self):
        assert rewrite(()) == 1
        assert rewrite((Z1, Z0), prefactor=q_power(1)) == NCPoly.basis(1, 1, 0)

    def test_unknown_letter(self):
        with pytest.raises(WordError):
            rewrite(('z0', 'w'))

    def test_invalid_strategy(self):
        with pytest.raises(ValueError, match='Invalid strategy'):
            rewrite((Z0,), strategy='outermost')

    def test_incomplete_table_leaves_non_basis_word(self):
        rules = tuple(r for r in RULES if r.name != 'z1s_z1')
        with pytest.raises(WordError):
            rewrite((Z1S, Z1), rules=rules)


@pytest.mark.unit
class TestSoundnessSuites:

    def test_rule_table_is_sound(self):
        results = check_rule_soundness()
        assert len(results) == len(RULES)
        assert all(results.values())

    def test_relations_hold(self):
        results = check_relation_soundness(pairs=20, seed=1)
        assert set(results) == {r.name for r in defining_relations()}
        assert all(results.values())

    def test_confluence_sample(self):
        assert check_confluence(count=120, max_length=8, seed=2) == []

    def test_star_compatibility(self):
        assert star_word_check(random_words(50, 6, seed=4))

    def test_corrupted_rule_is_named(self):
        broken = corrupt_rule(RULES, 'z1_z0', q_power(1))
        results = check_rule_soundness(broken)

        assert results['z1_z0'] is False
        assert [name for name, ok in results.items() if not ok] == ['z1_z0']

    def test_corrupted_rule_breaks_relations(self):
        broken = corrupt_rule(RULES, 'z0s_z0', q_power(2))
        results = check_relation_soundness(broken, pairs=5, seed=0)
        assert not all(results.values())

    def test_corrupt_unknown_rule(self):
        with pytest.raises(ValueError, match='Unknown rule'):
            corrupt_rule(RULES, 'z9_z9', 2)

    def test_rule_text(self):
        rule = rule_table()[(Z1, Z0)]
        assert isinstance(rule, Rule)
        assert rule.to_text() == 'z1 z0 -> (q^-1) z0 z1'


@pytest.mark.unit
class TestRandomWords:

    def test_seeded_and_bounded(self):
        first = random_words(25, 5, seed=8)
        assert first == random_words(25, 5, seed=8)
        assert all(len(w) <= 5 for w in first)
        assert first != random_words(25, 5, seed=9)
