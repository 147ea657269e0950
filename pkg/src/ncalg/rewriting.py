"""
String rewriting over the letters z0, z1, z1s, z0s.

The rule table orients the defining relations of O(S_q^3) towards the
order z0 < z1 < z1s < z0s. Irreducible words are z0^a z1^r z1s^s z0s^t
with a*t = 0, i.e. exactly the PBW basis.
"""
from dataclasses import dataclass, replace
from functools import partial
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple
import logging
import random

from src.errors import ResourceLimitError, WordError
from src.ncalg.laurent import LaurentPoly, Scalar, q_power
from src.ncalg.ncpoly import (
    LETTERS, Monomial, NCPoly, Z0, Z0S, Z1, Z1S, normal_form, word_star,
)

logger = logging.getLogger(__name__)

Word = Tuple[str, ...]
Side = Tuple[Tuple[LaurentPoly, Word], ...]

STRATEGIES = ('leftmost', 'rightmost', 'random')

DEFAULT_MAX_STEPS = 1_000_000


@dataclass(frozen=True)
class Rule:
    """Oriented relation lhs -> sum of coefficient * word."""

    name: str
    lhs: Word
    rhs: Side

    def to_text(self) -> str:
        return f"{' '.join(self.lhs)} -> {side_to_text(self.rhs)}"


@dataclass(frozen=True)
class Relation:
    """Defining relation lhs = rhs, both sides linear combinations of words."""

    name: str
    lhs: Side
    rhs: Side


def _side(*terms: Tuple[Scalar, Sequence[str]]) -> Side:
    return tuple((LaurentPoly.coerce(c), tuple(w)) for c, w in terms)


def side_to_text(side: Side) -> str:
    parts = [f"({c.to_text()}) {' '.join(w) or '1'}" for c, w in side]
    return ' + '.join(parts) if parts else '0'


RULES: Tuple[Rule, ...] = (
    Rule('z1s_z1', (Z1S, Z1), _side((1, (Z1, Z1S)))),
    Rule('z1_z0', (Z1, Z0), _side((q_power(-1), (Z0, Z1)))),
    Rule('z1s_z0', (Z1S, Z0), _side((q_power(-1), (Z0, Z1S)))),
    Rule('z0s_z1', (Z0S, Z1), _side((q_power(-1), (Z1, Z0S)))),
    Rule('z0s_z1s', (Z0S, Z1S), _side((q_power(-1), (Z1S, Z0S)))),
    Rule('z0_z0s', (Z0, Z0S), _side((1, ()), (-1, (Z1, Z1S)))),
    Rule('z0s_z0', (Z0S, Z0), _side((1, ()), (q_power(-2) * -1, (Z1, Z1S)))),
)


def rule_table(rules: Iterable[Rule] = RULES) -> Dict[Word, Rule]:
    return {rule.lhs: rule for rule in rules}


def corrupt_rule(rules: Sequence[Rule], name: str, factor: Scalar) -> Tuple[Rule, ...]:
    """
    Copy of the table with every rhs coefficient of one rule scaled by factor.

    Used to check that the soundness suites notice a broken rule.
    """
    factor = LaurentPoly.coerce(factor)
    if name not in {rule.name for rule in rules}:
        raise ValueError(f"Unknown rule: {name}")
    return tuple(
        replace(rule, rhs=tuple((c * factor, w) for c, w in rule.rhs))
        if rule.name == name else rule
        for rule in rules
    )


def defining_relations() -> List[Relation]:
    """Relations of O(S_q^3) for n = 1, including the starred forms."""
    q = q_power(1)
    return [
        Relation('z0_z1', _side((1, (Z0, Z1))), _side((q, (Z1, Z0)))),
        Relation('z0_z1s', _side((1, (Z0, Z1S))), _side((q, (Z1S, Z0)))),
        Relation('z1_z0s', _side((1, (Z1, Z0S))), _side((q, (Z0S, Z1)))),
        Relation('z1s_z0s', _side((1, (Z1S, Z0S))), _side((q, (Z0S, Z1S)))),
        Relation('z1_normal', _side((1, (Z1, Z1S))), _side((1, (Z1S, Z1)))),
        Relation('z0_normal', _side((1, (Z0, Z0S))),
                 _side((1, (Z0S, Z0)), (q_power(-2) - 1, (Z1, Z1S)))),
        Relation('sphere', _side((1, (Z0, Z0S)), (1, (Z1, Z1S))), _side((1, ()))),
    ]


# -- matching -----------------------------------------------------------

@dataclass(frozen=True)
class _Match:
    start: int
    end: int
    rhs: Side


def _bridge(word: Word, start: int, table: Dict[Word, Rule]) -> Optional[_Match]:
    """
    Match z0 w z0s with w a nonempty word in z1, z1s.

    z0 is carried across w with the inverse commutation coefficients from
    the table, then the z0 z0s rule fires.
    """
    end = start + 1
    while end < len(word) and word[end] in (Z1, Z1S):
        end += 1
    if end == start + 1 or end >= len(word) or word[end] != Z0S:
        return None
    closing = table.get((Z0, Z0S))
    if closing is None:
        return None
    middle = word[start + 1:end]
    coefficient = LaurentPoly(1)
    for letter in middle:
        swap = table.get((letter, Z0))
        if swap is None or len(swap.rhs) != 1 or swap.rhs[0][1] != (Z0, letter):
            return None
        coefficient = coefficient * swap.rhs[0][0].inverse()
    rhs = tuple((coefficient * c, middle + w) for c, w in closing.rhs)
    return _Match(start, end + 1, rhs)


def find_matches(word: Word, table: Dict[Word, Rule]) -> List[_Match]:
    """All rule applications available in a word, in position order."""
    matches = []
    for i in range(len(word) - 1):
        rule = table.get(word[i:i + 2])
        if rule is not None:
            matches.append(_Match(i, i + 2, rule.rhs))
        elif word[i] == Z0:
            bridge = _bridge(word, i, table)
            if bridge is not None:
                matches.append(bridge)
    return matches


def _irreducible_to_monomial(word: Word) -> Monomial:
    counts = {letter: 0 for letter in LETTERS}
    for letter in word:
        counts[letter] += 1
    a, r, s, t = (counts[letter] for letter in LETTERS)
    expected = (Z0,) * a + (Z1,) * r + (Z1S,) * s + (Z0S,) * t
    if word != expected or (a and t):
        raise WordError(f"Irreducible word is not a basis word: {' '.join(word)}")
    return Monomial(a - t, r, s)


def _validate(word: Sequence[str]) -> Word:
    word = tuple(word)
    for letter in word:
        if letter not in LETTERS:
            raise WordError(f"Unknown letter: {letter!r}")
    return word


def rewrite(word: Sequence[str],
            rules: Sequence[Rule] = RULES,
            strategy: str = 'leftmost',
            seed: Optional[int] = None,
            prefactor: Scalar = 1,
            max_steps: int = DEFAULT_MAX_STEPS) -> NCPoly:
    """
    Reduce prefactor * word to normal form by explicit rule application.

    Args:
        word: Letters from {'z0', 'z1', 'z1s', 'z0s'}
        rules: Rule table (replaceable for soundness experiments)
        strategy: 'leftmost', 'rightmost' or 'random'
        seed: Seed for the random strategy
        prefactor: Laurent scalar multiplying the word
        max_steps: Bound on single rewrite steps

    Returns:
        The normal form as an NCPoly

    Raises:
        WordError: on unknown letters or a table that leaves non-basis words
        ResourceLimitError: if max_steps is exceeded
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"Invalid strategy: {strategy}. Must be one of {STRATEGIES}")
    table = rule_table(rules)
    rng = random.Random(seed)
    pending: Dict[Word, LaurentPoly] = {_validate(word): LaurentPoly.coerce(prefactor)}
    result: Dict[Monomial, LaurentPoly] = {}
    steps = 0

    while pending:
        current, coefficient = pending.popitem()
        if coefficient.is_zero():
            continue
        matches = find_matches(current, table)
        if not matches:
            m = _irreducible_to_monomial(current)
            result[m] = result.get(m, LaurentPoly()) + coefficient
            continue

        if strategy == 'leftmost':
            match = matches[0]
        elif strategy == 'rightmost':
            match = matches[-1]
        else:
            match = rng.choice(matches)

        prefix, suffix = current[:match.start], current[match.end:]
        for c, w in match.rhs:
            successor = prefix + w + suffix
            pending[successor] = pending.get(successor, LaurentPoly()) + coefficient * c

        steps += 1
        if steps > max_steps:
            raise ResourceLimitError(f"Rewriting exceeded {max_steps} steps")

    return NCPoly(result)


def evaluate_side(side: Side, reducer: Callable[[Word], NCPoly],
                  left: Word = (), right: Word = ()) -> NCPoly:
    """Normal form of left * side * right using the given word reducer."""
    total = NCPoly()
    for c, w in side:
        total = total + reducer(left + w + right) * c
    return total


# -- soundness suites ---------------------------------------------------

def random_words(count: int, max_length: int, seed: int) -> List[Word]:
    """Seeded random letter words with lengths 0..max_length."""
    rng = random.Random(seed)
    return [tuple(rng.choice(LETTERS) for _ in range(rng.randint(0, max_length)))
            for _ in range(count)]


def check_rule_soundness(rules: Sequence[Rule] = RULES) -> Dict[str, bool]:
    """
    Compare both sides of each rule under the closed-form normal form.

    Returns:
        rule name -> True when lhs and rhs agree
    """
    results = {}
    for rule in rules:
        lhs = normal_form(rule.lhs)
        rhs = evaluate_side(rule.rhs, normal_form)
        results[rule.name] = lhs == rhs
        if not results[rule.name]:
            logger.error(f"Rule {rule.name} is unsound: {rule.to_text()}")
    return results


def check_relation_soundness(rules: Sequence[Rule] = RULES,
                             pairs: int = 50,
                             max_length: int = 4,
                             seed: int = 0) -> Dict[str, bool]:
    """
    Check normal(u lhs v) == normal(u rhs v) for every defining relation.

    Both sides are reduced with the rewriting engine over the given table.
    """
    reducer = partial(rewrite, rules=rules)
    contexts = list(zip(random_words(pairs, max_length, seed),
                        random_words(pairs, max_length, seed + 1)))
    results = {}
    for relation in defining_relations():
        ok = True
        for u, v in [((), ())] + contexts:
            if evaluate_side(relation.lhs, reducer, u, v) != evaluate_side(relation.rhs, reducer, u, v):
                logger.debug(f"Relation {relation.name} fails in context {u} . {v}")
                ok = False
                break
        results[relation.name] = ok
    return results


def check_confluence(rules: Sequence[Rule] = RULES,
                     count: int = 500,
                     max_length: int = 10,
                     seed: int = 0) -> List[Word]:
    """
    Reduce random words leftmost-first, rightmost-first and in closed form.

    Returns:
        Words on which the three normal forms disagree (empty when confluent)
    """
    failures = []
    for word in random_words(count, max_length, seed):
        left = rewrite(word, rules=rules, strategy='leftmost')
        right = rewrite(word, rules=rules, strategy='rightmost')
        if left != right or left != normal_form(word):
            failures.append(word)
    if failures:
        logger.error(f"Confluence failed on {len(failures)} of {count} words")
    return failures


def star_word_check(words: Iterable[Word]) -> bool:
    """star(normal(w)) == normal(w*) for each word."""
    return all(normal_form(w).star() == normal_form(word_star(w)) for w in words)
