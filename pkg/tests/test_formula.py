import pytest
from hypothesis import given, settings, strategies as st

from tracefpc.formula import (
    FALSE, TRUE, AndPos, NegAtom, OrNeg, Polarity, PosAtom, clause_to_conjunction,
    clause_to_disjunction, evaluate, is_positive, negate, polarity, variables,
)

P, N = PosAtom, NegAtom

atoms = st.builds(PosAtom, st.integers(1, 9)) | st.builds(NegAtom, st.integers(1, 9))
formulas = st.recursive(
    atoms | st.just(TRUE) | st.just(FALSE),
    lambda sub: st.builds(AndPos, sub, sub) | st.builds(OrNeg, sub, sub),
    max_leaves=40,
)
clauses = st.lists(st.integers(1, 9).flatmap(lambda v: st.sampled_from([v, -v])), min_size=1, max_size=6)


def test_polarity_examples():
    assert polarity(AndPos(P(1), P(2))) is Polarity.POSITIVE
    assert polarity(N(1)) is Polarity.NEGATIVE
    assert polarity(OrNeg(N(1), P(2))) is Polarity.NEGATIVE
    assert is_positive(TRUE) and not is_positive(FALSE)


def test_negate_examples():
    assert negate(P(3)) == N(3)
    assert negate(AndPos(P(1), N(2))) == OrNeg(N(1), P(2))
    assert negate(TRUE) == FALSE


def test_clause_to_conjunction():
    assert clause_to_conjunction([-1, 2, -4]) == AndPos(P(1), AndPos(N(2), P(4)))
    assert str(clause_to_conjunction([-1, 2, -4])) == "and(x(1),and(not(x(2)),x(4)))"
    assert clause_to_conjunction([1]) == N(1)
    assert clause_to_conjunction([1, 2]) == AndPos(N(1), N(2))
    with pytest.raises(ValueError):
        clause_to_conjunction([])


def test_clause_to_disjunction():
    assert clause_to_disjunction([-1, 2, -4]) == OrNeg(N(1), OrNeg(P(2), N(4)))
    assert str(clause_to_disjunction([-1, 2, -4])) == "or(not(x(1)),or(x(2),not(x(4))))"
    assert clause_to_disjunction([]) == FALSE
    assert clause_to_disjunction([1]) == P(1)


def test_not_a_formula():
    with pytest.raises(TypeError):
        polarity("x")
    with pytest.raises(TypeError):
        negate(3)


@settings(max_examples=1000)
@given(formulas)
def test_negate_involution_and_polarity_flip(f):
    assert negate(negate(f)) == f
    assert polarity(negate(f)) != polarity(f)


@given(formulas, st.lists(st.booleans(), min_size=10, max_size=10))
def test_negate_is_semantic_negation(f, bits):
    assignment = dict(enumerate(bits))
    assert evaluate(negate(f), assignment) == (not evaluate(f, assignment))


@given(clauses)
def test_conjunction_is_negated_disjunction(c):
    assert clause_to_conjunction(c) == negate(clause_to_disjunction(c))


@given(clauses)
def test_translators_nest_right(c):
    for f, conn in ((clause_to_conjunction(c), AndPos), (clause_to_disjunction(c), OrNeg)):
        depth = 0
        while isinstance(f, conn):
            assert not isinstance(f.left, (AndPos, OrNeg))
            f = f.right
            depth += 1
        assert depth == len(c) - 1
        assert variables(clause_to_disjunction(c)) == {abs(l) for l in c}
