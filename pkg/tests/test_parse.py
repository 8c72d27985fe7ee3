import pytest
from hypothesis import given, strategies as st

from tracefpc.parse import (
    Chain, CnfProblem, ParseError, TraceFile, cnf_from_trace, parse_dimacs, parse_trace,
    serialize_dimacs, serialize_trace, validate_against_cnf,
)

from conftest import FIG2_TEXT

FIG2_CNF = "p cnf 2 4\n1 2 0\n-1 2 0\n1 -2 0\n-1 -2 0"


def test_single_chain():
    t = parse_trace("3 1 -2 0 1 2 0")
    assert t.chains == (Chain(3, (1, -2), (1, 2)),)


def test_fig2(fig2):
    assert len(fig2.chains) == 6
    assert all(c.antecedents == () for c in fig2.chains[:4])
    assert fig2.chains[4] == Chain(5, (1,), (3, 1))
    assert fig2.chains[5] == Chain(6, (), (4, 2, 5))
    assert [c.index for c in fig2.originals] == [1, 2, 3, 4]
    assert [c.index for c in fig2.derived] == [5, 6]


def test_empty_and_implicit():
    assert parse_trace("").chains == ()
    (ch,) = parse_trace("5 * 3 1 0").chains
    assert ch.is_implicit and ch.literals is None and ch.antecedents == (3, 1)
    assert str(ch) == "5 * 3 1 0"


def test_tokens_may_span_lines():
    assert parse_trace("3 1\n -2 0\t1\n2 0\n") == parse_trace("3 1 -2 0 1 2 0")


@pytest.mark.parametrize("text,line", [
    ("1 1 2 0", 1),
    ("1 1 x 0 0", 1),
    ("1 1 0 0\n1 2 0 0", 2),
    ("5 * 0", 1),
    ("5 1 0 -3 0", 1),
    ("0 1 0 0", 1),
    ("\n\n3 1 0 2", 3),
])
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as ei:
        parse_trace(text)
    assert ei.value.line == line


def test_round_trip(fig2):
    assert parse_trace(serialize_trace(fig2)) == fig2
    assert parse_trace(FIG2_TEXT.encode()) == fig2


chains = st.lists(
    st.tuples(
        st.lists(st.integers(-9, 9).filter(bool), max_size=4),
        st.lists(st.integers(1, 30), max_size=4),
        st.booleans(),
    ),
    max_size=8,
)


@given(chains)
def test_round_trip_property(spec):
    t = TraceFile(tuple(
        Chain(i, None if star and ants else tuple(lits), tuple(ants))
        for i, (lits, ants, star) in enumerate(spec, start=1)
    ))
    back = parse_trace(serialize_trace(t))
    assert back == t
    assert [c.antecedents for c in back.chains] == [c.antecedents for c in t.chains]


def test_dimacs():
    p = parse_dimacs(FIG2_CNF)
    assert p.num_vars == 2
    assert p.clauses == ((1, 2), (-1, 2), (1, -2), (-1, -2))
    q = parse_dimacs("c x\np cnf 1 1\n1 0")
    assert (q.num_vars, q.clauses) == (1, ((1,),))
    assert parse_dimacs(serialize_dimacs(p)) == p


@pytest.mark.parametrize("text", [
    "p cnf 1 2\n1 0",
    "p cnf x 1\n1 0",
    "1 0",
    "p cnf 1 1\n2 0",
    "p cnf 1 1\n1",
])
def test_dimacs_errors(text):
    with pytest.raises(ParseError):
        parse_dimacs(text)


def test_validate(fig2):
    assert validate_against_cnf(fig2, parse_dimacs(FIG2_CNF)).valid
    missing = parse_dimacs("p cnf 2 3\n-1 2 0\n1 -2 0\n-1 -2 0")
    report = validate_against_cnf(fig2, missing)
    assert not report.valid
    assert len(report.unmatched_chains) == 1 and not report.unmatched_clauses
    assert report.describe()
    assert validate_against_cnf(TraceFile(()), CnfProblem(0, ())).valid


def test_validate_ignores_literal_order(fig2):
    p = parse_dimacs("p cnf 2 4\n2 1 0\n2 -1 0\n-2 1 0\n-2 -1 0")
    assert validate_against_cnf(fig2, p).valid
    assert validate_against_cnf(fig2, cnf_from_trace(fig2)).valid
