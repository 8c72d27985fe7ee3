import pytest

from tracefpc.oracle import generate_unsat
from tracefpc.parse import parse_trace

FIG2_TEXT = """1 1 2 0 0
2 -1 2 0 0
3 1 -2 0 0
4 -1 -2 0 0

5 1 0 3 1 0
6 0 4 2 5 0
"""

CORPUS_SIZE = 100


def corpus_params(k: int) -> tuple[int, int, int]:
    """(vars, clauses, seed) of the k-th corpus instance; at most 12 vars."""
    v = 4 + k % 9
    return v, round(4.6 * v), 1000 * k


def build_corpus(n: int = CORPUS_SIZE):
    out = []
    for k in range(n):
        v, c, seed = corpus_params(k)
        _, p, t = generate_unsat(v, c, seed)
        out.append((p, t))
    return out


@pytest.fixture
def fig2():
    return parse_trace(FIG2_TEXT)


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()
