import pytest

from tracefpc.formula import FALSE, PosAtom
from tracefpc.fpc import (
    CertLeft, CertRight, CheckMode, TraceGuide, and_e, cut_e, decide_e, init_e, or_e, release_e, store_e,
)
from tracefpc.translate import CutChain

CH5 = CutChain(5, (3, 1), PosAtom(1))
CH6 = CutChain(6, (4, 2, 5), FALSE)
B, S = CheckMode.BACKTRACKING, CheckMode.STRICT


def test_cut():
    assert cut_e(CertRight((), (CH5, CH6))) == [
        (CertLeft((3, 1), 1), CertRight((5,), (CH6,)), PosAtom(1))
    ]
    assert cut_e(CertRight((4,), (CH5,))) == []
    assert cut_e(CertRight((), ())) == []
    assert cut_e(CertLeft((1,), 1)) == []


def test_decide_backtracking():
    assert decide_e(CertLeft((3, 1), 1), B) == [
        (CertLeft((3, 1), 0), -1), (CertLeft((1,), 1), 3), (CertLeft((3,), 1), 1),
    ]
    assert decide_e(CertLeft((3, 1), 0), B) == [(CertLeft((1,), 0), 3), (CertLeft((3,), 0), 1)]


def test_decide_strict():
    assert decide_e(CertLeft((1, 3), 1), S) == [(CertLeft((1, 3), 0), -1), (CertLeft((3,), 1), 1)]
    assert decide_e(CertLeft((1, 3), 0), S) == [(CertLeft((3,), 0), 1)]


@pytest.mark.parametrize("mode", [B, S])
def test_decide_nothing(mode):
    assert decide_e(CertLeft((), 0), mode) == []
    assert decide_e(CertRight((), ()), mode) == []


def test_strict_is_subsequence():
    for dl in [(), (1,), (3, 1), (4, 2, 5), (9, 8, 7, 6)]:
        for flag in (0, 1):
            full = decide_e(CertLeft(dl, flag), B)
            strict = iter(full)
            assert all(c in strict for c in decide_e(CertLeft(dl, flag), S))


def test_store():
    ch = (CH5, CH6)
    assert store_e(CertRight((4, 3, 1, 2), ch)) == [(CertRight((3, 1, 2), ch), 4)]
    assert store_e(CertLeft((3, 1), 1)) == [(CertLeft((3, 1), 1), -1)]
    assert store_e(CertRight((), ch)) == []


def test_other_experts():
    c = CertLeft((3,), 1)
    assert and_e(c) == [(c, c)]
    assert and_e(CertRight((), ())) == []
    assert release_e(CertRight((), ())) == []
    assert release_e(c) == [c]
    assert or_e(CertRight((1,), ())) == [CertRight((1,), ())]
    assert init_e(c)


def test_bad_flag():
    with pytest.raises(ValueError):
        CertLeft((1,), 2)


def test_guide_dispatches_mode():
    c = CertLeft((1, 3), 1)
    assert TraceGuide(S).decide_e(c) == decide_e(c, S)
    assert TraceGuide().decide_e(c) == decide_e(c, B)
