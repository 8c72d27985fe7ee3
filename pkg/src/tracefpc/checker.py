"""Glue: trace -> translated problem -> kernel run under the Trace FPC."""

from __future__ import annotations

from .fpc import CertLeft, CertRight, CheckMode, TraceGuide
from .formula import NegAtom, is_positive, negate
from .kernel import CheckReport, Storage, Unfocused, check
from .oracle import resolve_implicit
from .parse import TraceFile
from .translate import TranslatedProblem, build_translated


def check_translated(
    tp: TranslatedProblem,
    mode: CheckMode = CheckMode.BACKTRACKING,
    *,
    budget: int | None = None,
    record: bool = False,
) -> CheckReport:
    cert = CertRight(tp.dex_list, tp.cut_chains)
    return check(
        cert, Storage(), Unfocused((tp.root,)), TraceGuide(mode), budget=budget, record=record
    )


def check_trace(
    t: TraceFile,
    mode: CheckMode = CheckMode.BACKTRACKING,
    *,
    budget: int | None = None,
    record: bool = False,
) -> CheckReport:
    """Resolve ``*`` chains, translate, and run the kernel."""
    tp = build_translated(resolve_implicit(t))
    return check_translated(tp, mode, budget=budget, record=record)


def left_branch_storage(tp: TranslatedProblem, position: int) -> Storage:
    """Context seen by the left branch of the ``position``-th cut.

    Assumes every earlier cut succeeded: originals are stored under their
    own indices and each earlier lemma's negation under the chain index.
    """
    sl: list[tuple[int, object]] = []
    nl: list[NegAtom] = []
    disjuncts = []
    f = tp.root
    for _ in range(len(tp.dex_list) - 1):
        disjuncts.append(f.left)
        f = f.right
    disjuncts.append(f)
    for index, d in zip(tp.dex_list, disjuncts):
        sl.append((index, d))
    for cut in tp.cut_chains[:position]:
        lemma = negate(cut.formula)
        if isinstance(lemma, NegAtom):
            nl.append(lemma)
        elif is_positive(lemma):
            sl.append((cut.index, lemma))
    return Storage(tuple(reversed(sl)), tuple(nl))


def check_left_branch(
    tp: TranslatedProblem,
    position: int,
    decide_list: tuple[int, ...],
    mode: CheckMode = CheckMode.BACKTRACKING,
    *,
    budget: int | None = None,
) -> CheckReport:
    """Check one lemma on its own, with a chosen antecedent order."""
    cut = tp.cut_chains[position]
    return check(
        CertLeft(tuple(decide_list), 1),
        left_branch_storage(tp, position),
        Unfocused((cut.formula,)),
        TraceGuide(mode),
        budget=budget,
    )
