"""Turn a Trace refutation into the kernel's goal and cut certificates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .formula import (
    FALSE,
    TRUE,
    Formula,
    OrNeg,
    clause_to_conjunction,
    clause_to_disjunction,
)
from .parse import TraceFile


class TranslationError(ValueError):
    pass


class CutChain(NamedTuple):
    index: int
    decide_list: tuple[int, ...]
    formula: Formula


@dataclass(frozen=True)
class TranslatedProblem:
    root: Formula
    dex_list: tuple[int, ...]
    cut_chains: tuple[CutChain, ...]
    # chains listed after the first empty-clause chain
    unreachable: tuple[int, ...] = ()


def build_translated(t: TraceFile) -> TranslatedProblem:
    """Negate the original clauses into a disjunction and collect the cuts.

    Implicit (``*``) chains must be resolved beforehand.
    """
    originals = t.originals
    if not originals:
        raise TranslationError("trace has no original clauses")
    known = {c.index for c in t.chains}
    disjuncts: list[Formula] = []
    dex: list[int] = []
    cuts: list[CutChain] = []
    unreachable: list[int] = []
    closed = False
    for ch in t.chains:
        if ch.literals is None:
            raise TranslationError(f"chain {ch.index} still has implicit literals")
        if ch.is_original:
            disjuncts.append(clause_to_conjunction(ch.literals) if ch.literals else TRUE)
            dex.append(ch.index)
            continue
        missing = [a for a in ch.antecedents if a not in known]
        if missing:
            raise TranslationError(
                f"chain {ch.index} references unknown antecedent(s) {missing}"
            )
        formula = clause_to_disjunction(ch.literals)
        cuts.append(CutChain(ch.index, ch.antecedents, formula))
        if closed:
            unreachable.append(ch.index)
        elif formula == FALSE:
            closed = True
    root = disjuncts[-1]
    for d in reversed(disjuncts[:-1]):
        root = OrNeg(d, root)
    return TranslatedProblem(root, tuple(dex), tuple(cuts), tuple(unreachable))


def dump_translated(tp: TranslatedProblem) -> str:
    """Line-oriented textual form used by the ``translate`` subcommand."""
    lines = [f"root {tp.root}", "dex " + " ".join(map(str, tp.dex_list))]
    for c in tp.cut_chains:
        dl = ",".join(map(str, c.decide_list))
        lines.append(f"chain({c.index},[{dl}],{c.formula})")
    if tp.unreachable:
        lines.append("unreachable " + " ".join(map(str, tp.unreachable)))
    return "\n".join(lines) + "\n"
