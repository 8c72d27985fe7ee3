"""Polarized propositional formulas for the focused kernel.

Only the connectives the Trace encoding needs exist: positive conjunction,
negative disjunction, the two units, and atoms of either sign.  Atoms are
positive by default; a negative atom is the negation of a positive one.

Clause literals are plain DIMACS integers (``-3`` is the negation of
variable 3).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence, Union


class Polarity(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True, slots=True)
class PosAtom:
    var: int

    def __str__(self) -> str:
        return f"x({self.var})"


@dataclass(frozen=True, slots=True)
class NegAtom:
    var: int

    def __str__(self) -> str:
        return f"not(x({self.var}))"


@dataclass(frozen=True, slots=True)
class AndPos:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return f"and({self.left},{self.right})"


@dataclass(frozen=True, slots=True)
class OrNeg:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return f"or({self.left},{self.right})"


@dataclass(frozen=True, slots=True)
class TrueF:
    def __str__(self) -> str:
        return "true"


@dataclass(frozen=True, slots=True)
class FalseF:
    def __str__(self) -> str:
        return "false"


TRUE = TrueF()
FALSE = FalseF()

Formula = Union[PosAtom, NegAtom, AndPos, OrNeg, TrueF, FalseF]
FORMULA_TYPES = (PosAtom, NegAtom, AndPos, OrNeg, TrueF, FalseF)


def polarity(f: Formula) -> Polarity:
    if isinstance(f, (PosAtom, AndPos, TrueF)):
        return Polarity.POSITIVE
    if isinstance(f, (NegAtom, OrNeg, FalseF)):
        return Polarity.NEGATIVE
    raise TypeError(f"not a polarized formula: {f!r}")


def is_positive(f: Formula) -> bool:
    return polarity(f) is Polarity.POSITIVE


def is_negative(f: Formula) -> bool:
    return polarity(f) is Polarity.NEGATIVE


def negate(f: Formula) -> Formula:
    """De Morgan dual of ``f``; an involution."""
    if isinstance(f, PosAtom):
        return NegAtom(f.var)
    if isinstance(f, NegAtom):
        return PosAtom(f.var)
    if isinstance(f, AndPos):
        return OrNeg(negate(f.left), negate(f.right))
    if isinstance(f, OrNeg):
        return AndPos(negate(f.left), negate(f.right))
    if isinstance(f, TrueF):
        return FALSE
    if isinstance(f, FalseF):
        return TRUE
    raise TypeError(f"not a polarized formula: {f!r}")


def literal_atom(lit: int) -> Formula:
    if lit == 0:
        raise ValueError("0 is not a literal")
    return PosAtom(lit) if lit > 0 else NegAtom(-lit)


def _right_nest(parts: Sequence[Formula], conn) -> Formula:
    out = parts[-1]
    for f in reversed(parts[:-1]):
        out = conn(f, out)
    return out


def clause_to_conjunction(clause: Sequence[int]) -> Formula:
    """The negation of ``clause`` as a right-nested positive conjunction."""
    if not clause:
        raise ValueError("empty clause has no conjunctive form")
    return _right_nest([literal_atom(-lit) for lit in clause], AndPos)


def clause_to_disjunction(clause: Sequence[int]) -> Formula:
    """``clause`` verbatim as a right-nested negative disjunction.

    The empty clause becomes ``FALSE``; a unit clause is its bare atom.
    """
    if not clause:
        return FALSE
    return _right_nest([literal_atom(lit) for lit in clause], OrNeg)


def variables(f: Formula) -> set[int]:
    out: set[int] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (PosAtom, NegAtom)):
            out.add(g.var)
        elif isinstance(g, (AndPos, OrNeg)):
            stack.append(g.left)
            stack.append(g.right)
    return out


def evaluate(f: Formula, assignment) -> bool:
    """Truth value of ``f`` under ``assignment`` (a mapping var -> bool)."""
    if isinstance(f, PosAtom):
        return bool(assignment[f.var])
    if isinstance(f, NegAtom):
        return not assignment[f.var]
    if isinstance(f, AndPos):
        return evaluate(f.left, assignment) and evaluate(f.right, assignment)
    if isinstance(f, OrNeg):
        return evaluate(f.left, assignment) or evaluate(f.right, assignment)
    return isinstance(f, TrueF)
