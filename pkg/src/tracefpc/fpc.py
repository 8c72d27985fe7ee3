"""Clerks and experts interpreting Trace evidence for the kernel.

A right-branch certificate carries the indices still waiting to be
stored and the chains not yet cut; a left-branch certificate carries the
antecedents that may still be decided on plus a one-shot flag for
deciding on the shared ``-1`` index.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .formula import Formula
from .kernel import SHARED_INDEX
from .translate import CutChain


class CheckMode(enum.Enum):
    BACKTRACKING = "backtracking"
    STRICT = "strict"


@dataclass(frozen=True)
class CertRight:
    pending: tuple[int, ...]
    chains: tuple[CutChain, ...]


@dataclass(frozen=True)
class CertLeft:
    decide_list: tuple[int, ...]
    flag: int

    def __post_init__(self):
        if self.flag not in (0, 1):
            raise ValueError(f"flag must be 0 or 1, got {self.flag!r}")


Certificate = CertRight | CertLeft


def cut_e(c: Certificate) -> list[tuple[CertLeft, CertRight, Formula]]:
    if isinstance(c, CertRight) and not c.pending and c.chains:
        head, rest = c.chains[0], c.chains[1:]
        return [(CertLeft(tuple(head.decide_list), 1), CertRight((head.index,), rest), head.formula)]
    return []


def decide_e(c: Certificate, mode: CheckMode = CheckMode.BACKTRACKING) -> list[tuple[CertLeft, int]]:
    if not isinstance(c, CertLeft):
        return []
    dl, flag = c.decide_list, c.flag
    out = []
    if flag == 1:
        out.append((CertLeft(dl, 0), SHARED_INDEX))
    if mode is CheckMode.STRICT:
        if dl:
            out.append((CertLeft(dl[1:], flag), dl[0]))
        return out
    for pos, index in enumerate(dl):
        out.append((CertLeft(dl[:pos] + dl[pos + 1:], flag), index))
    return out


def store_e(c: Certificate, formula: Formula | None = None) -> list[tuple[Certificate, int]]:
    if isinstance(c, CertRight):
        if not c.pending:
            return []
        return [(CertRight(c.pending[1:], c.chains), c.pending[0])]
    if isinstance(c, CertLeft):
        return [(c, SHARED_INDEX)]
    return []


def init_e(c: Certificate) -> bool:
    return True


def release_e(c: Certificate) -> list[CertLeft]:
    return [c] if isinstance(c, CertLeft) else []


def and_e(c: Certificate) -> list[tuple[CertLeft, CertLeft]]:
    return [(c, c)] if isinstance(c, CertLeft) else []


def or_e(c: Certificate) -> list[Certificate]:
    return [c]


class TraceGuide:
    """The kernel's guidance object for a given check mode."""

    def __init__(self, mode: CheckMode = CheckMode.BACKTRACKING):
        self.mode = mode

    def cut_e(self, cert):
        return cut_e(cert)

    def decide_e(self, cert):
        return decide_e(cert, self.mode)

    def store_e(self, cert, formula):
        return store_e(cert, formula)

    def init_e(self, cert):
        return init_e(cert)

    def release_e(self, cert):
        return release_e(cert)

    def and_e(self, cert):
        return and_e(cert)

    def or_e(self, cert):
        return or_e(cert)
