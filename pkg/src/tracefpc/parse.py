"""Readers for Trace refutations and DIMACS CNF files."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Sequence

Clause = tuple[int, ...]


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Chain:
    """One Trace chain.  ``literals is None`` marks an implicit (``*``) clause."""

    index: int
    literals: Clause | None
    antecedents: tuple[int, ...] = ()

    @property
    def is_original(self) -> bool:
        return not self.antecedents

    @property
    def is_implicit(self) -> bool:
        return self.literals is None

    def __str__(self) -> str:
        lits = "*" if self.literals is None else " ".join(map(str, self.literals + (0,)))
        ants = " ".join(map(str, self.antecedents + (0,)))
        return f"{self.index} {lits} {ants}"


@dataclass(frozen=True)
class TraceFile:
    chains: tuple[Chain, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "chains", tuple(self.chains))

    @property
    def originals(self) -> list[Chain]:
        return [c for c in self.chains if c.is_original]

    @property
    def derived(self) -> list[Chain]:
        return [c for c in self.chains if not c.is_original]

    def by_index(self) -> dict[int, Chain]:
        return {c.index: c for c in self.chains}

    def replace(self, position: int, chain: Chain) -> "TraceFile":
        chains = list(self.chains)
        chains[position] = chain
        return TraceFile(tuple(chains))


@dataclass(frozen=True)
class CnfProblem:
    num_vars: int
    clauses: tuple[Clause, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))


def _text(data: str | bytes) -> str:
    if isinstance(data, bytes):
        return data.decode("ascii", errors="replace")
    return data


def _tokens(text: str) -> Iterator[tuple[int, str]]:
    for lineno, line in enumerate(text.splitlines(), start=1):
        for tok in line.split():
            yield lineno, tok


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"unexpected token {tok!r}", lineno) from None


def parse_trace(data: str | bytes) -> TraceFile:
    """Parse Trace text.  Token oriented: chains may span lines."""
    chains: list[Chain] = []
    seen: dict[int, int] = {}
    toks = _tokens(_text(data))
    for lineno, tok in toks:
        start = lineno
        index = _int(tok, lineno)
        if index <= 0:
            raise ParseError(f"chain index must be positive, got {index}", lineno)
        if index in seen:
            raise ParseError(
                f"duplicate chain index {index} (first at line {seen[index]})", lineno
            )
        lits: list[int] | None = []
        ants: list[int] = []
        phase = "lits"
        for lineno, tok in toks:
            if phase == "lits":
                if tok == "*":
                    if lits:
                        raise ParseError("'*' after explicit literals", lineno)
                    lits = None
                    phase = "ants"
                    continue
                v = _int(tok, lineno)
                if v == 0:
                    phase = "ants"
                else:
                    lits.append(v)
            else:
                v = _int(tok, lineno)
                if v == 0:
                    phase = "done"
                    break
                if v < 0:
                    raise ParseError(f"negative antecedent {v} in chain {index}", lineno)
                ants.append(v)
        if phase != "done":
            raise ParseError(f"chain {index} is missing its terminating zero", start)
        if lits is None and not ants:
            raise ParseError(f"chain {index} uses '*' without antecedents", start)
        seen[index] = start
        chains.append(Chain(index, None if lits is None else tuple(lits), tuple(ants)))
    return TraceFile(tuple(chains))


def serialize_trace(t: TraceFile) -> str:
    return "".join(f"{c}\n" for c in t.chains)


_HEADER = re.compile(r"^p\s+cnf\s+(\d+)\s+(\d+)\s*$")


def parse_dimacs(data: str | bytes) -> CnfProblem:
    num_vars = num_clauses = None
    clauses: list[Clause] = []
    current: list[int] = []
    for lineno, line in enumerate(_text(data).splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("c"):
            continue
        if s.startswith("%"):
            break
        if s.startswith("p"):
            m = _HEADER.match(s)
            if m is None or num_vars is not None:
                raise ParseError(f"malformed header {s!r}", lineno)
            num_vars, num_clauses = int(m.group(1)), int(m.group(2))
            continue
        if num_vars is None:
            raise ParseError("clause before 'p cnf' header", lineno)
        for tok in s.split():
            v = _int(tok, lineno)
            if v == 0:
                clauses.append(tuple(current))
                current = []
            elif abs(v) > num_vars:
                raise ParseError(f"variable {abs(v)} out of range 1..{num_vars}", lineno)
            else:
                current.append(v)
    if num_vars is None:
        raise ParseError("missing 'p cnf' header")
    if current:
        raise ParseError("last clause is not zero-terminated")
    if len(clauses) != num_clauses:
        raise ParseError(
            f"clause count mismatch: header says {num_clauses}, found {len(clauses)}"
        )
    return CnfProblem(num_vars, tuple(clauses))


def serialize_dimacs(p: CnfProblem) -> str:
    lines = [f"p cnf {p.num_vars} {len(p.clauses)}"]
    lines += [" ".join(map(str, c + (0,))) for c in p.clauses]
    return "\n".join(lines) + "\n"


def cnf_from_trace(t: TraceFile) -> CnfProblem:
    clauses = tuple(c.literals for c in t.originals)
    num_vars = max((abs(l) for c in clauses for l in c), default=0)
    return CnfProblem(num_vars, clauses)


@dataclass
class ValidationReport:
    unmatched_chains: list[int]
    unmatched_clauses: list[Clause]

    @property
    def valid(self) -> bool:
        return not self.unmatched_chains and not self.unmatched_clauses

    def describe(self) -> list[str]:
        out = [f"original chain {i} has no matching CNF clause" for i in self.unmatched_chains]
        out += [f"CNF clause {list(c)} has no matching original chain" for c in self.unmatched_clauses]
        return out


def _key(clause: Sequence[int]) -> Clause:
    return tuple(sorted(clause))


def validate_against_cnf(t: TraceFile, p: CnfProblem) -> ValidationReport:
    """Compare the trace's original clauses with ``p`` as multisets."""
    pending = Counter(_key(c) for c in p.clauses)
    unmatched_chains = []
    for ch in t.originals:
        k = _key(ch.literals)
        if pending[k] > 0:
            pending[k] -= 1
        else:
            unmatched_chains.append(ch.index)
    # a clause repeated n times with m < n matches is reported n - m times
    unmatched_clauses = []
    for c in p.clauses:
        k = _key(c)
        if pending[k] > 0:
            pending[k] -= 1
            unmatched_clauses.append(c)
    return ValidationReport(unmatched_chains, unmatched_clauses)
