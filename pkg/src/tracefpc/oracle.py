"""Brute-force machinery that does not go through the kernel.

* ``truth_table_unsat`` decides a small CNF by enumerating assignments.
* ``verify_chain_resolution`` replays one chain as linear input resolution.
* ``resolve_implicit`` fills in ``*`` chains from their antecedents.
* ``semantic_check`` decides whether a trace is a refutation by checking
  that every derived clause is implied by its antecedents.
* ``generate_trace`` is a small DPLL prover that emits Trace refutations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .parse import Chain, Clause, CnfProblem, TraceFile

MAX_TABLE_VARS = 20
MAX_GENERATE_VARS = 16


class OracleError(ValueError):
    pass


def _sorted_clause(lits: Iterable[int]) -> Clause:
    return tuple(sorted(set(lits), key=lambda l: (abs(l), l)))


def truth_table_unsat(p: CnfProblem) -> bool:
    if p.num_vars > MAX_TABLE_VARS:
        raise OracleError(f"{p.num_vars} variables exceeds truth-table budget {MAX_TABLE_VARS}")
    alive = np.ones(1 << p.num_vars, dtype=bool)
    table = np.arange(1 << p.num_vars, dtype=np.uint32)
    for clause in p.clauses:
        pos = sum(1 << (l - 1) for l in set(clause) if l > 0)
        neg = sum(1 << (-l - 1) for l in set(clause) if l < 0)
        alive &= ((table & pos) != 0) | ((~table & neg) != 0)
        if not alive.any():
            return True
    return not alive.any()


def satisfiable(clauses: Sequence[Sequence[int]]) -> bool:
    """Plain splitting procedure; used where a truth table would be too wide."""
    clauses = [frozenset(c) for c in clauses]
    while True:
        if any(not c for c in clauses):
            return False
        if not clauses:
            return True
        unit = next((c for c in clauses if len(c) == 1), None)
        if unit is None:
            break
        (lit,) = unit
        clauses = [c - {-lit} for c in clauses if lit not in c]
    lit = min(clauses[0], key=lambda l: (abs(l), l))
    return any(
        satisfiable([c - {-x} for c in clauses if x not in c]) for x in (lit, -lit)
    )


def implies(premises: Sequence[Sequence[int]], clause: Sequence[int]) -> bool:
    return not satisfiable(list(premises) + [(-l,) for l in set(clause)])


def verify_chain_resolution(ch: Chain, context: Mapping[int, Sequence[int]]) -> Clause:
    """Find an order of ``ch.antecedents`` forming a linear input resolution.

    Every step must clash on exactly one literal.  With explicit literals the
    final resolvent must equal them as a set.  Returns the resolvent.
    """
    missing = [a for a in ch.antecedents if a not in context]
    if missing:
        raise OracleError(f"chain {ch.index}: antecedent(s) {missing} not available")
    if not ch.antecedents:
        raise OracleError(f"chain {ch.index} has no antecedents")
    target = None if ch.literals is None else frozenset(ch.literals)
    clauses = [frozenset(context[a]) for a in ch.antecedents]
    failed: set = set()

    def search(resolvent: frozenset, remaining: tuple[int, ...]):
        if not remaining:
            return resolvent if target is None or resolvent == target else None
        key = (resolvent, remaining)
        if key in failed:
            return None
        for k, i in enumerate(remaining):
            clause = clauses[i]
            clash = [l for l in clause if -l in resolvent]
            if len(clash) != 1:
                continue
            pivot = clash[0]
            nxt = (resolvent - {-pivot}) | (clause - {pivot})
            found = search(nxt, remaining[:k] + remaining[k + 1:])
            if found is not None:
                return found
        failed.add(key)
        return None

    order = tuple(range(len(clauses)))
    for k in order:
        found = search(clauses[k], order[:k] + order[k + 1:])
        if found is not None:
            return _sorted_clause(found)
    if target is None:
        raise OracleError(f"chain {ch.index}: antecedents admit no linear input resolution")
    raise OracleError(f"chain {ch.index}: antecedents do not resolve to {sorted(target)}")


def resolve_implicit(t: TraceFile) -> TraceFile:
    by_index = t.by_index()
    resolved: dict[int, Clause] = {
        c.index: c.literals for c in t.chains if c.literals is not None
    }
    if len(resolved) == len(t.chains):
        return t
    visiting: set[int] = set()

    def literals_of(index: int, user: int) -> Clause:
        if index in resolved:
            return resolved[index]
        if index not in by_index:
            raise OracleError(f"chain {user}: antecedent {index} does not exist")
        if index in visiting:
            raise OracleError(f"chain {index}: cyclic antecedent dependency")
        visiting.add(index)
        ch = by_index[index]
        context = {a: literals_of(a, index) for a in ch.antecedents}
        visiting.discard(index)
        resolved[index] = verify_chain_resolution(ch, context)
        return resolved[index]

    chains = []
    for ch in t.chains:
        if ch.literals is None:
            ch = Chain(ch.index, literals_of(ch.index, ch.index), ch.antecedents)
        chains.append(ch)
    return TraceFile(tuple(chains))


@dataclass
class SemanticVerdict:
    valid: bool
    reason: str = ""


def semantic_check(t: TraceFile) -> SemanticVerdict:
    """Refutation check by clause implication, in trace order.

    Original clauses are available from the start; a derived clause becomes
    available after its own chain.  Antecedents that are not yet available
    are ignored.  The first derived empty clause that is implied ends the
    proof.
    """
    available: dict[int, Clause] = {c.index: c.literals for c in t.originals}
    for ch in t.derived:
        if ch.literals is None:
            return SemanticVerdict(False, f"chain {ch.index} has implicit literals")
        premises = [available[a] for a in ch.antecedents if a in available]
        if not implies(premises, ch.literals):
            return SemanticVerdict(False, f"chain {ch.index} is not implied by its antecedents")
        if not ch.literals:
            return SemanticVerdict(True)
        available[ch.index] = ch.literals
    return SemanticVerdict(False, "no empty clause derived")


# -- trace generation --------------------------------------------------------


def random_cnf(num_vars: int, num_clauses: int, rng: random.Random, width: int = 3,
               neg_bias: float = 0.5) -> CnfProblem:
    width = min(width, num_vars)
    clauses = []
    for _ in range(num_clauses):
        vs = rng.sample(range(1, num_vars + 1), width)
        clauses.append(tuple(-v if rng.random() < neg_bias else v for v in vs))
    return CnfProblem(num_vars, tuple(clauses))


@dataclass(eq=False)
class _Derived:
    literals: frozenset
    # first entry is resolved in turn with each later one
    steps: list = field(default_factory=list)


def _resolve(a: frozenset, b: frozenset) -> frozenset:
    clash = [l for l in b if -l in a]
    assert len(clash) == 1, (a, b)
    return (a - {-clash[0]}) | (b - {clash[0]})


class _Prover:
    def __init__(self, p: CnfProblem):
        self.p = p
        self.clauses = [frozenset(c) for c in p.clauses]

    def _propagate(self, decisions: list[int]):
        value: dict[int, bool] = {}
        for lit in decisions:
            value[abs(lit)] = lit > 0
        trail: list[tuple[int, int]] = []
        changed = True
        while changed:
            changed = False
            for ref, clause in enumerate(self.clauses, start=1):
                free = []
                sat = False
                for lit in clause:
                    v = value.get(abs(lit))
                    if v is None:
                        free.append(lit)
                    elif v == (lit > 0):
                        sat = True
                        break
                if sat:
                    continue
                if not free:
                    return ref, trail, value
                if len(free) == 1:
                    lit = free[0]
                    value[abs(lit)] = lit > 0
                    trail.append((lit, ref))
                    changed = True
        return None, trail, value

    def refute(self, decisions: list[int]):
        conflict, trail, value = self._propagate(decisions)
        if conflict is not None:
            current = self.clauses[conflict - 1]
            steps: list = [conflict]
            for lit, reason in reversed(trail):
                if -lit in current:
                    current = _resolve(current, self.clauses[reason - 1])
                    steps.append(reason)
            if len(steps) == 1:
                return conflict
            return _Derived(current, steps)
        open_clauses = [
            c for c in self.clauses
            if not any(value.get(abs(l)) == (l > 0) for l in c)
        ]
        if not open_clauses:
            return None
        score: dict[int, int] = {}
        for c in open_clauses:
            for l in c:
                if abs(l) not in value:
                    score[abs(l)] = score.get(abs(l), 0) + 1
        var = min(score, key=lambda v: (-score[v], v))
        pos = self.refute(decisions + [var])
        if pos is None:
            return None
        if -var not in self.literals(pos):
            return pos
        neg = self.refute(decisions + [-var])
        if neg is None:
            return None
        if var not in self.literals(neg):
            return neg
        # the side holding -var starts the resolution so its chain can be extended
        return _Derived(_resolve(self.literals(pos), self.literals(neg)), [pos, neg])

    def literals(self, ref) -> frozenset:
        return ref.literals if isinstance(ref, _Derived) else self.clauses[ref - 1]


def _extendable(parts: Sequence[frozenset], resolvent: frozenset) -> bool:
    # each antecedent may lose at most one positive literal along the chain
    return all(sum(1 for l in c if l > 0 and l not in resolvent) <= 1 for c in parts)


def _decide_order(refs: Sequence[int], parts: Sequence[frozenset], resolvent: frozenset,
                  num_originals: int) -> tuple:
    """Antecedent order in which a focused search can follow the chain.

    An antecedent holding a positive literal that is resolved away must
    come before every antecedent holding its complement.  Ties keep the
    reverse resolution order.
    """
    n = len(refs)
    after = [set() for _ in range(n)]
    for a in range(n):
        for b in range(n):
            if a != b and any(l > 0 and l not in resolvent and -l in parts[b] for l in parts[a]):
                after[a].add(b)
    indegree = [0] * n
    for a in range(n):
        for b in after[a]:
            indegree[b] += 1
    order = []
    ready = [k for k in range(n) if indegree[k] == 0]
    while ready:
        k = max(ready)
        ready.remove(k)
        order.append(k)
        for b in after[k]:
            indegree[b] -= 1
            if indegree[b] == 0:
                ready.append(b)
    assert len(order) == n, "pivot relation is cyclic"
    # a derived positive unit is assumed as a bare negative atom, which is
    # never decided on; listing it last keeps the decided ones in front
    unit = [k for k in order if refs[k] > num_originals and len(parts[k]) == 1 and min(parts[k]) > 0]
    return tuple(refs[k] for k in order if k not in unit) + tuple(refs[k] for k in unit)


class _Emitter:
    def __init__(self, prover: _Prover):
        self.prover = prover
        self.next_index = len(prover.clauses) + 1
        self.chains: list[Chain] = []
        self.index_of: dict[int, int] = {}

    def emit(self, node) -> int:
        if not isinstance(node, _Derived):
            return node
        if id(node) in self.index_of:
            return self.index_of[id(node)]
        steps = list(node.steps)
        while isinstance(steps[0], _Derived) and id(steps[0]) not in self.index_of:
            steps = list(steps[0].steps) + steps[1:]
        refs = [self.emit(s) for s in steps]
        lits = [self.prover.literals(s) for s in steps]
        resolvents = [lits[0]]
        for c in lits[1:]:
            resolvents.append(_resolve(resolvents[-1], c))
        cur_ref, cur_lits, cur = refs[0], lits[0], 0
        while cur < len(refs) - 1:
            best = cur + 1
            for end in range(cur + 2, len(refs)):
                if _extendable([cur_lits] + lits[cur + 1:end + 1], resolvents[end]):
                    best = end
            index = self.next_index
            self.next_index += 1
            ants = _decide_order(
                [cur_ref] + refs[cur + 1:best + 1], [cur_lits] + lits[cur + 1:best + 1], resolvents[best],
                len(self.prover.clauses),
            )
            self.chains.append(Chain(index, _sorted_clause(resolvents[best]), ants))
            cur_ref, cur_lits, cur = index, resolvents[best], best
        self.index_of[id(node)] = cur_ref
        return cur_ref


def generate_trace(p: CnfProblem) -> TraceFile | None:
    """A globally ordered Trace refutation of ``p``, or ``None`` if satisfiable."""
    if p.num_vars > MAX_GENERATE_VARS:
        raise OracleError(f"{p.num_vars} variables exceeds generator budget {MAX_GENERATE_VARS}")
    originals = [Chain(i, tuple(c), ()) for i, c in enumerate(p.clauses, start=1)]
    prover = _Prover(p)
    root = prover.refute([])
    if root is None:
        return None
    emitter = _Emitter(prover)
    final = emitter.emit(root)
    chains = emitter.chains
    if not chains or chains[-1].literals:
        # the empty clause is an original clause (or was reached without resolution)
        chains.append(Chain(emitter.next_index, (), (final,)))
    return TraceFile(tuple(originals + chains))


def generate_unsat(num_vars: int, num_clauses: int, seed: int, *, retries: int = 1000,
                   width: int = 3, neg_bias: float = 0.5):
    """Draw random CNFs from consecutive seeds until one is UNSAT.

    Returns ``(seed_used, problem, trace)``.
    """
    for s in range(seed, seed + retries):
        p = random_cnf(num_vars, num_clauses, random.Random(s), width, neg_bias)
        t = generate_trace(p)
        if t is not None:
            return s, p, t
    raise OracleError(f"no UNSAT instance within {retries} seeds from {seed}")
