"""Antecedent-ordering experiments, measured in kernel node counts.

Node counts stand in for wall-clock time: they are deterministic, so every
record is reproducible from (trace, budget, seed).
"""

from __future__ import annotations

import csv
import itertools
import math
import random
import statistics
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .checker import check_left_branch, check_translated
from .fpc import CertRight, CheckMode
from .kernel import SHARED_INDEX, Verdict
from .oracle import resolve_implicit
from .parse import Chain, TraceFile
from .formula import FALSE
from .translate import build_translated

DEFAULT_SEED = 20170101
DEFAULT_BUDGET = 1_000_000
CSV_COLUMNS = [
    "trace_id", "chain_index", "permutation", "mode", "verdict", "nodes", "backtracks", "budget_hit",
]


class ExperimentError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentRecord:
    trace_id: str
    chain_index: int
    # one antecedent order, or one order per derived chain for experiment 3
    permutation: tuple
    mode: CheckMode
    verdict: Verdict
    nodes: int
    backtracks: int
    budget_hit: bool

    def row(self) -> list:
        if self.permutation and isinstance(self.permutation[0], tuple):
            perm = " | ".join(" ".join(map(str, p)) for p in self.permutation)
        else:
            perm = " ".join(map(str, self.permutation))
        return [
            self.trace_id, self.chain_index, perm, self.mode.value, self.verdict.value,
            self.nodes, self.backtracks, int(self.budget_hit),
        ]


@dataclass(frozen=True)
class ExperimentSummary:
    runs: int
    accepted: int
    timeouts: int
    best_nodes: int
    worst_nodes: int
    median_nodes: float
    mean_nodes: float
    longest_chain_len: int
    avg_chain_len: float
    median_chain_len: float

    @property
    def spread(self) -> float:
        return self.worst_nodes / self.best_nodes if self.best_nodes else math.inf

    def lines(self) -> list[str]:
        return [f"{k} {v}" for k, v in self.__dict__.items()]


def chain_lengths(t: TraceFile) -> list[int]:
    return [len(c.antecedents) for c in t.derived]


def summarize(records: Sequence[ExperimentRecord], t: TraceFile) -> ExperimentSummary:
    nodes = [r.nodes for r in records] or [0]
    lengths = chain_lengths(t) or [0]
    return ExperimentSummary(
        runs=len(records),
        accepted=sum(r.verdict is Verdict.ACCEPTED for r in records),
        timeouts=sum(r.budget_hit for r in records),
        best_nodes=min(nodes),
        worst_nodes=max(nodes),
        median_nodes=statistics.median(nodes),
        mean_nodes=statistics.fmean(nodes),
        longest_chain_len=max(lengths),
        avg_chain_len=statistics.fmean(lengths),
        median_chain_len=statistics.median(lengths),
    )


def write_csv(records: Iterable[ExperimentRecord], dest) -> None:
    """Write records to a path or an open text stream."""
    if hasattr(dest, "write"):
        w = csv.writer(dest, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        w.writerows(r.row() for r in records)
        return
    with open(dest, "w", newline="") as fh:
        write_csv(records, fh)


def find_longest_chain(t: TraceFile) -> int:
    derived = t.derived
    if not derived:
        raise ExperimentError("trace has no derived chains")
    # max() keeps the first of equal elements
    return max(derived, key=lambda c: len(c.antecedents)).index


def with_antecedents(t: TraceFile, index: int, antecedents: Sequence[int]) -> TraceFile:
    for pos, ch in enumerate(t.chains):
        if ch.index == index:
            return t.replace(pos, Chain(ch.index, ch.literals, tuple(antecedents)))
    raise ExperimentError(f"no chain with index {index}")


def _unrank(items: Sequence[int], rank: int) -> tuple[int, ...]:
    pool = list(items)
    out = []
    for k in range(len(pool), 0, -1):
        q, rank = divmod(rank, math.factorial(k - 1))
        out.append(pool.pop(q))
    return tuple(out)


def _rank(base: Sequence[int], perm: Sequence[int]) -> int:
    pool = list(base)
    rank = 0
    for x in perm:
        q = pool.index(x)
        rank += q * math.factorial(len(pool) - 1)
        pool.pop(q)
    return rank


def permutations_for(items: Sequence[int], sample_cap: int, seed: int = DEFAULT_SEED) -> list[tuple[int, ...]]:
    """Lexicographic permutations of ``sorted(items)``, or a seeded sample.

    A sample holds ``sample_cap`` distinct permutations in rank order and
    always includes ``items`` in its given order.
    """
    if sample_cap < 1:
        raise ExperimentError("sample cap must be at least 1")
    base = sorted(items)
    total = math.factorial(len(base))
    if total <= sample_cap:
        return list(itertools.permutations(base))
    rng = random.Random(seed)
    ranks = {_rank(base, items)}
    while len(ranks) < sample_cap:
        ranks.add(rng.randrange(total))
    return [_unrank(base, r) for r in sorted(ranks)]


def _record(trace_id, chain_index, perm, mode, report, budget) -> ExperimentRecord:
    hit = report.verdict is Verdict.BUDGET_EXCEEDED
    return ExperimentRecord(
        trace_id=trace_id,
        chain_index=chain_index,
        permutation=tuple(perm),
        mode=mode,
        verdict=report.verdict,
        nodes=budget if hit else report.nodes_visited,
        backtracks=report.backtracks,
        budget_hit=hit,
    )


def _run(t: TraceFile, mode: CheckMode, budget: int):
    return check_translated(build_translated(t), mode, budget=budget)


def swap_chains(t: TraceFile, i: int, j: int) -> TraceFile:
    """Exchange the positions of two derived chains (0-based positions)."""
    for pos in (i, j):
        if not 0 <= pos < len(t.chains):
            raise ExperimentError(f"position {pos} out of range")
        if t.chains[pos].is_original:
            raise ExperimentError(f"position {pos} holds original chain {t.chains[pos].index}")
    chains = list(t.chains)
    chains[i], chains[j] = chains[j], chains[i]
    return TraceFile(tuple(chains))


def run_experiment1(t: TraceFile, budget: int = DEFAULT_BUDGET, sample_cap: int = 1000,
                    seed: int = DEFAULT_SEED, trace_id: str = "trace"):
    """Swap every pair of derived chains and re-check (backtracking mode)."""
    t = resolve_implicit(t)
    positions = [p for p, c in enumerate(t.chains) if not c.is_original]
    pairs = list(itertools.combinations(positions, 2))
    if len(pairs) > sample_cap:
        pairs = sorted(random.Random(seed).sample(pairs, sample_cap))
    mode = CheckMode.BACKTRACKING
    records = []
    for i, j in pairs:
        swapped = swap_chains(t, i, j)
        report = _run(swapped, mode, budget)
        order = tuple(c.index for c in swapped.derived)
        records.append(_record(trace_id, t.chains[i].index, order, mode, report, budget))
    return records, summarize(records, t)


def run_experiment2(t: TraceFile, budget: int = DEFAULT_BUDGET, sample_cap: int = 1000,
                    seed: int = DEFAULT_SEED, trace_id: str = "trace",
                    mode: CheckMode = CheckMode.BACKTRACKING):
    """Permute the antecedents of the longest chain, all else unchanged."""
    if budget < 1:
        raise ExperimentError("budget must be at least 1")
    t = resolve_implicit(t)
    index = find_longest_chain(t)
    ants = t.by_index()[index].antecedents
    records = []
    for perm in permutations_for(ants, sample_cap, seed):
        report = _run(with_antecedents(t, index, perm), mode, budget)
        records.append(_record(trace_id, index, perm, mode, report, budget))
    return records, summarize(records, t)


def combination_count(lengths: Iterable[int]) -> int:
    return math.prod(math.factorial(n) for n in lengths)


def run_experiment3(t: TraceFile, budget: int = DEFAULT_BUDGET, combo_cap: int = 10_000,
                    trace_id: str = "trace"):
    """Strict-mode check of every combination of antecedent permutations."""
    t = resolve_implicit(t)
    derived = t.derived
    total = combination_count(len(c.antecedents) for c in derived)
    if total > combo_cap:
        raise ExperimentError(
            f"{total} combinations exceed the cap of {combo_cap}; use a smaller trace"
        )
    mode = CheckMode.STRICT
    per_chain = [list(itertools.permutations(sorted(c.antecedents))) for c in derived]
    records = []
    for combo in itertools.product(*per_chain):
        variant = t
        for ch, perm in zip(derived, combo):
            variant = with_antecedents(variant, ch.index, perm)
        report = _run(variant, mode, budget)
        records.append(_record(trace_id, 0, combo, mode, report, budget))
    return records, summarize(records, t)


def _strict_orders(t: TraceFile, budget: int, perm_cap: int, first_only: bool):
    tp = build_translated(resolve_implicit(t))
    counts = []
    for pos, cut in enumerate(tp.cut_chains):
        if math.factorial(len(cut.decide_list)) > perm_cap:
            raise ExperimentError(f"chain {cut.index} has too many orders to enumerate")
        n = 0
        # the trace's own order first; the set enumerated is the same
        own = tuple(cut.decide_list)
        orders = itertools.chain(
            [own], (p for p in itertools.permutations(sorted(own)) if p != own))
        for perm in orders:
            r = check_left_branch(tp, pos, perm, CheckMode.STRICT, budget=budget)
            if r.verdict is Verdict.ACCEPTED:
                n += 1
                if first_only:
                    break
        counts.append(n)
        if cut.formula == FALSE:
            return counts
        if first_only and not n:
            return counts
    return None


def strict_order_counts(t: TraceFile, budget: int = DEFAULT_BUDGET,
                        perm_cap: int = 50_000) -> list[int] | None:
    """Per lemma, how many antecedent orders pass its left branch strictly.

    A lemma's left branch depends only on what is stored before it, so a
    combination of orders is accepted exactly when each of its members
    is.  Returns ``None`` when no empty clause is ever cut.
    """
    return _strict_orders(t, budget, perm_cap, first_only=False)


def strict_order_exists(t: TraceFile, budget: int = DEFAULT_BUDGET,
                        perm_cap: int = 50_000) -> bool:
    """Whether some combination of antecedent orders passes strict mode."""
    counts = _strict_orders(t, budget, perm_cap, first_only=True)
    return counts is not None and all(counts)


class ReorderError(ValueError):
    def __init__(self, message: str, verdict: Verdict):
        super().__init__(message)
        self.verdict = verdict


def reorder_trace(t: TraceFile, budget: int | None = None) -> TraceFile:
    """Rewrite each antecedent list into the order a successful search used.

    Antecedents the search never decided on keep their relative order at
    the end of the list.
    """
    resolved = resolve_implicit(t)
    report = check_translated(build_translated(resolved), CheckMode.BACKTRACKING,
                              budget=budget, record=True)
    if report.verdict is not Verdict.ACCEPTED:
        raise ReorderError(f"trace is not accepted ({report.verdict.value})", report.verdict)
    orders: dict[int, list[int]] = {}
    current = None
    for rule, cert, detail in report.events:
        if rule == "cut" and isinstance(cert, CertRight):
            current = cert.chains[0].index
            orders[current] = []
        elif rule == "decide" and detail != SHARED_INDEX and current is not None:
            if detail not in orders[current]:
                orders[current].append(detail)
    chains = []
    for ch in t.chains:
        used = orders.get(ch.index)
        if ch.is_original or not used:
            chains.append(ch)
            continue
        rest = Counter(ch.antecedents)
        head = []
        for a in used:
            if rest[a] > 0:
                rest[a] -= 1
                head.append(a)
        tail = []
        for a in ch.antecedents:
            if rest[a] > 0:
                rest[a] -= 1
                tail.append(a)
        chains.append(Chain(ch.index, ch.literals, tuple(head + tail)))
    return TraceFile(tuple(chains))
