"""Trusted checking engine for the propositional focused sequent calculus.

The engine knows nothing about Trace.  Proof evidence is an opaque
certificate value that is threaded through the rules; a guidance object
(clerks and experts) inspects it and may only *restrict* which rule
instances are tried.  Everything the guidance returns is re-checked here:
storage and goals are never handed to it.

Rules are tried in a fixed order so that search statistics are
reproducible.  Search is chronological: when a later premise fails, the
engine goes back into the alternatives of the earlier ones, as a Prolog
interpreter would.
"""

from __future__ import annotations

import enum
import sys
import threading
from dataclasses import dataclass, field
from typing import Any, Iterable, Protocol

from .formula import (
    FORMULA_TYPES,
    AndPos,
    FalseF,
    Formula,
    NegAtom,
    OrNeg,
    PosAtom,
    TrueF,
    is_positive,
    negate,
)

# index under which left-branch literals are stored; not unique
SHARED_INDEX = -1


class Verdict(enum.Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    BUDGET_EXCEEDED = "budget_exceeded"
    GUIDANCE_ERROR = "guidance_error"


class GuidanceError(Exception):
    pass


class _Exhausted(Exception):
    pass


@dataclass(frozen=True)
class Storage:
    """Initial context: indexed positive formulas and negative atoms.

    ``sl`` is listed most recently stored first.
    """

    sl: tuple[tuple[int, Formula], ...] = ()
    nl: tuple[NegAtom, ...] = ()


@dataclass(frozen=True)
class Unfocused:
    formulas: tuple[Formula, ...] = ()


@dataclass(frozen=True)
class Focused:
    formula: Formula


Goal = Unfocused | Focused


class Guidance(Protocol):
    def cut_e(self, cert) -> Iterable[tuple[Any, Any, Formula]]: ...
    def decide_e(self, cert) -> Iterable[tuple[Any, int]]: ...
    def store_e(self, cert, formula: Formula) -> Iterable[tuple[Any, int]]: ...
    def init_e(self, cert) -> bool: ...
    def release_e(self, cert) -> Iterable[Any]: ...
    def and_e(self, cert) -> Iterable[tuple[Any, Any]]: ...
    def or_e(self, cert) -> Iterable[Any]: ...


@dataclass(frozen=True)
class CheckReport:
    verdict: Verdict
    nodes_visited: int = 0
    max_depth: int = 0
    # failed attempts at the two choice rules, cut and decide
    backtracks: int = 0
    probe_backtracks: int = 0
    antecedent_backtracks: int = 0
    error: str | None = None
    # (rule, certificate, detail) for each rule of the accepted derivation
    events: tuple | None = field(default=None, compare=False)

    @property
    def accepted(self) -> bool:
        return self.verdict is Verdict.ACCEPTED


class _Context:
    def __init__(self, storage: Storage):
        self.buckets: dict[int, list[Formula]] = {}
        self.neg: dict[int, int] = {}
        for index, f in reversed(storage.sl):
            self.push_sl(index, f)
        for f in storage.nl:
            self.push_nl(f)

    def push_sl(self, index: int, f: Formula) -> None:
        assert is_positive(f), f
        self.buckets.setdefault(index, []).append(f)

    def pop_sl(self, index: int) -> None:
        bucket = self.buckets[index]
        bucket.pop()
        if not bucket:
            del self.buckets[index]

    def push_nl(self, f: NegAtom) -> None:
        assert isinstance(f, NegAtom), f
        self.neg[f.var] = self.neg.get(f.var, 0) + 1

    def pop_nl(self, f: NegAtom) -> None:
        n = self.neg[f.var] - 1
        if n:
            self.neg[f.var] = n
        else:
            del self.neg[f.var]

    def entries(self, index: int) -> list[Formula]:
        return self.buckets.get(index, [])[::-1]


def _is_formula(f) -> bool:
    stack = [f]
    while stack:
        g = stack.pop()
        if not isinstance(g, FORMULA_TYPES):
            return False
        if isinstance(g, (AndPos, OrNeg)):
            stack += [g.left, g.right]
        elif isinstance(g, (PosAtom, NegAtom)) and not (
            isinstance(g.var, int) and g.var >= 1
        ):
            return False
    return True


class _Engine:
    def __init__(self, guide: Guidance, storage: Storage, budget, record):
        self.guide = guide
        self.ctx = _Context(storage)
        self.budget = budget
        self.record = record
        self.events: list = []
        self.nodes = 0
        self.max_depth = 0
        self.backtracks = 0
        self.probe_backtracks = 0
        self.antecedent_backtracks = 0

    # -- guidance plumbing -------------------------------------------------
    def _cands(self, name: str, *args, arity: int = 1) -> list:
        try:
            out = list(getattr(self.guide, name)(*args))
        except _Exhausted:
            raise
        except Exception as e:
            raise GuidanceError(f"{name} failed: {e!r}") from e
        if arity > 1:
            for c in out:
                if not (isinstance(c, tuple) and len(c) == arity):
                    raise GuidanceError(f"{name} returned malformed candidate {c!r}")
        return out

    def _index(self, name: str, index) -> int:
        if not isinstance(index, int) or isinstance(index, bool):
            raise GuidanceError(f"{name} returned non-integer index {index!r}")
        return index

    def _node(self) -> None:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise _Exhausted

    def _event(self, *ev) -> None:
        if self.record:
            self.events.append(ev)

    # -- rules -------------------------------------------------------------
    # Each rule is a generator yielding once per derivation it finds, with
    # the context restored to its state at entry.  Resuming it asks for
    # the next derivation, exactly like retrying a Prolog goal.

    def _with_sl(self, index: int, f: Formula, sub):
        self.ctx.push_sl(index, f)
        try:
            for _ in sub:
                self.ctx.pop_sl(index)
                try:
                    yield
                finally:
                    self.ctx.push_sl(index, f)
        finally:
            self.ctx.pop_sl(index)

    def _with_nl(self, f: NegAtom, sub):
        self.ctx.push_nl(f)
        try:
            for _ in sub:
                self.ctx.pop_nl(f)
                try:
                    yield
                finally:
                    self.ctx.push_nl(f)
        finally:
            self.ctx.pop_nl(f)

    def focused(self, cert, f: Formula, depth: int):
        if depth > self.max_depth:
            self.max_depth = depth
        if isinstance(f, TrueF):
            self._node()
            mark = len(self.events)
            self._event("true", cert, None)
            yield
            del self.events[mark:]
            return
        if isinstance(f, PosAtom):
            self._node()
            try:
                allowed = bool(self.guide.init_e(cert))
            except Exception as e:
                raise GuidanceError(f"init_e failed: {e!r}") from e
            if allowed and f.var in self.ctx.neg:
                mark = len(self.events)
                self._event("init", cert, f.var)
                yield
                del self.events[mark:]
            return
        if isinstance(f, AndPos):
            for c1, c2 in self._cands("and_e", cert, arity=2):
                self._node()
                mark = len(self.events)
                self._event("and", cert, None)
                for _ in self.focused(c1, f.left, depth + 1):
                    yield from self.focused(c2, f.right, depth + 1)
                del self.events[mark:]
            return
        # negative: release
        for c in self._cands("release_e", cert):
            self._node()
            mark = len(self.events)
            self._event("release", cert, None)
            yield from self.unfocused(c, (f,), depth + 1)
            del self.events[mark:]

    def unfocused(self, cert, gamma: tuple, depth: int):
        if depth > self.max_depth:
            self.max_depth = depth
        if not gamma:
            yield from self._cut(cert, depth)
            yield from self._decide(cert, depth)
            return
        head, rest = gamma[0], gamma[1:]
        if isinstance(head, TrueF):
            self._node()
            mark = len(self.events)
            self._event("true", cert, None)
            yield
            del self.events[mark:]
            return
        if isinstance(head, FalseF):
            self._node()
            yield from self.unfocused(cert, rest, depth + 1)
            return
        if isinstance(head, OrNeg):
            for c in self._cands("or_e", cert):
                self._node()
                yield from self.unfocused(c, (head.left, head.right) + rest, depth + 1)
            return
        if isinstance(head, NegAtom):
            for c, _ in self._cands("store_e", cert, head, arity=2):
                self._node()
                mark = len(self.events)
                self._event("store", cert, None)
                yield from self._with_nl(head, self.unfocused(c, rest, depth + 1))
                del self.events[mark:]
            return
        # positive formula: indexed store
        for c, index in self._cands("store_e", cert, head, arity=2):
            index = self._index("store_e", index)
            self._node()
            mark = len(self.events)
            self._event("store", cert, index)
            yield from self._with_sl(index, head, self.unfocused(c, rest, depth + 1))
            del self.events[mark:]

    def _cut(self, cert, depth: int):
        for c1, c2, b in self._cands("cut_e", cert, arity=3):
            if not _is_formula(b):
                raise GuidanceError(f"cut_e proposed a non-formula {b!r}")
            self._node()
            mark = len(self.events)
            self._event("cut", cert, b)
            for _ in self.unfocused(c1, (b,), depth + 1):
                yield from self.unfocused(c2, (negate(b),), depth + 1)
            del self.events[mark:]
            self.backtracks += 1

    def _decide(self, cert, depth: int):
        for c, index in self._cands("decide_e", cert, arity=2):
            index = self._index("decide_e", index)
            for p in self.ctx.entries(index):
                if not is_positive(p):
                    continue
                self._node()
                mark = len(self.events)
                self._event("decide", cert, index)
                yield from self.focused(c, p, depth + 1)
                del self.events[mark:]
                self.backtracks += 1
                if index == SHARED_INDEX:
                    self.probe_backtracks += 1
                else:
                    self.antecedent_backtracks += 1


_STACK_BYTES = 512 * 1024 * 1024
_RECURSION_LIMIT = 200_000
_stack_lock = threading.Lock()


def _run_deep(fn):
    """Run ``fn`` on a thread with a large stack; proofs nest deeply."""
    box: dict = {}

    def target():
        try:
            box["value"] = fn()
        except BaseException as e:  # re-raised in the caller
            box["error"] = e

    with _stack_lock:
        if sys.getrecursionlimit() < _RECURSION_LIMIT:
            sys.setrecursionlimit(_RECURSION_LIMIT)
        old = threading.stack_size(_STACK_BYTES)
        try:
            worker = threading.Thread(target=target, name="kernel")
            worker.start()
        finally:
            threading.stack_size(old)
    worker.join()
    if "error" in box:
        raise box["error"]
    return box["value"]


def check(
    cert,
    store: Storage | None,
    goal: Goal,
    guide: Guidance,
    *,
    budget: int | None = None,
    record: bool = False,
) -> CheckReport:
    """Search for a derivation of ``goal`` restricted by ``guide``.

    ``budget`` caps the number of rule applications; exceeding it yields
    ``Verdict.BUDGET_EXCEEDED``, which is never an acceptance.
    """
    engine = _Engine(guide, store or Storage(), budget, record)

    def run() -> bool:
        if isinstance(goal, Focused):
            search = engine.focused(cert, goal.formula, 0)
        else:
            search = engine.unfocused(cert, tuple(goal.formulas), 0)
        found = next(search, False) is None
        search.close()
        return found

    error = None
    try:
        verdict = Verdict.ACCEPTED if _run_deep(run) else Verdict.REJECTED
    except _Exhausted:
        verdict = Verdict.BUDGET_EXCEEDED
    except GuidanceError as e:
        verdict, error = Verdict.GUIDANCE_ERROR, str(e)
    return CheckReport(
        verdict=verdict,
        nodes_visited=engine.nodes,
        max_depth=engine.max_depth,
        backtracks=engine.backtracks,
        probe_backtracks=engine.probe_backtracks,
        antecedent_backtracks=engine.antecedent_backtracks,
        error=error,
        events=tuple(engine.events) if record and verdict is Verdict.ACCEPTED else None,
    )
