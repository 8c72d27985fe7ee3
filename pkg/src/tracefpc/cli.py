"""Command-line entry point.

Exit codes: 0 verified, 1 rejected, 2 format error, 3 guidance error or
budget exceeded.  Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import enum
import sys
from pathlib import Path

from . import harness
from .checker import check_translated
from .fpc import CheckMode
from .kernel import Verdict
from .oracle import MAX_GENERATE_VARS, OracleError, generate_unsat, resolve_implicit
from .parse import ParseError, parse_dimacs, parse_trace, serialize_dimacs, serialize_trace, validate_against_cnf
from .translate import TranslationError, build_translated, dump_translated


class ExitStatus(enum.IntEnum):
    VERIFIED = 0
    REJECTED = 1
    FORMAT_ERROR = 2
    GUIDANCE_ERROR = 3


def _exit_for(verdict: Verdict) -> ExitStatus:
    if verdict is Verdict.ACCEPTED:
        return ExitStatus.VERIFIED
    if verdict is Verdict.REJECTED:
        return ExitStatus.REJECTED
    return ExitStatus.GUIDANCE_ERROR


class _Fail(Exception):
    def __init__(self, status: ExitStatus, message: str):
        super().__init__(message)
        self.status = status


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _read(path) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise _Fail(ExitStatus.FORMAT_ERROR, f"{path}: {e.strerror}")


def _load_trace(path):
    try:
        return parse_trace(_read(path))
    except ParseError as e:
        raise _Fail(ExitStatus.FORMAT_ERROR, f"{path}: {e}")


def _resolve(t):
    try:
        return resolve_implicit(t)
    except OracleError as e:
        # the text parsed; the evidence itself is wrong
        raise _Fail(ExitStatus.REJECTED, str(e))


def _translate(t):
    try:
        return build_translated(t)
    except TranslationError as e:
        raise _Fail(ExitStatus.FORMAT_ERROR, str(e))


def _checked_input(t):
    """Fail early with the right status if ``t`` cannot be translated."""
    _translate(_resolve(t))
    return t


def cmd_check(args) -> ExitStatus:
    t = _load_trace(args.trace)
    if args.cnf:
        try:
            p = parse_dimacs(_read(args.cnf))
        except ParseError as e:
            raise _Fail(ExitStatus.FORMAT_ERROR, f"{args.cnf}: {e}")
        report = validate_against_cnf(t, p)
        if not report.valid:
            for line in report.describe():
                _err(line)
            raise _Fail(ExitStatus.FORMAT_ERROR, "trace does not match the CNF")
    tp = _translate(_resolve(t))
    mode = CheckMode.STRICT if args.strict else CheckMode.BACKTRACKING
    report = check_translated(tp, mode, budget=args.budget)
    status = _exit_for(report.verdict)
    print({
        ExitStatus.VERIFIED: "VERIFIED",
        ExitStatus.REJECTED: "REJECTED",
        ExitStatus.GUIDANCE_ERROR: report.verdict.value.upper(),
    }[status])
    if report.error:
        _err(report.error)
    if args.stats:
        for name in ("nodes_visited", "max_depth", "backtracks", "probe_backtracks", "antecedent_backtracks"):
            print(f"{name} {getattr(report, name)}")
    return status


def cmd_translate(args) -> ExitStatus:
    tp = _translate(_resolve(_load_trace(args.trace)))
    sys.stdout.write(dump_translated(tp))
    return ExitStatus.VERIFIED


def cmd_reorder(args) -> ExitStatus:
    t = _checked_input(_load_trace(args.trace))
    try:
        out = harness.reorder_trace(t, budget=args.budget)
    except harness.ReorderError as e:
        raise _Fail(_exit_for(e.verdict), str(e))
    Path(args.out).write_text(serialize_trace(out))
    return ExitStatus.VERIFIED


def cmd_experiment(args) -> ExitStatus:
    t = _checked_input(_load_trace(args.trace))
    trace_id = Path(args.trace).stem
    try:
        if args.exp == 1:
            records, summary = harness.run_experiment1(
                t, args.budget, args.sample_cap, args.seed, trace_id)
        elif args.exp == 2:
            records, summary = harness.run_experiment2(
                t, args.budget, args.sample_cap, args.seed, trace_id)
        else:
            records, summary = harness.run_experiment3(t, args.budget, args.combo_cap, trace_id)
    except harness.ExperimentError as e:
        raise _Fail(ExitStatus.FORMAT_ERROR, str(e))
    if args.out:
        harness.write_csv(records, args.out)
    else:
        harness.write_csv(records, sys.stdout)
    out = sys.stdout if args.out else sys.stderr
    for line in summary.lines():
        print(line, file=out)
    return ExitStatus.VERIFIED


def cmd_gen(args) -> ExitStatus:
    if not 1 <= args.vars <= MAX_GENERATE_VARS:
        raise _Fail(ExitStatus.FORMAT_ERROR, f"--vars must be between 1 and {MAX_GENERATE_VARS}")
    try:
        seed, p, t = generate_unsat(args.vars, args.clauses, args.seed, retries=args.retries)
    except OracleError as e:
        raise _Fail(ExitStatus.GUIDANCE_ERROR, str(e))
    if args.cnf:
        Path(args.cnf).write_text(serialize_dimacs(p))
    if args.trace_out:
        Path(args.trace_out).write_text(serialize_trace(t))
    else:
        sys.stdout.write(serialize_trace(t))
    _err(f"seed {seed}")
    return ExitStatus.VERIFIED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tracefpc", description="Check Trace UNSAT refutations.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="verify a trace")
    c.add_argument("trace")
    c.add_argument("cnf", nargs="?", help="DIMACS file the originals must match")
    c.add_argument("--strict", action="store_true", help="decide only on the head antecedent")
    c.add_argument("--budget", type=int, default=None, help="node budget")
    c.add_argument("--stats", action="store_true", help="print search counters")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("translate", help="dump the translated problem")
    c.add_argument("trace")
    c.set_defaults(func=cmd_translate)

    c = sub.add_parser("reorder", help="rewrite antecedents in a strict-checkable order")
    c.add_argument("trace")
    c.add_argument("out")
    c.add_argument("--budget", type=int, default=None)
    c.set_defaults(func=cmd_reorder)

    c = sub.add_parser("experiment", help="run an antecedent-ordering experiment")
    c.add_argument("trace")
    c.add_argument("--exp", type=int, choices=(1, 2, 3), required=True)
    c.add_argument("--budget", type=int, default=harness.DEFAULT_BUDGET)
    c.add_argument("--seed", type=int, default=harness.DEFAULT_SEED)
    c.add_argument("--sample-cap", type=int, default=1000)
    c.add_argument("--combo-cap", type=int, default=10_000)
    c.add_argument("--out", help="CSV path (default: stdout)")
    c.set_defaults(func=cmd_experiment)

    c = sub.add_parser("gen", help="generate an UNSAT CNF and its trace")
    c.add_argument("--vars", type=int, default=6)
    c.add_argument("--clauses", type=int, default=28)
    c.add_argument("--seed", type=int, default=harness.DEFAULT_SEED)
    c.add_argument("--retries", type=int, default=1000)
    c.add_argument("--cnf", help="write the CNF here")
    c.add_argument("--trace", dest="trace_out", help="write the trace here (default: stdout)")
    c.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return int(args.func(args))
    except _Fail as e:
        _err(f"error: {e}")
        if e.status is ExitStatus.REJECTED and args.command == "check":
            print("REJECTED")
        return int(e.status)


if __name__ == "__main__":
    sys.exit(main())
