import subprocess
import sys

import pytest

from tracefpc.cli import ExitStatus, main
from tracefpc.parse import parse_trace

from conftest import FIG2_TEXT

SWAPPED = FIG2_TEXT.replace("5 1 0 3 1 0\n6 0 4 2 5 0", "6 0 4 2 5 0\n5 1 0 3 1 0")


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_fig2(capsys, files):
    code, out, err = run(capsys, "check", files("fig2.trace", FIG2_TEXT))
    assert code == ExitStatus.VERIFIED and out == "VERIFIED\n"


def test_check_stats(capsys, files):
    code, out, _ = run(capsys, "check", files("fig2.trace", FIG2_TEXT), "--stats")
    assert out.splitlines() == [
        "VERIFIED", "nodes_visited 63", "max_depth 18", "backtracks 8",
        "probe_backtracks 5", "antecedent_backtracks 3",
    ]


def test_check_swapped(capsys, files):
    code, out, _ = run(capsys, "check", files("s.trace", SWAPPED))
    assert code == ExitStatus.REJECTED and out == "REJECTED\n"


def test_check_garbage(capsys, files):
    code, out, err = run(capsys, "check", files("garbage.trace", "this is not a trace\n"))
    assert code == ExitStatus.FORMAT_ERROR and out == "" and "line 1" in err


def test_check_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "check", str(tmp_path / "nope.trace"))
    assert code == ExitStatus.FORMAT_ERROR and err


def test_check_with_cnf(capsys, files):
    trace = files("fig2.trace", FIG2_TEXT)
    good = files("g.cnf", "p cnf 2 4\n1 2 0\n-1 2 0\n1 -2 0\n-1 -2 0\n")
    bad = files("b.cnf", "p cnf 2 3\n-1 2 0\n1 -2 0\n-1 -2 0\n")
    assert run(capsys, "check", trace, good)[0] == ExitStatus.VERIFIED
    code, out, err = run(capsys, "check", trace, bad)
    assert code == ExitStatus.FORMAT_ERROR and "chain 1" in err


def test_check_strict_and_budget(capsys, files):
    trace = files("fig2.trace", FIG2_TEXT)
    assert run(capsys, "check", trace, "--strict")[0] == ExitStatus.REJECTED
    code, out, _ = run(capsys, "check", trace, "--budget", "5")
    assert code == ExitStatus.GUIDANCE_ERROR and out == "BUDGET_EXCEEDED\n"


def test_check_bad_implicit_chain(capsys, files):
    code, out, err = run(capsys, "check", files("x.trace", "1 1 0 0 2 2 0 0 3 * 1 2 0"))
    assert code == ExitStatus.REJECTED and out == "REJECTED\n" and "chain 3" in err


def test_check_untranslatable(capsys, files):
    assert run(capsys, "check", files("x.trace", "5 1 0 3 1 0"))[0] == ExitStatus.FORMAT_ERROR


def test_translate(capsys, files):
    code, out, _ = run(capsys, "translate", files("fig2.trace", FIG2_TEXT))
    assert code == 0 and out.splitlines()[2:] == ["chain(5,[3,1],x(1))", "chain(6,[4,2,5],false)"]


def test_reorder_then_strict(capsys, files, tmp_path):
    out_path = str(tmp_path / "out.trace")
    assert run(capsys, "reorder", files("fig2.trace", FIG2_TEXT), out_path)[0] == 0
    assert parse_trace(open(out_path).read()).by_index()[5].antecedents == (1, 3)
    assert run(capsys, "check", out_path, "--strict")[0] == ExitStatus.VERIFIED
    assert run(capsys, "reorder", files("s.trace", SWAPPED), out_path)[0] == ExitStatus.REJECTED


def test_experiment3_csv(capsys, files, tmp_path):
    csv_path = tmp_path / "r.csv"
    code, out, _ = run(capsys, "experiment", files("fig2.trace", FIG2_TEXT), "--exp", "3",
                       "--out", str(csv_path))
    assert code == 0
    assert len(csv_path.read_text().splitlines()) == 13
    assert "accepted 1" in out.splitlines()


def test_experiment_to_stdout(capsys, files):
    code, out, err = run(capsys, "experiment", files("fig2.trace", FIG2_TEXT), "--exp", "2")
    assert code == 0 and len(out.splitlines()) == 7 and "runs 6" in err


def test_experiment_errors(capsys, files):
    trace = files("fig2.trace", FIG2_TEXT)
    assert run(capsys, "experiment", trace, "--exp", "3", "--combo-cap", "5")[0] == ExitStatus.FORMAT_ERROR
    assert run(capsys, "experiment", files("o.trace", "1 1 0 0"), "--exp", "2")[0] == ExitStatus.FORMAT_ERROR


def test_gen_roundtrip(capsys, tmp_path):
    cnf, trace = str(tmp_path / "g.cnf"), str(tmp_path / "g.trace")
    code, _, err = run(capsys, "gen", "--vars", "2", "--clauses", "4", "--seed", "7",
                       "--cnf", cnf, "--trace", trace)
    assert code == 0 and err.startswith("seed ")
    assert run(capsys, "check", trace, cnf)[0] == ExitStatus.VERIFIED


def test_gen_stdout_and_limits(capsys):
    code, out, _ = run(capsys, "gen", "--vars", "3", "--clauses", "12", "--seed", "1")
    assert code == 0 and parse_trace(out).derived
    assert run(capsys, "gen", "--vars", "40")[0] == ExitStatus.FORMAT_ERROR
    assert run(capsys, "gen", "--vars", "3", "--clauses", "1", "--retries", "2")[0] == ExitStatus.GUIDANCE_ERROR


def test_module_entry_point(files):
    trace = files("fig2.trace", FIG2_TEXT)
    proc = subprocess.run([sys.executable, "-m", "tracefpc", "check", trace],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "VERIFIED\n"
