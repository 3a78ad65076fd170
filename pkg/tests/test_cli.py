import subprocess
import sys

import pytest

from pun import corpus
from pun.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_passing_file_exits_zero(capsys):
    code, out, _ = run(capsys, corpus.path("arith_props.pun"), "--seed", 5)
    assert code == 0
    assert out.splitlines() == [
        "-- seed: 5",
        "testing add-is-commutative: " + "." * 50 + " ok",
        "testing plus-zero-identity: " + "." * 50 + " ok",
    ]


def test_failing_file_exits_one(capsys):
    code, out, _ = run(capsys, corpus.path("sub_props.pun"), "--seed", 5)
    assert code == 1
    assert '"failed with counter example :"' in out


def test_tests_flag_sets_dot_count(capsys):
    _, out, _ = run(capsys, corpus.path("arith_props.pun"), "--seed", 1, "--tests", 7)
    assert out.splitlines()[1] == "testing add-is-commutative: ....... ok"


def test_same_seed_same_output(capsys):
    first = run(capsys, corpus.path("bst.pun"), "--seed", 77, "--tests", 15)
    second = run(capsys, corpus.path("bst.pun"), "--seed", 77, "--tests", 15)
    assert first == second


def test_seed_is_echoed_when_chosen(capsys):
    _, out, _ = run(capsys, corpus.path("arith_props.pun"), "--tests", 1)
    seed = out.splitlines()[0]
    assert seed.startswith("-- seed: ") and int(seed.split()[-1]) >= 0


def test_missing_file(capsys, tmp_path):
    code, out, err = run(capsys, tmp_path / "absent.pun")
    assert code == 2 and out == "" and "cannot read" in err


def test_ill_typed_file(capsys, tmp_path):
    src = tmp_path / "bad.pun"
    src.write_text("f : integer -> boolean .\nf x = x + 1 .\n")
    code, _, err = run(capsys, src, "--check")
    assert code == 2
    assert "type error in f: expected integer -> boolean, found " in err


def test_parse_error(capsys, tmp_path):
    src = tmp_path / "bad.pun"
    src.write_text("property p x . x == .\n")
    code, _, err = run(capsys, src)
    assert code == 2 and err


def test_check_only(capsys):
    code, out, _ = run(capsys, corpus.path("bst_props.pun"), "--check")
    assert code == 0 and out == ""


def test_eval(capsys):
    code, out, _ = run(capsys, corpus.path("listings/fib.pun"), "--eval", "fib-five")
    assert (code, out) == (0, "8\n")


def test_eval_rejects_functions(capsys):
    code, _, err = run(capsys, corpus.path("bst.pun"), "--eval", "insert")
    assert code == 2 and "argument-free" in err


def test_eval_unknown_name(capsys):
    code, _, _ = run(capsys, corpus.path("bst.pun"), "--eval", "nothing")
    assert code == 2


def test_bad_generator_flags(capsys):
    code, _, _ = run(capsys, corpus.path("arith_props.pun"), "--int-min", 5, "--int-max", 1)
    assert code == 2
    with pytest.raises(SystemExit):
        main([str(corpus.path("arith_props.pun")), "--var-bias", "2"])


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "pun", str(corpus.path("arith_props.pun")), "--seed", "3"],
        capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("-- seed: 3\n")
