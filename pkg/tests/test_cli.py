import io
import json
import subprocess
import sys

import pytest

from interpforce.cli import main


def run(argv):
    out = io.StringIO()
    return main(argv, out), out.getvalue()


def test_force_prints_verdict(tmp_path, capsys):
    f = tmp_path / "f.sexp"
    f.write_text("(comp 1 2 0 1 =)")
    code, out = run(["force", "--condition", "(5,3);(3)", "--formula", str(f), "--pool", "8"])
    assert code == 0 and "Forces" in capsys.readouterr().err
    rec = json.loads(out.splitlines()[0])
    assert rec["check"] == "forces" and rec["verdict"] == "pass"


def test_force_uses_named_declaration(tmp_path, capsys):
    f = tmp_path / "f.txt"
    f.write_text("formula zero = (val 1 0 0 =)\nformula other = (val 1 0 1 =)\n")
    code, _ = run(["force", "--condition", "(1)", "--formula", str(f), "--name", "zero"])
    assert code == 0 and "ForcesNegation" in capsys.readouterr().err


def test_dsl_error_exits_2(tmp_path, capsys):
    f = tmp_path / "f.txt"
    f.write_text("formula g = (val 1 0 q =)")
    code, _ = run(["force", "--condition", "(1)", "--formula", str(f)])
    assert code == 2 and "unbound name 'q'" in capsys.readouterr().err


def test_unknown_structure_exits_2(capsys):
    code, _ = run(["verify", "--suite", "forcing-lemmas", "--structure", "nope"])
    assert code == 2 and capsys.readouterr().err.startswith("error:")


def test_verify_forcing_lemmas_exit_zero(tmp_path):
    path = tmp_path / "r.jsonl"
    code, out = run(["verify", "--suite", "forcing-lemmas", "--structure", "pureset", "--pool", "3", "--len", "2",
                     "--depth", "3", "--report", str(path)])
    assert code == 0 and "0 fail" in out and path.read_text()


def test_interpret_and_indiscernibles():
    code, out = run(["interpret", "--structure", "zring", "--interp", "fraction", "--len", "2", "--pool", "4"])
    assert code == 0 and any(json.loads(x)["check"] == "fragment" for x in out.splitlines())
    code, _ = run(["indiscernibles", "--structure", "pairs", "--interp", "pairs-classes", "--pool", "10"])
    assert code == 0


def test_biinterp_modes():
    assert run(["biinterp", "--to-adjoint", "pairs", "--pool", "10", "--samples", "2"])[0] == 0
    assert run(["biinterp", "--from-adjoint", "identity", "--pool", "10", "--samples", "2"])[0] == 0


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2


def test_module_entry_point():
    done = subprocess.run([sys.executable, "-m", "interpforce", "verify", "--suite", "forcing-lemmas",
                           "--pool", "2", "--len", "1", "--depth", "2"], capture_output=True, text=True)
    assert done.returncode == 0 and done.stdout
