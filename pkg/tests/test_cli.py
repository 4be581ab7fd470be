import io
import subprocess
import sys
from pathlib import Path

import pytest

from kleene_morita.cli import run

DATA = Path(__file__).parent / "data"
BOOL2 = str(DATA / "bool2.ks")

# command lines exercised for determinism; every group and command appears
COMMANDS = [
    ["ka", "check", "bool2"],
    ["ka", "check", "rel(2)"],
    ["ka", "check", BOOL2],
    ["ka", "star", "M2(bool2)", "[1 1; 0 0]"],
    ["module", "check", "reg(rel(2))"],
    ["module", "check", f"{BOOL2}:K2"],
    ["module", "free", "bool2", "2"],
    ["module", "dual", "free(bool2,2)"],
    ["module", "hom", "free(bool2,2)", "left(bool2)"],
    ["module", "quotient", "free(bool2,2)", "--pair", "1,2"],
    ["module", "iso", "free(bool2,1)", "left(bool2)"],
    ["tensor", "col(bool2,2)", "row(bool2,2)", "--method", "exhaustive"],
    ["tensor", "adjunction", "reg(bool2)", "reg(bool2)", "reg(bool2)"],
    ["tensor", "adjunction", "reg(bool2)", "reg(bool2)", "reg(bool2)", "--samples", "2", "--seed", "7"],
    ["tensor", "laws", "col(bool2,2)", "row(bool2,2)", "col(bool2,2)"],
    ["morita", "matrix", "bool2", "2"],
    ["morita", "full-idempotents", "bool2", "2"],
    ["morita", "corner", "bool2", "2", "--idempotent", "E11"],
    ["morita", "lift", "bool2", "2", "--idempotent", "E11"],
    ["morita", "hom-module", "scalar(bool2,2)"],
    ["morita", "compose-law", "id(bool2)", "scalar(bool2,2)"],
    ["morita", "equivalence", "bool2", "2"],
]


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("argv", COMMANDS, ids=[" ".join(c[:2]) for c in COMMANDS])
def test_commands_pass_and_repeat(argv):
    first = cli(*argv)
    assert first[0] == 0, first[1] + first[2]
    assert cli(*argv) == first


def test_ka_check_file_exit_zero():
    code, out, _ = cli("ka", "check", BOOL2)
    assert code == 0 and "verdict: pass" in out


def test_property_failure_exit_one(tmp_path):
    bad = tmp_path / "bad.ks"
    bad.write_text("kleene_algebra B { elements: 2 ; zero: 0 ; one: 1 ; add: [[0,1],[1,1]] ;"
                   " mul: [[0,0],[0,1]] ; star: [0,1] }\n")
    code, out, _ = cli("ka", "check", str(bad))
    assert code == 1 and "star_unroll" in out and "a=0" in out.replace(" ", "").replace(":", "=")


def test_usage_and_parse_errors(tmp_path):
    assert cli("ka")[0] == 2
    assert cli("ka", "check", "nosuch(3)")[0] == 2
    broken = tmp_path / "broken.ks"
    broken.write_text("kleene_algebra A {\n elements: 2 ; add: [[0]] }")
    code, _, err = cli("ka", "check", str(broken))
    assert code == 2 and "line 2" in err and "'A'" in err


def test_non_full_lift_is_error():
    code, out, _ = cli("morita", "lift", "bool2", "2", "--idempotent", "0")
    assert code == 2 and "verdict: error" in out


def test_matrix_three_reports_chain():
    code, out, _ = cli("morita", "matrix", "bool2", "3")
    assert code == 0
    assert "(1 0 0) ⊗ (1 0 0)ᵗ" in out and "(1 1 1) ⊗ (1 1 1)ᵗ" in out
    for name in ("bullet_row_times_bar", "bullet_bar_times_column", "bullet_ones_fixes_sum",
                 "bullet_row_times_ones", "diagonal_chain"):
        assert name in out


@pytest.mark.parametrize("argv", [
    ["morita", "matrix", "bool2", "1"],
    ["morita", "matrix", "bool2", "2"],
    ["morita", "lift", "bool2", "2", "--idempotent", "E11"],
    ["morita", "lift", "bool2", "2", "--idempotent", "E11+E12"],
    ["tensor", "col(bool2,2)", "row(bool2,2)"],
])
def test_emitted_files_verify(tmp_path, argv):
    a, b = tmp_path / "a.ks", tmp_path / "b.ks"
    assert cli(*argv, "--emit", str(a))[0] == 0
    assert cli(*argv, "--emit", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    code, out, _ = cli("verify", str(a))
    assert code == 0, out


def test_timing_goes_to_stderr():
    code, out, err = cli("ka", "check", "bool2", "--timing")
    assert code == 0 and "elapsed" in err and "elapsed" not in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kleene_morita", "ka", "check", "bool2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "verdict: pass" in proc.stdout
