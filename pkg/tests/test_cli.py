import json
import subprocess
import sys

import pytest

from tameiso.harness.cli import EXIT_FAIL, EXIT_OK, EXIT_SOLVER, EXIT_USAGE, run_cli


def run(capsys, *argv):
    code = run_cli(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_apply_and_bracket(capsys):
    assert run(capsys, "apply", "--op", "dX = 0 ; dY = X^2", "--p", "Y")[:2] == (EXIT_OK, "X^2\n")
    code, out, _ = run(capsys, "apply", "--op", "X -> X + 1 ; Y -> 2*Y", "--p", "X*Y")
    assert code == EXIT_OK and out.strip() == "2*X*Y + 2*Y"
    code, out, _ = run(capsys, "bracket", "--d1", "dX = 1 ; dY = 0", "--d2", "dX = X ; dY = 0")
    assert out.strip() == "dX = 1 ; dY = 0"


def test_exp_example(capsys):
    code, out, _ = run(capsys, "exp", "--d", "dX = X ; dY = Y + X")
    assert code == EXIT_OK
    assert out.strip() == "X -> E(1)*X ; Y -> E(1)*X + E(1)*Y"
    code, out, _ = run(capsys, "--json", "exp", "--d", "dX = 0 ; dY = X^2")
    js = json.loads(out)
    assert js["automorphism"] == "X -> X ; Y -> X^2 + Y"


def test_jordan_and_lfd(capsys):
    code, out, _ = run(capsys, "--json", "jordan", "--d", "dX = 2*X ; dY = 6*Y + X^3")
    js = json.loads(out)
    assert code == EXIT_OK and js["semisimple"] == "dX = 2*X ; dY = 6*Y" and js["nilpotent"] == "dX = 0 ; dY = X^3"
    assert all(js["certificate"].values())
    assert run(capsys, "lfd-check", "--d", "dX = X^2 ; dY = 0")[0] == EXIT_FAIL
    assert run(capsys, "lfd-check", "--d", "dX = X ; dY = Y")[0] == EXIT_OK


def test_commute(capsys):
    assert run(capsys, "commute", "--lhs", "dX = 0 ; dY = X^2", "--rhs", "X -> -X ; Y -> Y")[1].strip() == "commute"
    assert run(capsys, "commute", "--lhs", "dX = 1 ; dY = Y", "--rhs", "X -> X ; Y -> Y + 1")[1].strip() == "do not commute"


def test_isotropy_solve(capsys):
    code, out, _ = run(capsys, "--json", "isotropy-solve", "--target", "deriv", "--d", "dX = 0 ; dY = X^2",
                       "--shape", "rho", "--deg", "4")
    js = json.loads(out)
    assert code == EXIT_OK
    assert js["components"][0]["unit_constraint"] == {"kind": "PowerEquation", "s": 2, "c": "1"}
    code, out, _ = run(capsys, "--json", "isotropy-solve", "--target", "exp", "--d", "dX = 1 ; dY = 2*Y",
                       "--shape", "theta", "--deg", "8")
    assert code == EXIT_OK and len(json.loads(out)["components"]) == 1


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--family", "FLOW_B", "--params", "b=2")
    assert code == EXIT_OK and "equal=True" in out
    code, out, _ = run(capsys, "--json", "verify", "--family", "LINEAR_DIAG", "--params", "a=2,b=1")
    js = json.loads(out)
    assert js["equal"] and [f["id"] for f in js["discrepancy_flags"]] == ["diag-ratio"]
    assert "timings_ms" not in js


def test_exit_codes(capsys):
    assert run(capsys, "exp", "--d", "dX = X^(1/2) ; dY = 0")[0] == EXIT_USAGE
    assert run(capsys, "verify", "--family", "RESONANT_AM", "--params", "a=0,m=1")[0] == EXIT_USAGE
    assert run(capsys, "verify", "--family", "NOPE", "--params", "a=1")[0] == EXIT_USAGE
    assert run(capsys, "no-such-command")[0] == EXIT_USAGE
    assert run(capsys, "--deg-cap", "3", "exp", "--d", "dX = 0 ; dY = X^4")[0] == EXIT_SOLVER
    assert run(capsys, "exp", "--d", "dX = X^2 ; dY = 0", "--dim-cap", "8")[0] == EXIT_SOLVER


def test_verify_all_json_deterministic(capsys):
    code, first, _ = run(capsys, "--json", "verify-all", "--deg", "8")
    assert code == EXIT_OK
    reports = json.loads(first)
    assert len(reports) == 20 and all(r["equal"] for r in reports)
    code, second, _ = run(capsys, "--json", "verify-all", "--deg", "8", "--jobs", "2")
    assert first == second


@pytest.mark.parametrize("argv,code", [(["--help"], 0), (["exp", "--d", "dX = 1 ; dY = 0"], 0)])
def test_console_entry(argv, code):
    proc = subprocess.run([sys.executable, "-m", "tameiso.harness.cli", *argv], capture_output=True, text=True)
    assert proc.returncode == code
