import json
import subprocess
import sys

import pytest

from conftest import DATA
from lysachor.cli import RunConfig, main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name, code", [("acc_v1", 1), ("acc_half", 1), ("acc_final", 0)])
def test_check_verdicts(capsys, name, code):
    got, out, _ = run(capsys, "check", DATA / f"{name}.lysa")
    assert got == code
    assert out.rstrip().endswith("ok" if code == 0 else "VIOLATIONS FOUND")


def test_check_reports_flaw_and_choice(capsys):
    _, out, _ = run(capsys, "check", DATA / "acc_v1.lysa")
    assert "Temp1^Th1 ∉ Σ̂_Th2(mt)" in out
    assert "NoChoiceAwareness" in out and "Deadlock" in out


def test_check_on_machine_file(capsys):
    code, out, _ = run(capsys, "check", DATA / "loop_exit.cfsm")
    assert code == 1
    assert "cfa:" not in out


FORMATS = [(c, f) for c in ("parse", "cfa", "compile", "gmc", "simulate", "gg")
           for f in ("json", "text", "dot") if not (f == "dot" and c in ("parse", "cfa"))]


@pytest.mark.parametrize("cmd, fmt", FORMATS)
def test_every_command_is_deterministic(capsys, cmd, fmt):
    first = run(capsys, cmd, DATA / "acc_final.lysa", "--format", fmt)
    second = run(capsys, cmd, DATA / "acc_final.lysa", "--format", fmt)
    assert first == second
    assert first[0] == 0 and first[1]
    if fmt == "json":
        json.loads(first[1])


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.lysa"
    bad.write_text("node N =\n  process =\n    x := ;\n    nil\n")
    code, _, err = run(capsys, "parse", bad, "--error-json")
    assert code == 2
    detail = json.loads(err.strip().splitlines()[-1])
    assert detail["error"] == "syntax" and (detail["line"], detail["col"]) == (3, 10)


def test_semantic_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.lysa"
    bad.write_text("node N =\n  process =\n    x := y;\n    nil\n")
    code, _, err = run(capsys, "cfa", bad, "--error-json")
    assert code == 2
    assert json.loads(err.strip().splitlines()[-1])["errors"][0]["kind"] == "UnboundVariable"


def test_missing_file_and_bad_interchange(tmp_path, capsys):
    assert run(capsys, "gmc", tmp_path / "nope.lysa")[0] == 2
    bad = tmp_path / "m.cfsm"
    bad.write_text(".machine A\nq0 A-B ! x q1\n")
    assert run(capsys, "gmc", bad)[0] == 2
    assert run(capsys, "parse", DATA / "loop_exit.cfsm")[0] == 2


def test_bounds_are_validated(capsys):
    assert run(capsys, "simulate", DATA / "loop_exit.cfsm", "--buffer-bound", "0")[0] == 2
    assert run(capsys, "check", DATA / "loop_exit.cfsm", "--emit", "nonsense")[0] == 2
    with pytest.raises(ValueError):
        RunConfig("simulate", DATA / "loop_exit.cfsm", state_limit=0)


def test_compile_writes_three_files(tmp_path, capsys):
    assert run(capsys, "compile", DATA / "acc_final.lysa", "--out", tmp_path)[0] == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == \
        ["acc_final.cfsm", "acc_final.cfsm.json", "acc_final.dot"]
    # the written machines feed straight back in
    assert run(capsys, "gmc", tmp_path / "acc_final.cfsm")[0] == 0


def test_check_emits_stages(tmp_path, capsys):
    code, out, _ = run(capsys, "check", DATA / "acc_half.lysa", "--out", tmp_path,
                       "--emit", "gmc,gg")
    assert code == 1 and out == ""
    names = {p.name for p in tmp_path.iterdir()}
    assert "acc_half.check.txt" in names and len(names) == 3


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "lysachor.cli", "gg", str(DATA / "loop_exit.cfsm")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "A → C : exit" in proc.stdout
