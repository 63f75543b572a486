import json
import subprocess
import sys

import pytest

from ssg import cli
from ssg.presentation import serialize

from conftest import sunic_nucleus
from test_verdict import GE_JSON, GRIG_JSON


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate(capsys):
    assert run(capsys, "validate", "@grigorchuk") == (0, "5 states, alphabet {0,1}, identity e\n", "")


def test_simplicity_json(capsys):
    code, out, _ = run(capsys, "simplicity", "@grigorchuk")
    assert code == 0
    assert json.loads(out) == GRIG_JSON
    code, out, _ = run(capsys, "simplicity", "@grigorchuk-erschler", "--cross-check")
    assert code == 0
    assert json.loads(out) == GE_JSON


def test_simplicity_json_is_byte_stable(capsys):
    _, first, _ = run(capsys, "simplicity", "@grigorchuk")
    _, second, _ = run(capsys, "simplicity", "@grigorchuk")
    assert first == second


def test_simplicity_text(capsys, monkeypatch):
    monkeypatch.setenv("SSG_COLOR", "0")
    code, out, _ = run(capsys, "simplicity", "@grigorchuk", "--format", "text")
    assert code == 0
    assert "Hausdorff groupoid: no" in out
    assert "not simple in characteristic 2" in out
    assert "H_111 = {e, b, c, d}" in out
    assert "\033[" not in out


def test_cross_check_mismatch_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli.oracle, "cross_check", lambda a, v, primes: ["characteristic 2: disagree"])
    code, _, err = run(capsys, "simplicity", "@grigorchuk", "--cross-check")
    assert code == 3
    assert "disagree" in err


def test_invalid_input(capsys, tmp_path):
    bad = tmp_path / "bad.ssg"
    bad.write_text("alphabet 0 1\nstate e 0 -> 0 . e, 1 -> 1 . e\n")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2
    assert "DslSyntaxError: line 2, column 9" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "validate", str(tmp_path / "absent.ssg"))
    assert code == 5
    assert "cannot read" in err


def test_capacity_exceeded(capsys, tmp_path):
    path = tmp_path / "sunic.ssg"
    path.write_text(serialize(sunic_nucleus()))
    code, _, err = run(capsys, "simplicity", str(path), "--capacity", "1024")
    assert code == 4
    assert "32768" in err


def test_capacity_floor():
    with pytest.raises(SystemExit):
        cli.main(["simplicity", "@grigorchuk", "--capacity", "10"])


def test_not_contracting(capsys, tmp_path):
    path = tmp_path / "lamplighter.ssg"
    path.write_text("alphabet 0 1\ngenerators a b\nstate e : 0 -> 0 . e, 1 -> 1 . e\n"
                    "state a : 0 -> 1 . a, 1 -> 0 . b\nstate b : 0 -> 0 . a, 1 -> 1 . b\n")
    code, _, err = run(capsys, "nucleus", str(path), "--depth", "3")
    assert code == 6
    assert "nucleus closure" in err


def test_nucleus_command(capsys, tmp_path):
    path = tmp_path / "odometer.ssg"
    path.write_text("alphabet 0 1\ngenerators a\nstate e : 0 -> 0 . e, 1 -> 1 . e\n"
                    "state a : 0 -> 1 . e, 1 -> 0 . a\n")
    code, out, _ = run(capsys, "nucleus", str(path))
    assert code == 0
    assert out.splitlines()[:2] == ["alphabet 0 1", "identity e"]
    assert len(out.splitlines()) == 5
    code, _, err = run(capsys, "nucleus", "@grigorchuk")
    assert code == 2
    assert "generators" in err


def test_graphs_stdout(capsys):
    code, out, _ = run(capsys, "graphs", "@grigorchuk")
    assert code == 0
    h, delta = out.split("}\n", 1)
    assert h.startswith("digraph H {")
    assert delta.startswith("digraph Delta {")
    # cyclic states and minimal vertices are doubled
    assert h.count("doublecircle") == 4
    assert delta.count("doublecircle") == 3
    assert delta.count("shape=") == 4
    assert '"e" -> "e" [label="0,1"]' in h
    assert '"b" -> "a" [label="0", style=dashed, color=gray]' in h


def test_graphs_files(capsys, tmp_path):
    prefix = tmp_path / "ge"
    code, out, _ = run(capsys, "graphs", "@grigorchuk-erschler", "-o", str(prefix))
    assert code == 0 and out == ""
    delta = (tmp_path / "ge_Delta.dot").read_text()
    assert delta.count("shape=") == 3
    assert delta.count("doublecircle") == 2
    assert (tmp_path / "ge_H.dot").read_text().startswith("digraph H {")


def test_stdin_input(capsys, monkeypatch):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO("alphabet 0 1\nstate e : 0 -> 0 . e, 1 -> 1 . e\n"))
    assert run(capsys, "validate", "-")[:2] == (0, "1 state, alphabet {0,1}, identity e\n")


def test_module_entry_point():
    result = subprocess.run([sys.executable, "-m", "ssg", "validate", "@dihedral"],
                            capture_output=True, text=True, check=False)
    assert result.returncode == 0
    assert result.stdout == "3 states, alphabet {0,1}, identity e\n"
