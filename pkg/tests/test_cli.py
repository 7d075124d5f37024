"""Command line front end: output, exit codes and error reporting."""

import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from tuplix.cli import main

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"
TWO_UNITS = str(DATA / "two_units.tpx")


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def workspace(tmp_path):
    def write(text):
        path = tmp_path / "w.tpx"
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write


class TestNormalize:
    def test_text(self):
        assert run("normalize", TWO_UNITS, "both") == (0, "a(-1) & c(1)\n")

    def test_json(self):
        code, out = run("normalize", "--json", TWO_UNITS, "both")
        assert code == 0
        data = json.loads(out)
        assert data["null"] is False
        assert data["alternatives"][0]["entries"] == {"a": "-1", "c": "1"}

    def test_inline_term(self):
        assert run("normalize", TWO_UNITS, "encap{b}(g & h)") == (0, "a(-1) & c(1)\n")

    def test_null(self, capsys):
        code, out = run("normalize", TWO_UNITS, "null")
        assert (code, out) == (2, "null\n")
        assert "nullified" in capsys.readouterr().err

    def test_unknown_name(self, capsys):
        code, out = run("normalize", TWO_UNITS, "nosuch")
        assert code == 1 and out == ""
        assert "unknown name 'nosuch'" in capsys.readouterr().err

    def test_missing_file(self, capsys):
        assert run("normalize", "/nonexistent.tpx", "x")[0] == 1
        assert "cannot read" in capsys.readouterr().err

    def test_parse_errors_reported_with_position(self, workspace, capsys):
        path = workspace("let P = a(1 &\nlet Q = eps\n")
        assert run("normalize", path, "Q")[0] == 1
        assert ":1:13:" in capsys.readouterr().err

    def test_keep_summations(self, workspace):
        path = workspace("let P = sum x . [x - 3] & a(x)\n")
        assert run("normalize", path, "P")[1] == "a(3)\n"
        assert run("normalize", path, "P", "--mode", "none")[1].startswith("sum x")

    def test_trace(self, workspace, capsys):
        path = workspace("let P = sum x . [x - 3] & a(x)\n")
        run("normalize", "--trace", path, "P")
        assert "trace: sum x: solve" in capsys.readouterr().err

    def test_stdin(self, monkeypatch):
        monkeypatch.setattr(sys, "stdin", io.StringIO("let P = a(1) & a(2)\n"))
        assert run("normalize", "-", "P") == (0, "a(3)\n")


class TestEq:
    def test_equal(self):
        assert run("eq", str(DATA / "budget.tpx"), "B", "B_expected") == (0, "Equal\n")

    def test_not_equal(self):
        assert run("eq", TWO_UNITS, "a(1)", "a(2)") == (3, "NotEqual: a: 1 vs 2\n")

    def test_unknown(self):
        assert run("eq", TWO_UNITS, "[x]", "[y]") == (4, "Unknown\n")

    def test_json(self):
        code, out = run("eq", "--json", TWO_UNITS, "a(1)", "a(2)")
        assert code == 3
        assert json.loads(out) == {"verdict": "NotEqual", "witness": "a: 1 vs 2"}

    def test_seed_from_environment(self, monkeypatch):
        monkeypatch.setenv("TUPLIX_SEED", "0x10")
        assert run("eq", TWO_UNITS, "[x/x]", "[x]")[0] == 0
        monkeypatch.setenv("TUPLIX_SEED", "ten")
        assert run("eq", TWO_UNITS, "[x/x]", "[x]")[0] == 1


class TestNetworks:
    def test_check(self):
        assert run("check-net", TWO_UNITS) == (0, "ok; internal: {b}; external: {a,c}\n")

    def test_check_json(self):
        code, out = run("check-net", "--json", TWO_UNITS, "N")
        assert code == 0
        assert json.loads(out)["internal"] == ["b"]

    def test_violations(self, workspace):
        path = workspace("net M { unit g { in: a } unit h { in: a; out: b } }\n"
                         "spec g = a(1) & b(1)\n")
        code, out = run("check-net", path)
        assert code == 3
        assert "a is in-going for both g and h" in out
        assert "spec of g uses b" in out

    def test_self_channel_flagged(self, workspace):
        path = workspace("net M { unit g { in: a; out: a } }\n")
        assert run("check-net", path) == (
            0, "ok; internal: {a}; external: {}; self-channels: a at g\n")

    def test_unknown_network(self, capsys):
        assert run("check-net", TWO_UNITS, "Z")[0] == 1

    def test_encapsulate(self):
        assert run("encapsulate", TWO_UNITS, "N") == (0, "a(-1) & c(1)\n")

    def test_encapsulate_subset(self):
        assert run("encapsulate", TWO_UNITS, "N", "g", "--hide", "b")[0] == 2

    def test_focus(self):
        assert run("focus", TWO_UNITS, "N", "g") == (0, "a(-1) & +b(1)\n")
        assert run("focus", TWO_UNITS, "N", "h") == (0, "-b(1) & c(1)\n")

    def test_focus_unknown_unit(self, capsys):
        assert run("focus", TWO_UNITS, "N", "k")[0] == 1
        assert "UnknownUnit" in capsys.readouterr().err

    def test_flux(self, capsys):
        assert run("flux", TWO_UNITS, "unbalanced") == (2, "null\n")
        assert "nullified" in capsys.readouterr().err
        assert run("flux", TWO_UNITS, "a(5) & b(-5)") == (0, "a(5) & b(-5)\n")


def test_usage_error_is_not_null(capsys):
    # exit code 2 is reserved for null results
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 1
    assert "usage:" in capsys.readouterr().err


def test_module_entry_point():
    done = subprocess.run([sys.executable, "-m", "tuplix.cli", "focus", TWO_UNITS, "N", "g"],
                          capture_output=True, text=True, check=False)
    assert (done.returncode, done.stdout) == (0, "a(-1) & +b(1)\n")
