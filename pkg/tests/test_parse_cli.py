from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from samples import Q, ratfun

from mahler.cli import run
from mahler.parse import ExprSyntaxError, UnsupportedConstruct, evaluate, parse, parse_function, render_expr

SUMMABLE = "(-x^6 + 4*x^3 + x^2 - 4*x)/((x - 2)^2*(x^3 - 2)^2)"


@pytest.mark.parametrize(
    "src, expected",
    [
        ("-x^2", "-x^2"),
        ("(-x)^2", "(-x)^2"),
        ("x^-2", "x^(-2)"),
        ("2 - -x", "2 - (-x)"),
        ("1/(x^6+1)", "1/(x^6 + 1)"),
        ("x-(x-1)", "x - (x - 1)"),
    ],
)
def test_canonical_echo(src, expected):
    once = render_expr(parse(src, 2))
    assert once == expected
    assert render_expr(parse(once, 2)) == once


def test_precedence():
    F = Q[2]
    _node, f = parse_function("-x^2 + 2*x/4", 2)
    assert f == ratfun(F, [0, Fraction(1, 2), -1])
    _node, g = parse_function("(-x)^2", 2)
    assert g == ratfun(F, [0, 0, 1])


def test_constants_build_their_field():
    _node, f = parse_function("x - zeta(3)*root(2,3)", 3)
    assert f.field.N == 3 and f.field.P == 3
    _node, g = parse_function("zeta(4)^4 + root(4,2)^2", 2)
    assert g.is_constant()


@pytest.mark.parametrize(
    "src, offset",
    [("1/(x-", 5), ("x^y", 2), ("2**3", 2), ("x $ 1", 2), ("", 0), ("foo+1", 0)],
)
def test_syntax_errors_carry_offsets(src, offset):
    with pytest.raises(ExprSyntaxError) as info:
        parse(src, 2)
    assert info.value.offset == offset
    assert f"offset {offset}" in str(info.value)


def test_unsupported_constructs():
    with pytest.raises(UnsupportedConstruct):
        parse("root(2,3)", 2)
    with pytest.raises(UnsupportedConstruct):
        parse("zeta(0)", 2)
    with pytest.raises(ZeroDivisionError):
        evaluate(parse("x/(x-x)", 2), 2)


def test_cli_exit_codes(capsys):
    assert run(["--p", "3", "--input", SUMMABLE]) == 0
    assert run(["--p", "3", "--input", "1/(x^6+1)"]) == 1
    assert run(["--p", "1", "--input", "x"]) == 2
    assert "p must be" in capsys.readouterr().err
    assert run(["--p", "2", "--input", "1/(x^2-x-1)"]) == 2
    assert run(["--p", "2", "--input", "1/(x-"]) == 2
    assert run(["--p", "2"]) == 2


def test_cli_json(capsys):
    assert run(["--p", "3", "--input", "1/(x^6+1)", "--format", "json", "--oracle"]) == 1
    doc = json.loads(capsys.readouterr().out)
    assert doc["summable"] is False
    assert doc["oracle"] == {"summable": False, "agrees": True, "witness": None}
    (tree,) = doc["tree_residues"]
    assert tree["tree"] == {"torsion": {"r": 4, "orbit": 1}}
    assert tree["h"] == 1 and tree["e"] == 2
    assert tree["residues"]["1"]["zeta(12)^7"] == "1/4*zeta(12)"


def test_cli_text_with_certificate(capsys, tmp_path):
    src = tmp_path / "f.txt"
    src.write_text(SUMMABLE + "\n")
    assert run(["--p", "3", "--file", str(src), "--certificate", "--verify"]) == 0
    out = capsys.readouterr().out
    assert "summable: yes" in out
    assert "solution: 1/(x^2 - 4*x + 4)" in out
    assert "verified: ok" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "mahler", "--p", "2", "--input", "x^2 - x"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "summable: yes" in proc.stdout


def test_printed_functions_parse_back():
    _node, f = parse_function(SUMMABLE, 3)
    assert evaluate(parse(str(f), 3), 3, f.field) == f
