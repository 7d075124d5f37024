"""Concrete syntax: tokens, terms, workspaces and the printer."""

import pytest
from hypothesis import given, settings

from strategies import data_terms, ground_tuplix, open_tuplix
from tuplix.basic import normalize
from tuplix.core import Conj, Entry, Sum, Test
from tuplix.data import Add, Const, FnApp, Mul, Neg, Var
from tuplix.meadow import eval_data
from tuplix.syntax import (
    ParseError, format_tuplix, parse_data, parse_tuplix, parse_workspace,
)

NET = "net N { unit g { in: a; out: b } unit h { in: b; out: c } }\n"


class TestTerms:
    def test_budget_source(self):
        got = parse_tuplix("a(rew*(n1+n2))")
        assert got == Entry(got.attribute, Mul(Var("rew"), Add(Var("n1"), Var("n2"))))
        assert str(got.attribute) == "a"

    def test_equation_is_difference(self):
        got = parse_tuplix("[x == 0] & a(x)")
        assert isinstance(got, Conj) and isinstance(got.left, Test)
        assert got.left.term == Add(Var("x"), Neg(Const(0)))

    def test_sum_scope(self):
        got = parse_tuplix("sum x . a(-x) & b(x)")
        assert isinstance(got, Sum) and isinstance(got.body, Conj)

    def test_several_binders(self):
        got = parse_tuplix("sum x, y . a(x) & b(y)")
        assert got.var == "x" and got.body.var == "y"

    def test_indexed_names(self):
        got = parse_tuplix("a_3(inc_0)")
        assert str(got.attribute) == "a_3" and got.term == Var("inc_0")

    def test_signed(self):
        assert str(parse_tuplix("+a(1)").attribute) == "+a"
        assert str(parse_tuplix("-a(1)").attribute) == "-a"

    def test_precedence(self):
        assert parse_data("-x + y") == Add(Neg(Var("x")), Var("y"))
        assert parse_data("x*-y") == Mul(Var("x"), Neg(Var("y")))
        d = parse_data("x / y * z")
        assert eval_data(d, {"x": 6, "y": 2, "z": 3}) == 9

    def test_function_application(self):
        assert parse_data("f(1, x)") == FnApp("f", (Const(1), Var("x")))

    def test_names_from_env(self):
        g = parse_tuplix("a(1)")
        assert parse_tuplix("g & g", {"g": g}) == Conj(g, g)

    @pytest.mark.parametrize("text, where", [
        ("a(1) &&", "1:7"),
        ("a(1", "1:4"),
        ("[x ==]", "1:6"),
        ("a(1) $", "1:6"),
    ])
    def test_error_positions(self, text, where):
        with pytest.raises(ParseError) as err:
            parse_tuplix(text)
        assert str(err.value).startswith(where)


class TestWorkspace:
    def test_statements(self):
        ws = parse_workspace(NET + "spec g = a(-1) & b(1)\nspec h = b(-1) & c(1)\n"
                                   "let P = encap{b}(g & h)\noption seed = 7\n")
        assert not ws.errors
        assert list(ws.networks) == ["N"] and list(ws.specs) == ["g", "h"]
        assert ws.seed == 7
        assert str(normalize(ws.lookup("P"))) == "a(-1) & c(1)"

    def test_continuation_lines(self):
        ws = parse_workspace("let P = a(1) &\n  b(2)\nlet Q = (a(1)\n + b(2))\n")
        assert not ws.errors
        assert str(normalize(ws.terms["P"])) == "a(1) & b(2)"

    def test_recovery(self):
        ws = parse_workspace(NET + "let bad = a(1 &\nlet ok = a(2)\nspec zz = a(1)\n"
                                   "let q = b(1)\n")
        assert [e.line for e in ws.errors] == [2, 4]
        assert sorted(ws.terms) == ["ok", "q"]

    def test_duplicates(self):
        ws = parse_workspace("let P = eps\nlet P = null\n")
        assert len(ws.errors) == 1 and "bound twice" in ws.errors[0].message

    def test_shared_attribute_reported_elsewhere(self):
        # disjointness is a validation concern, not a syntax error
        ws = parse_workspace("net N { unit g { in: a } unit h { in: a } }\n")
        assert not ws.errors

    def test_unknown_statement(self):
        ws = parse_workspace("frob x\nlet P = eps\n")
        assert ws.errors[0].line == 1 and "P" in ws.terms


class TestPrinter:
    @pytest.mark.parametrize("text", [
        "eps", "null", "[x]", "a(-1) & +b(1)", "a(1) + b(2)", "sum x . [x - y] & a(x)",
        "encap{a, b}(a(1))", "K(a(1))", "2 * (a(1) + b(1))", "def f = lam x . x + x in a(f(1))",
    ])
    def test_reparses(self, text):
        p = parse_tuplix(text)
        assert parse_tuplix(format_tuplix(p)) == p


@settings(max_examples=300, deadline=None)
@given(open_tuplix())
def test_round_trip_basic_forms(p):
    q = normalize(p).to_tuplix()
    assert parse_tuplix(format_tuplix(q)) == q


@settings(max_examples=200, deadline=None)
@given(ground_tuplix(signed=True))
def test_round_trip_with_operators(p):
    assert normalize(parse_tuplix(format_tuplix(p))) == normalize(p)


@settings(max_examples=300, deadline=None)
@given(data_terms())
def test_data_round_trip(t):
    from tuplix.data import format_data
    assert parse_data(format_data(t)) == t
