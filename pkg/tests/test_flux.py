"""Kirchhoff operator, signed copies and flat/signed conversion."""

import pytest
from hypothesis import given, settings, strategies as st

from ground_oracle import denote, engine_alternatives
from strategies import ground_tuplix, open_tuplix
from tuplix.basic import clear, normalize
from tuplix.core import EPS, Attribute, Scalar
from tuplix.data import Const, Var
from tuplix.equality import Verdict, tuplix_eq
from tuplix.errors import MalformedInput
from tuplix.flux import kirchhoff, kirchhoff_t, sign_annotate, to_flat, to_signed
from tuplix.syntax import format_tuplix, parse_tuplix


def P(text):
    return parse_tuplix(text)


def eq(p, q):
    return tuplix_eq(p, q).verdict is Verdict.EQUAL


class TestKirchhoff:
    def test_reserve_balance(self):
        got = kirchhoff(P("sum u, v, w, x . a_0(-u) & b_0(-v) & c_0(w) & a_1(x)"))
        want = P("sum u, v, w, x . [u + v == w + x] & a_0(-u) & b_0(-v) & c_0(w) & a_1(x)")
        assert eq(got, want)

    def test_empty(self):
        assert str(normalize(kirchhoff(EPS))) == "eps"

    def test_balanced(self):
        assert str(normalize(kirchhoff(P("a(5) & b(-5)")))) == "a(5) & b(-5)"

    def test_unbalanced(self):
        assert normalize(kirchhoff(P("a(5)"))).is_null

    def test_start_value(self):
        assert str(normalize(kirchhoff_t(Const(-5), P("a(5)")))) == "a(5)"

    def test_per_alternative(self):
        assert str(normalize(kirchhoff(P("a(1) + a(0) + b(2) & c(-2)")))) == \
            "a(0) + b(2) & c(-2)"

    def test_binder_renamed_apart_from_start(self):
        got = kirchhoff_t(Var("x"), P("sum x . a(x)"))
        assert got.var != "x"
        assert str(normalize(got)) == "a(-x)"

    def test_signed_entries_counted_flat(self):
        # flat reading: +a(1) is a(1) and -b(-1) is b(1), so the total is 2
        assert normalize(kirchhoff(P("+a(1) & -b(-1)"))).is_null
        assert str(normalize(kirchhoff(P("+a(1) & -b(-1)"), count_signed=False))) == \
            "+a(1) & -b(-1)"
        assert str(normalize(kirchhoff(P("+a(1) & -b(1)")))) == "+a(1) & -b(1)"

    def test_rejects_operators(self):
        with pytest.raises(MalformedInput):
            kirchhoff(Scalar(Const(2), P("a(1)")))


class TestSignedCopy:
    def test_output(self):
        got = sign_annotate(P("a(-1) & b(1)"), ["b"], ins=["a"], outs=["b"])
        assert str(normalize(got)) == "a(-1) & b(1) & +b(1)"

    def test_test_untouched(self):
        assert sign_annotate(P("[x]"), ["b"], ins=["a"], outs=["b"]) == P("[x]")

    def test_nothing_hidden(self):
        term = P("a(-1) & b(1)")
        assert sign_annotate(term, [], ins=["a"], outs=["b"]) == term

    def test_input(self):
        got = sign_annotate(P("b(-1)"), ["b"], ins=["b"], outs=["c"])
        assert str(normalize(got)) == "b(-1) & -b(1)"

    def test_foreign_attribute(self):
        with pytest.raises(MalformedInput):
            sign_annotate(P("d(1)"), ["b"], ins=["a"], outs=["b"])


class TestConversion:
    def test_plus(self):
        assert format_tuplix(to_flat(P("+a(5)"))) == "a(5)"

    def test_minus(self):
        assert str(normalize(to_flat(P("-a(5)")))) == "a(-5)"

    def test_input_becomes_minus(self):
        assert str(normalize(to_signed(P("a(7)"), ins=["a"], outs=[]))) == "-a(-7)"

    def test_unclassified(self):
        with pytest.raises(MalformedInput):
            to_signed(P("a(7)"), ins=["b"], outs=["c"])


# -- properties ----------------------------------------------------------------


def _total(alt):
    return sum(-v if k.startswith("-") else v for k, v in alt)


@settings(max_examples=300, deadline=None)
@given(ground_tuplix(max_leaves=8, signed=True))
def test_kirchhoff_keeps_balanced_alternatives(p):
    """Checked against a direct fold over the oracle's alternatives."""
    body = normalize(p).to_tuplix()
    got = set(engine_alternatives(normalize(kirchhoff(body))))
    assert got == {a for a in denote(p) if _total(a) == 0}


@settings(max_examples=200, deadline=None)
@given(open_tuplix())
def test_kirchhoff_idempotent(p):
    once = normalize(kirchhoff(normalize(p).to_tuplix()))
    twice = normalize(kirchhoff(once.to_tuplix()))
    assert tuplix_eq(once, twice).verdict is Verdict.EQUAL


@settings(max_examples=200, deadline=None)
@given(ground_tuplix(max_leaves=8), st.sets(st.sampled_from(["a", "b", "c"])))
def test_clearing_signed_copies_restores(p, hide):
    body = normalize(p).to_tuplix()
    ins, outs = ["a", "b"], ["c"]
    copied = sign_annotate(body, hide, ins, outs)
    signed = [Attribute(n, s) for n in "abc" for s in "+-"]
    assert clear(signed, copied) == normalize(body)


@settings(max_examples=200, deadline=None)
@given(ground_tuplix(max_leaves=8))
def test_flat_after_signed_is_identity(p):
    body = normalize(p).to_tuplix()
    back = to_flat(to_signed(body, ins=["a", "c"], outs=["b"]))
    assert normalize(back) == normalize(body)
