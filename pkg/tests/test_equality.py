"""Equality verdicts checked against the ground oracle."""

import itertools
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from ground_oracle import denote
from strategies import ATTRS, data_terms
from tuplix.core import Alt, Attribute, Conj, Delta, Entry, Eps, Test, substitute
from tuplix.data import Const, Neg
from tuplix.equality import Verdict, tuplix_eq
from tuplix.syntax import parse_tuplix

POINTS = [Fraction(v) for v in (-1, 0, 1, 2)]


def sum_free():
    payload = data_terms(("x", "y"), max_leaves=3)
    entry = st.builds(lambda a, t: Entry(Attribute(a), t), st.sampled_from(ATTRS), payload)
    leaf = st.one_of(st.just(Eps()), st.just(Delta()), payload.map(Test), entry)
    return st.recursive(leaf, lambda sub: st.one_of(st.builds(Conj, sub, sub),
                                                   st.builds(Alt, sub, sub)),
                        max_leaves=6)


def _lit(v):
    return Neg(Const(-v)) if v < 0 else Const(v)


def instances(p):
    for a, b in itertools.product(POINTS, repeat=2):
        yield denote(substitute(p, {"x": _lit(a), "y": _lit(b)}))


@settings(max_examples=300, deadline=None)
@given(sum_free(), sum_free())
def test_verdicts_are_sound(p, q):
    verdict = tuplix_eq(p, q).verdict
    pairs = list(zip(instances(p), instances(q)))
    if verdict is Verdict.EQUAL:
        assert all(x == y for x, y in pairs)
    elif verdict is Verdict.NOT_EQUAL:
        assert any(x != y for x, y in pairs)


@settings(max_examples=200, deadline=None)
@given(sum_free())
def test_reflexive(p):
    assert tuplix_eq(p, p).verdict is Verdict.EQUAL


def test_binder_names_do_not_matter():
    p = parse_tuplix("sum u . [u*y - 1] & a(u)")
    q = parse_tuplix("sum v . [v*y - 1] & a(v)")
    assert tuplix_eq(p, q).verdict is Verdict.EQUAL


def test_witness_on_difference():
    result = tuplix_eq(parse_tuplix("a(1) & b(2)"), parse_tuplix("a(1)"))
    assert result.verdict is Verdict.NOT_EQUAL
    assert result.witness == "attribute b occurs on one side only"
