"""Hypothesis strategies shared by the property tests."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from tuplix.core import (
    Alt, Attribute, Clear, Conj, Delta, Encap, Entry, Eps, Scalar, Select, Sum,
    Test,
)
from tuplix.data import Add, Const, Inv, Mul, Neg, Var

VARS = ("x", "y", "z")
ATTRS = ("a", "b", "c")


def consts(lo=-3, hi=3):
    return st.integers(lo, hi).map(lambda n: Neg(Const(-n)) if n < 0 else Const(n))


def data_terms(names=VARS, max_leaves=8):
    leaf = st.one_of(consts(), st.sampled_from(names).map(Var))
    return st.recursive(
        leaf,
        lambda sub: st.one_of(
            st.builds(Add, sub, sub),
            st.builds(Mul, sub, sub),
            st.builds(Neg, sub),
            st.builds(Inv, sub),
        ),
        max_leaves=max_leaves,
    )


def rationals():
    return st.fractions(min_value=-5, max_value=5, max_denominator=7)


def envs(names=VARS):
    return st.fixed_dictionaries({n: rationals() for n in names})


def corner_envs(names=VARS):
    """Assignments drawn from {-1, 0, 1, 2}: these hit the zero cases of
    inverses far more often than random rationals do."""
    return st.fixed_dictionaries(
        {n: st.sampled_from([Fraction(v) for v in (-1, 0, 1, 2)]) for n in names})


def ground_tuplix(max_leaves=10, signed=False):
    signs = st.sampled_from(["", "+", "-"]) if signed else st.just("")
    entry = st.builds(lambda a, s, t: Entry(Attribute(a, s), t),
                      st.sampled_from(ATTRS), signs, consts(-2, 2))
    leaf = st.one_of(st.just(Eps()), st.just(Delta()), consts(-1, 1).map(Test), entry)
    attr_sets = st.sets(st.sampled_from(ATTRS), min_size=1).map(
        lambda s: frozenset(Attribute(a) for a in s))
    return st.recursive(
        leaf,
        lambda sub: st.one_of(
            st.builds(Conj, sub, sub),
            st.builds(Alt, sub, sub),
            st.builds(Scalar, consts(-2, 2), sub),
            st.builds(Encap, attr_sets, sub),
            st.builds(Clear, attr_sets, sub),
            st.builds(Select, attr_sets, sub),
        ),
        max_leaves=max_leaves,
    )


def open_tuplix(max_leaves=8):
    """Terms with free variables, tests and summations, no other operators."""
    payload = data_terms(("x", "y"), max_leaves=3)
    entry = st.builds(lambda a, t: Entry(Attribute(a), t), st.sampled_from(ATTRS), payload)
    leaf = st.one_of(st.just(Eps()), st.just(Delta()), payload.map(Test), entry)
    return st.recursive(
        leaf,
        lambda sub: st.one_of(
            st.builds(Conj, sub, sub),
            st.builds(Alt, sub, sub),
            st.builds(Sum, st.sampled_from(["x", "y", "u"]), sub),
        ),
        max_leaves=max_leaves,
    )
