"""Flux operators: the Kirchhoff operator and signed attribute copies.

All functions here rewrite tuplix syntax trees; the normalizer in
:mod:`tuplix.basic` expands them before computing basic forms.
"""

from __future__ import annotations

from typing import Iterable

from .core import (
    Alt, Attribute, Conj, Entry, Eps, Delta, DELTA, Sum, Test, Tuplix, alt,
    attr_set, children, conj, conj_factors, free_vars, rebuild, rename_bound,
)
from .data import ZERO, Add, DataTerm, Neg, as_term, var_names
from .errors import MalformedInput


def kirchhoff(p: Tuplix, start=ZERO, *, count_signed: bool = True) -> Tuplix:
    """``K_t(P)``: conjoin to every alternative of ``P`` the test that
    ``t`` plus the payloads of its entries is zero.

    Signed entries are counted through their flat reading (``+a(x)`` as
    ``x``, ``-a(x)`` as ``-x``) unless ``count_signed`` is false, in which
    case they are skipped.  Summations are pulled outwards and choices
    distributed, so the result has one such test per alternative."""
    return _k(as_term(start), conj_factors(p), count_signed)


def kirchhoff_t(t, p: Tuplix, **kw) -> Tuplix:
    return kirchhoff(p, t, **kw)


def _k(t: DataTerm, factors: list[Tuplix], count_signed: bool) -> Tuplix:
    for i, head in enumerate(factors):
        match head:
            case Delta():
                return DELTA
            case Test() | Eps():
                continue
            case Entry(a, x):
                if a.sign == "-":
                    if count_signed:
                        t = Add(t, Neg(x))
                elif not a.sign or count_signed:
                    t = Add(t, x)
                continue
            case Alt(left, right):
                rest = factors[:i] + factors[i + 1:]
                return alt(_k(t, rest + [left], count_signed),
                           _k(t, rest + [right], count_signed))
            case Sum():
                rest = factors[:i] + factors[i + 1:]
                avoid = var_names(t).union(*(free_vars(f) for f in rest))
                head = rename_bound(head, avoid)
                return Sum(head.var, _k(t, rest + conj_factors(head.body), count_signed))
            case Conj():
                rest = factors[:i] + conj_factors(head) + factors[i + 1:]
                return _k(t, rest, count_signed)
        raise MalformedInput(
            f"the Kirchhoff operator does not apply to {type(head).__name__} nodes")
    return conj(*factors, Test(t))


def sign_annotate(p: Tuplix, attrs: Iterable, ins: Iterable, outs: Iterable) -> Tuplix:
    """Signed copy for a unit with interface ``ins``/``outs``: every entry
    ``a(x)`` with ``a`` in ``attrs`` gains ``+a(x)`` (outputs) or
    ``-a(-x)`` (inputs) alongside."""
    h, ins, outs = attr_set(attrs), attr_set(ins), attr_set(outs)
    return _zeta(p, h, ins, outs)


def _zeta(p, h, ins, outs):
    match p:
        case Entry(a, x) if not a.signed:
            if a not in ins and a not in outs:
                raise MalformedInput(f"attribute {a} is not on the unit's interface")
            if a not in h:
                return p
            if a in outs:
                return Conj(Entry(Attribute(a.name, "+"), x), p)
            return Conj(Entry(Attribute(a.name, "-"), Neg(x)), p)
        case Eps() | Delta() | Test() | Entry():
            return p
        case Conj() | Alt() | Sum():
            return rebuild(p, tuple(_zeta(c, h, ins, outs) for c in children(p)))
    raise MalformedInput(f"signed copies do not apply to {type(p).__name__} nodes")


def to_flat(p: Tuplix) -> Tuplix:
    """Forget sign annotations: ``+a(t)`` becomes ``a(t)``, ``-a(t)``
    becomes ``a(-t)``."""
    match p:
        case Entry(a, x) if a.sign == "+":
            return Entry(a.flat, x)
        case Entry(a, x) if a.sign == "-":
            return Entry(a.flat, Neg(x))
    kids = children(p)
    return rebuild(p, tuple(to_flat(c) for c in kids)) if kids else p


def to_signed(p: Tuplix, ins: Iterable, outs: Iterable) -> Tuplix:
    """Annotate flat entries by direction: inputs ``a(t)`` become
    ``-a(-t)`` and outputs become ``+a(t)``."""
    ins, outs = attr_set(ins), attr_set(outs)
    return _signed(p, ins, outs)


def _signed(p, ins, outs):
    match p:
        case Entry(a, x) if not a.signed:
            if a in ins and a in outs:
                raise MalformedInput(f"attribute {a} is both input and output")
            if a in outs:
                return Entry(Attribute(a.name, "+"), x)
            if a in ins:
                return Entry(Attribute(a.name, "-"), Neg(x))
            raise MalformedInput(f"attribute {a} is not on the unit's interface")
    kids = children(p)
    return rebuild(p, tuple(_signed(c, ins, outs) for c in kids)) if kids else p

