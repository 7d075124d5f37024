"""Propositional connectives on zero tests.

A data term ``t`` read as a proposition is true when ``t = 0``.  Each
connective returns the term whose zero test expresses it.
"""

from __future__ import annotations

from .data import ONE, DataTerm, as_term


def _indicator(t: DataTerm) -> DataTerm:
    return t / t


def tnot(t) -> DataTerm:
    t = as_term(t)
    return ONE - _indicator(t)


def tand(t, s) -> DataTerm:
    return _indicator(as_term(t)) + _indicator(as_term(s))


def tor(t, s) -> DataTerm:
    return as_term(t) * as_term(s)


def timp(t, s) -> DataTerm:
    return tnot(t) * as_term(s)
