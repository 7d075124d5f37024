"""Data terms: symbolic expressions over a cancellation meadow.

Terms are immutable trees.  Arithmetic operators are overloaded so tests and
builders can write ``x * (y + 1) / z`` directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable


class DataTerm:
    __slots__ = ()

    def __add__(self, other):
        return Add(self, as_term(other))

    def __radd__(self, other):
        return Add(as_term(other), self)

    def __sub__(self, other):
        return Add(self, Neg(as_term(other)))

    def __rsub__(self, other):
        return Add(as_term(other), Neg(self))

    def __mul__(self, other):
        return Mul(self, as_term(other))

    def __rmul__(self, other):
        return Mul(as_term(other), self)

    def __truediv__(self, other):
        return Mul(self, Inv(as_term(other)))

    def __rtruediv__(self, other):
        return Mul(as_term(other), Inv(self))

    def __neg__(self):
        return Neg(self)

    def __str__(self):
        return format_data(self)


@dataclass(frozen=True, slots=True)
class Const(DataTerm):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True, slots=True)
class Var(DataTerm):
    name: str


@dataclass(frozen=True, slots=True)
class Neg(DataTerm):
    arg: DataTerm


@dataclass(frozen=True, slots=True)
class Add(DataTerm):
    left: DataTerm
    right: DataTerm


@dataclass(frozen=True, slots=True)
class Mul(DataTerm):
    left: DataTerm
    right: DataTerm


@dataclass(frozen=True, slots=True)
class Inv(DataTerm):
    arg: DataTerm


@dataclass(frozen=True, slots=True)
class FnApp(DataTerm):
    """Application of a function variable ``name`` to argument terms."""

    name: str
    args: tuple[DataTerm, ...]


@dataclass(frozen=True, slots=True)
class Lambda(DataTerm):
    """Second-class abstraction; only legal inside a definition or as an
    application head."""

    params: tuple[str, ...]
    body: DataTerm

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True, slots=True)
class Apply(DataTerm):
    fn: Lambda
    args: tuple[DataTerm, ...]


ZERO = Const(0)
ONE = Const(1)


def as_term(value) -> DataTerm:
    if isinstance(value, DataTerm):
        return value
    if isinstance(value, str):
        return Var(value)
    if isinstance(value, (int, Fraction)):
        return Const(value)
    raise TypeError(f"cannot use {value!r} as a data term")


def variables(*names: str) -> tuple[Var, ...]:
    return tuple(Var(n) for n in names)


def sub(t, s) -> DataTerm:
    return Add(as_term(t), Neg(as_term(s)))


def div(t, s) -> DataTerm:
    return Mul(as_term(t), Inv(as_term(s)))


def var_names(t: DataTerm) -> frozenset[str]:
    """Free data variables of ``t`` (lambda parameters are bound)."""
    match t:
        case Var(name):
            return frozenset((name,))
        case Const():
            return frozenset()
        case Neg(a) | Inv(a):
            return var_names(a)
        case Add(a, b) | Mul(a, b):
            return var_names(a) | var_names(b)
        case FnApp(_, args):
            return frozenset().union(*(var_names(a) for a in args))
        case Lambda(params, body):
            return var_names(body) - set(params)
        case Apply(fn, args):
            return var_names(fn).union(*(var_names(a) for a in args))
    raise TypeError(f"not a data term: {t!r}")


def fn_names(t: DataTerm) -> frozenset[str]:
    match t:
        case Var() | Const():
            return frozenset()
        case Neg(a) | Inv(a):
            return fn_names(a)
        case Add(a, b) | Mul(a, b):
            return fn_names(a) | fn_names(b)
        case FnApp(name, args):
            return frozenset((name,)).union(*(fn_names(a) for a in args))
        case Lambda(_, body):
            return fn_names(body)
        case Apply(fn, args):
            return fn_names(fn).union(*(fn_names(a) for a in args))
    raise TypeError(f"not a data term: {t!r}")


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    name = base
    while name in avoid:
        name += "'"
    return name


def substitute_data(t: DataTerm, x: str, s: DataTerm) -> DataTerm:
    """Replace every free occurrence of variable ``x`` in ``t`` by ``s``."""
    return substitute_many(t, {x: s})


def substitute_many(t: DataTerm, mapping: dict[str, DataTerm]) -> DataTerm:
    if not mapping:
        return t
    match t:
        case Var(name):
            return mapping.get(name, t)
        case Const():
            return t
        case Neg(a):
            return Neg(substitute_many(a, mapping))
        case Inv(a):
            return Inv(substitute_many(a, mapping))
        case Add(a, b):
            return Add(substitute_many(a, mapping), substitute_many(b, mapping))
        case Mul(a, b):
            return Mul(substitute_many(a, mapping), substitute_many(b, mapping))
        case FnApp(name, args):
            return FnApp(name, tuple(substitute_many(a, mapping) for a in args))
        case Apply(fn, args):
            return Apply(substitute_many(fn, mapping),
                         tuple(substitute_many(a, mapping) for a in args))
        case Lambda(params, body):
            inner = {k: v for k, v in mapping.items() if k not in params}
            if not inner:
                return t
            incoming = frozenset().union(*(var_names(v) for v in inner.values()))
            avoid = incoming | var_names(body) | set(inner)
            new_params = []
            renames: dict[str, DataTerm] = {}
            for p in params:
                if p in incoming:
                    q = fresh_name(p, avoid | set(new_params))
                    renames[p] = Var(q)
                    new_params.append(q)
                else:
                    new_params.append(p)
            body = substitute_many(body, renames)
            return Lambda(tuple(new_params), substitute_many(body, inner))
    raise TypeError(f"not a data term: {t!r}")


# -- printing ---------------------------------------------------------------

_ADD, _NEG, _MUL, _POW, _ATOM = 1.0, 1.5, 2.0, 4.0, 5.0


def _const_text(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _prec(t: DataTerm) -> float:
    match t:
        case Const(v):
            if v < 0:
                return _NEG
            return _ATOM if v.denominator == 1 else _MUL
        case Add():
            return _ADD
        case Neg():
            return _NEG
        case Mul():
            return _MUL
        case Inv():
            return _POW
        case Lambda():
            return 0.0
    return _ATOM


def _fmt(t: DataTerm, ctx: float) -> str:
    text = _fmt_bare(t)
    return f"({text})" if _prec(t) < ctx else text


def _fmt_bare(t: DataTerm) -> str:
    match t:
        case Const(v):
            return _const_text(v)
        case Var(name):
            return name
        case Neg(a):
            return "-" + _fmt(a, _MUL)
        case Add(a, Neg(b)):
            return f"{_fmt(a, _ADD)} - {_fmt(b, _MUL)}"
        case Add(a, b):
            return f"{_fmt(a, _ADD)} + {_fmt(b, _NEG)}"
        case Mul(a, Inv(b)):
            return f"{_fmt(a, _MUL)}/{_fmt(b, 3.0)}"
        case Mul(a, b):
            return f"{_fmt(a, _MUL)}*{_fmt(b, 3.0)}"
        case Inv(a):
            return f"{_fmt(a, _ATOM)}^-1"
        case FnApp(name, args):
            return f"{name}({', '.join(_fmt(a, 0.0) for a in args)})"
        case Lambda(params, body):
            return f"lam {', '.join(params)} . {_fmt(body, 0.0)}"
        case Apply(fn, args):
            return f"({_fmt_bare(fn)})({', '.join(_fmt(a, 0.0) for a in args)})"
    raise TypeError(f"not a data term: {t!r}")


def format_data(t: DataTerm) -> str:
    """Render ``t`` in the ASCII concrete syntax accepted by the parser."""
    return _fmt(t, 0.0)


def serialize_data(t: DataTerm) -> str:
    """Canonical prefix serialization, one line, used for golden files."""
    match t:
        case Const(v):
            return f"(c {_const_text(v)})"
        case Var(name):
            return f"(v {name})"
        case Neg(a):
            return f"(neg {serialize_data(a)})"
        case Inv(a):
            return f"(inv {serialize_data(a)})"
        case Add(a, b):
            return f"(add {serialize_data(a)} {serialize_data(b)})"
        case Mul(a, b):
            return f"(mul {serialize_data(a)} {serialize_data(b)})"
        case FnApp(name, args):
            return f"(app {name} {' '.join(serialize_data(a) for a in args)})"
        case Lambda(params, body):
            return f"(lam ({' '.join(params)}) {serialize_data(body)})"
        case Apply(fn, args):
            return f"(apply {serialize_data(fn)} {' '.join(serialize_data(a) for a in args)})"
    raise TypeError(f"not a data term: {t!r}")
