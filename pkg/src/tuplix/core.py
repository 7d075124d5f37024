"""Tuplix terms.

A tuplix is built from the constants ``EPS`` (empty tuplix) and ``DELTA``
(the null tuplix), zero tests ``Test(t)``, attribute-value entries
``Entry(a, t)``, conjunctive composition ``Conj``, choice ``Alt`` and the
summation binder ``Sum``.  Operators (scalar multiplication, clearing,
encapsulation, the Kirchhoff operator, sign annotation and function
definitions) are separate nodes which the normalizer eliminates.

``&`` builds a conjunction and ``|`` a choice, so ``a & (b | c)`` reads as
``a (x) (b + c)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .data import (
    Const, DataTerm, Lambda, Var, ZERO, as_term, fn_names, fresh_name,
    substitute_many, var_names,
)


@dataclass(frozen=True, order=True, slots=True)
class Attribute:
    """An attribute name with an optional sign annotation ``+`` or ``-``."""

    name: str
    sign: str = ""

    def __post_init__(self):
        if self.sign not in ("", "+", "-"):
            raise ValueError(f"bad sign {self.sign!r}")

    @property
    def signed(self) -> bool:
        return bool(self.sign)

    @property
    def flat(self) -> "Attribute":
        return Attribute(self.name) if self.sign else self

    def __str__(self):
        return self.sign + self.name


def attr(spec: "str | Attribute") -> Attribute:
    """``attr("+b")`` is the positively signed copy of ``b``."""
    if isinstance(spec, Attribute):
        return spec
    if spec[:1] in "+-" and len(spec) > 1:
        return Attribute(spec[1:], spec[0])
    return Attribute(spec)


def attr_set(specs: Iterable) -> frozenset[Attribute]:
    return frozenset(attr(s) for s in specs)


class Tuplix:
    __slots__ = ()

    def __and__(self, other):
        return Conj(self, other)

    def __or__(self, other):
        return Alt(self, other)

    def __str__(self):
        from .syntax import format_tuplix
        return format_tuplix(self)


@dataclass(frozen=True, slots=True)
class Eps(Tuplix):
    pass


@dataclass(frozen=True, slots=True)
class Delta(Tuplix):
    pass


EPS = Eps()
DELTA = Delta()


@dataclass(frozen=True, slots=True)
class Test(Tuplix):
    """Zero test: ``Test(t)`` is ``EPS`` when ``t = 0`` and ``DELTA`` otherwise."""

    __test__ = False  # not a pytest test class
    term: DataTerm


@dataclass(frozen=True, slots=True)
class Entry(Tuplix):
    attribute: Attribute
    term: DataTerm


@dataclass(frozen=True, slots=True)
class Conj(Tuplix):
    left: Tuplix
    right: Tuplix


@dataclass(frozen=True, slots=True)
class Alt(Tuplix):
    left: Tuplix
    right: Tuplix


@dataclass(frozen=True, slots=True)
class Sum(Tuplix):
    var: str
    body: Tuplix


@dataclass(frozen=True, slots=True)
class Scalar(Tuplix):
    factor: DataTerm
    body: Tuplix


@dataclass(frozen=True, slots=True)
class Clear(Tuplix):
    """Removes entries whose attribute is in ``attrs``."""

    attrs: frozenset
    body: Tuplix


@dataclass(frozen=True, slots=True)
class Select(Tuplix):
    """Keeps only entries whose attribute is in ``attrs``."""

    attrs: frozenset
    body: Tuplix


@dataclass(frozen=True, slots=True)
class Encap(Tuplix):
    attrs: frozenset
    body: Tuplix


@dataclass(frozen=True, slots=True)
class Kirch(Tuplix):
    """Kirchhoff operator with accumulator ``start`` (``K(P)`` has start 0)."""

    start: DataTerm
    body: Tuplix


@dataclass(frozen=True, slots=True)
class Zeta(Tuplix):
    """Adds signed copies of the attributes in ``attrs`` for unit ``unit``.

    ``ins``/``outs`` give the unit's interface; when ``None`` they are
    looked up in the network supplied to the normalizer."""

    unit: str
    attrs: frozenset
    body: Tuplix
    ins: frozenset | None = None
    outs: frozenset | None = None


@dataclass(frozen=True, slots=True)
class ToFlat(Tuplix):
    body: Tuplix


@dataclass(frozen=True, slots=True)
class ToSigned(Tuplix):
    unit: str
    body: Tuplix
    ins: frozenset | None = None
    outs: frozenset | None = None


@dataclass(frozen=True, slots=True)
class Gamma(Tuplix):
    """Function definition ``f := lam x. t`` as a tuplix."""

    fn: str
    lam: Lambda


@dataclass(frozen=True, slots=True)
class SumFn(Tuplix):
    """Summation over a function variable."""

    fn: str
    body: Tuplix


# -- builders ---------------------------------------------------------------


def test(t) -> Tuplix:
    t = as_term(t)
    if isinstance(t, Const):
        return EPS if t.value == 0 else DELTA
    return Test(t)


def entry(a, t) -> Entry:
    return Entry(attr(a), as_term(t))


def conj(*parts: Tuplix) -> Tuplix:
    """Conjunction with the unit and zero laws for EPS and DELTA applied."""
    out: Tuplix = EPS
    for p in parts:
        if isinstance(p, Delta) or isinstance(out, Delta):
            out = DELTA
        elif isinstance(p, Eps):
            continue
        elif isinstance(out, Eps):
            out = p
        else:
            out = Conj(out, p)
    return out


def alt(*parts: Tuplix) -> Tuplix:
    """Choice with DELTA dropped as the neutral element."""
    kept = [p for p in parts if not isinstance(p, Delta)]
    if not kept:
        return DELTA
    out = kept[0]
    for p in kept[1:]:
        out = Alt(out, p)
    return out


def sum_over(names, body: Tuplix) -> Tuplix:
    if isinstance(names, str):
        names = names.replace(",", " ").split()
    for n in reversed(list(names)):
        body = Sum(n, body)
    return body


def scalar(t, body: Tuplix) -> Scalar:
    return Scalar(as_term(t), body)


def encap(attrs, body: Tuplix) -> Encap:
    return Encap(attr_set(attrs), body)


def clear(attrs, body: Tuplix) -> Clear:
    return Clear(attr_set(attrs), body)


def select(attrs, body: Tuplix) -> Select:
    return Select(attr_set(attrs), body)


def kirchhoff_node(body: Tuplix, start=ZERO) -> Kirch:
    return Kirch(as_term(start), body)


def conj_factors(p: Tuplix) -> list[Tuplix]:
    """Flatten nested conjunctions, dropping EPS."""
    if isinstance(p, Conj):
        return conj_factors(p.left) + conj_factors(p.right)
    if isinstance(p, Eps):
        return []
    return [p]


def alt_branches(p: Tuplix) -> list[Tuplix]:
    if isinstance(p, Alt):
        return alt_branches(p.left) + alt_branches(p.right)
    return [p]


# -- traversal --------------------------------------------------------------


def children(p: Tuplix) -> tuple[Tuplix, ...]:
    match p:
        case Conj(a, b) | Alt(a, b):
            return (a, b)
        case Eps() | Delta() | Test() | Entry() | Gamma():
            return ()
    return (p.body,)


def data_terms(p: Tuplix) -> list[DataTerm]:
    """Data terms directly held by the node ``p`` (not its children)."""
    match p:
        case Test(t) | Entry(_, t) | Scalar(t, _) | Kirch(t, _):
            return [t]
        case Gamma(_, lam):
            return [lam]
    return []


def free_vars(p: Tuplix) -> frozenset[str]:
    """Free data variables."""
    match p:
        case Sum(x, body):
            return free_vars(body) - {x}
    out = frozenset().union(*(var_names(t) for t in data_terms(p)))
    return out.union(*(free_vars(c) for c in children(p)))


def all_vars(p: Tuplix) -> frozenset[str]:
    """Every data variable name occurring in ``p``, bound or free."""
    out = frozenset().union(*(_all_data_vars(t) for t in data_terms(p)))
    if isinstance(p, Sum):
        out |= {p.var}
    return out.union(*(all_vars(c) for c in children(p)))


def _all_data_vars(t: DataTerm) -> frozenset[str]:
    if isinstance(t, Lambda):
        return var_names(t.body) | set(t.params)
    return var_names(t)


def free_fns(p: Tuplix) -> frozenset[str]:
    """Free function variables."""
    match p:
        case SumFn(f, body):
            return free_fns(body) - {f}
        case Gamma(f, lam):
            return frozenset({f}) | fn_names(lam)
    out = frozenset().union(*(fn_names(t) for t in data_terms(p)))
    return out.union(*(free_fns(c) for c in children(p)))


def attributes(p: Tuplix) -> frozenset[Attribute]:
    """Attributes of entries occurring in ``p``."""
    if isinstance(p, Entry):
        return frozenset({p.attribute})
    return frozenset().union(*(attributes(c) for c in children(p)))


def rebuild(p: Tuplix, kids: tuple[Tuplix, ...]) -> Tuplix:
    match p:
        case Conj() | Alt():
            return type(p)(*kids)
        case Eps() | Delta() | Test() | Entry() | Gamma():
            return p
        case Sum(x, _):
            return Sum(x, kids[0])
        case Scalar(t, _):
            return Scalar(t, kids[0])
        case Clear(h, _) | Select(h, _) | Encap(h, _):
            return type(p)(h, kids[0])
        case Kirch(t, _):
            return Kirch(t, kids[0])
        case Zeta(g, h, _, i, o):
            return Zeta(g, h, kids[0], i, o)
        case ToFlat(_):
            return ToFlat(kids[0])
        case ToSigned(g, _, i, o):
            return ToSigned(g, kids[0], i, o)
        case SumFn(f, _):
            return SumFn(f, kids[0])
    raise TypeError(f"not a tuplix: {p!r}")


def map_data(p: Tuplix, fn) -> Tuplix:
    """Apply ``fn`` to every data term, ignoring binding structure."""
    match p:
        case Test(t):
            return Test(fn(t))
        case Entry(a, t):
            return Entry(a, fn(t))
        case Scalar(t, body):
            return Scalar(fn(t), map_data(body, fn))
        case Kirch(t, body):
            return Kirch(fn(t), map_data(body, fn))
        case Gamma(f, lam):
            return Gamma(f, fn(lam))
    return rebuild(p, tuple(map_data(c, fn) for c in children(p)))


def substitute(p: Tuplix, mapping: dict[str, DataTerm]) -> Tuplix:
    """Capture-avoiding substitution of data variables in ``p``."""
    if not mapping:
        return p
    match p:
        case Sum(x, body):
            inner = {k: v for k, v in mapping.items() if k != x}
            if not inner:
                return p
            incoming = frozenset().union(*(var_names(v) for v in inner.values()))
            if x in incoming:
                y = fresh_name(x, incoming | all_vars(body) | set(inner))
                body = substitute(body, {x: Var(y)})
                x = y
            return Sum(x, substitute(body, inner))
        case Test(t):
            return Test(substitute_many(t, mapping))
        case Entry(a, t):
            return Entry(a, substitute_many(t, mapping))
        case Scalar(t, body):
            return Scalar(substitute_many(t, mapping), substitute(body, mapping))
        case Kirch(t, body):
            return Kirch(substitute_many(t, mapping), substitute(body, mapping))
        case Gamma(f, lam):
            return Gamma(f, substitute_many(lam, mapping))
    return rebuild(p, tuple(substitute(c, mapping) for c in children(p)))


def rename_bound(p: Sum, avoid: Iterable[str]) -> Sum:
    """Alpha-rename the binder of ``p`` away from ``avoid``."""
    avoid = set(avoid)
    if p.var not in avoid:
        return p
    y = fresh_name(p.var, avoid | all_vars(p.body))
    return Sum(y, substitute(p.body, {p.var: Var(y)}))


def size(p: Tuplix) -> int:
    return 1 + sum(size(c) for c in children(p))


def depth(p: Tuplix) -> int:
    return 1 + max((depth(c) for c in children(p)), default=0)
