"""Financial transfer networks.

A network assigns each unit a set of in-going and a set of outgoing
attributes (channels).  No attribute is in-going for two distinct units,
nor outgoing for two distinct units.  A channel that is in-going for one
unit and outgoing for another (or the same) unit is internal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping

from .basic import BasicForm, encapsulate, normalize, select
from .core import (
    Attribute, Encap, Entry, Select, Sum, Tuplix, Zeta, attr, attributes, conj,
    sum_over,
)
from .data import Var, as_term
from .errors import UnknownAttribute, UnknownUnit


class Channel(enum.Enum):
    INTERNAL = "internal"
    EXTERNAL = "external"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class FTN:
    name: str
    attrs: frozenset
    units: tuple
    ins: Mapping[str, frozenset]
    outs: Mapping[str, frozenset]

    @classmethod
    def build(cls, units: Mapping[str, tuple[Iterable, Iterable]],
              attrs: Iterable | None = None, name: str = "net") -> "FTN":
        """``units`` maps a unit name to ``(in-attributes, out-attributes)``."""
        ins = {g: frozenset(attr(a) for a in spec[0]) for g, spec in units.items()}
        outs = {g: frozenset(attr(a) for a in spec[1]) for g, spec in units.items()}
        used = frozenset().union(*ins.values(), *outs.values())
        declared = used if attrs is None else frozenset(attr(a) for a in attrs) | used
        return cls(name, declared, tuple(units), ins, outs)

    def in_(self, g: str) -> frozenset:
        self._check_unit(g)
        return self.ins[g]

    def out(self, g: str) -> frozenset:
        self._check_unit(g)
        return self.outs[g]

    def interface(self, g: str) -> frozenset:
        return self.in_(g) | self.out(g)

    def interfaces(self) -> dict:
        return {g: (self.ins[g], self.outs[g]) for g in self.units}

    def _check_unit(self, g: str):
        if g not in self.ins:
            raise UnknownUnit(g)


@dataclass(frozen=True)
class Violation:
    kind: str
    attribute: str
    units: tuple
    message: str

    def __str__(self):
        return self.message


@dataclass(frozen=True)
class UnitSpec:
    unit: str
    body: Tuplix


def validate_ftn(net: FTN) -> list[Violation]:
    """Every breach of the disjointness conditions, one per offending pair."""
    out = []
    for side, table in (("in", net.ins), ("out", net.outs)):
        for i, g in enumerate(net.units):
            for h in net.units[i + 1:]:
                for a in sorted(table[g] & table[h]):
                    word = "in-going" if side == "in" else "outgoing"
                    out.append(Violation(
                        f"shared-{side}", str(a), (g, h),
                        f"{a} is {word} for both {g} and {h}"))
    return out


def self_channels(net: FTN) -> list[tuple[str, Attribute]]:
    """Attributes that are both in-going and outgoing for one unit."""
    return [(g, a) for g in net.units for a in sorted(net.ins[g] & net.outs[g])]


def classify(net: FTN, a) -> Channel:
    a = attr(a)
    if a not in net.attrs:
        raise UnknownAttribute(str(a))
    is_in = any(a in s for s in net.ins.values())
    is_out = any(a in s for s in net.outs.values())
    return Channel.INTERNAL if is_in and is_out else Channel.EXTERNAL


def internal_attributes(net: FTN, units: Iterable[str] | None = None) -> frozenset:
    """Attributes in-going for one of ``units`` and outgoing for another
    (or the same) one of them."""
    units = list(net.units if units is None else units)
    for g in units:
        net._check_unit(g)
    ins = frozenset().union(*(net.ins[g] for g in units))
    outs = frozenset().union(*(net.outs[g] for g in units))
    return ins & outs


def check_unit_spec(net: FTN, spec: UnitSpec) -> list[Violation]:
    allowed = net.interface(spec.unit)
    bad = sorted({a.flat for a in attributes(spec.body)} - allowed)
    return [Violation("foreign-attribute", str(a), (spec.unit,),
                      f"spec of {spec.unit} uses {a}, which is not on its interface")
            for a in bad]


class SpecError(ValueError):
    def __init__(self, violations: list[Violation]):
        super().__init__("; ".join(map(str, violations)))
        self.violations = violations


def _check_all(net: FTN, specs: Iterable[UnitSpec]) -> list[UnitSpec]:
    specs = list(specs)
    problems = [v for s in specs for v in check_unit_spec(net, s)]
    if problems:
        raise SpecError(problems)
    return specs


def composition(net: FTN, specs: Iterable[UnitSpec], hide=None) -> Tuplix:
    """The term ``encap{H}(P1 & ... & Pk)``; H defaults to the internal
    attributes among the given units."""
    specs = _check_all(net, specs)
    h = internal_attributes(net, [s.unit for s in specs]) if hide is None \
        else frozenset(attr(a) for a in hide)
    return Encap(h, conj(*(s.body for s in specs)))


def compose_encapsulate(net: FTN, specs: Iterable[UnitSpec], hide=None,
                        eliminate: str | None = "all",
                        trace: list | None = None) -> BasicForm:
    return normalize(composition(net, specs, hide), interfaces=net.interfaces(),
                     eliminate=eliminate, trace=trace)


def focus_term(net: FTN, specs: Iterable[UnitSpec], g: str, hide=None) -> Tuplix:
    specs = _check_all(net, specs)
    units = [s.unit for s in specs]
    if g not in units:
        raise UnknownUnit(g)
    h = internal_attributes(net, units) if hide is None \
        else frozenset(attr(a) for a in hide)
    parts = []
    for s in specs:
        if s.unit == g:
            parts.append(Zeta(g, h & net.interface(g), s.body, net.ins[g], net.outs[g]))
        else:
            parts.append(s.body)
    j = set()
    for a in net.interface(g):
        j |= {a, Attribute(a.name, "+"), Attribute(a.name, "-")}
    return Select(frozenset(j), Encap(h, conj(*parts)))


def focus(net: FTN, specs: Iterable[UnitSpec], g: str, hide=None,
          eliminate: str | None = "all", trace: list | None = None) -> BasicForm:
    """Transactions of unit ``g`` seen through the composed network: the
    internal entries of ``g`` stay visible as signed copies."""
    return normalize(focus_term(net, specs, g, hide), interfaces=net.interfaces(),
                     eliminate=eliminate, trace=trace)


# -- the reserve chain --------------------------------------------------------


def _e(name: str, t) -> Entry:
    return Entry(Attribute(name), as_term(t))


def reserve_unit(n: int) -> Tuplix:
    """``R_n``: a reserve fed by the previous reserve and the business unit,
    paying out to the owner and to the next reserve."""
    from .core import Kirch
    from .data import ZERO
    u, v, w, x = (Var(s) for s in "uvwx")
    body = conj(_e(f"a_{n}", -u), _e(f"b_{n}", -v), _e(f"c_{n}", w), _e(f"a_{n + 1}", x))
    return Kirch(ZERO, sum_over(["u", "v", "w", "x"], body))


def business_unit(n: int, pw="pw", k="k", inc=None) -> Tuplix:
    """``Q_n``: receives the owner's payment and income, retains part of the
    income for the reserve and pays the rest out on ``e_n``."""
    from .core import Kirch
    from .data import ZERO
    pw, k = as_term(pw), as_term(k)
    inc = as_term(inc if inc is not None else f"inc_{n}")
    u = Var("u")
    body = conj(_e(f"c_{n}", -pw), _e(f"d_{n}", -inc), _e(f"b_{n + 1}", k * inc),
                _e(f"e_{n}", u))
    return Kirch(ZERO, Sum("u", body))


def reserve_network(n: int) -> FTN:
    units = {}
    for i in range(n + 2):
        units[f"R_{i}"] = ([f"a_{i}", f"b_{i}"], [f"c_{i}", f"a_{i + 1}"])
    for i in range(n + 1):
        units[f"Q_{i}"] = ([f"c_{i}", f"d_{i}"], [f"b_{i + 1}", f"e_{i}"])
    return FTN.build(units, name=f"reserve_{n}")


def reserve_specs(n: int, pw="pw", k="k") -> list[UnitSpec]:
    specs = [UnitSpec(f"Q_{i}", business_unit(i, pw, k)) for i in range(n + 1)]
    specs += [UnitSpec(f"R_{i}", reserve_unit(i)) for i in range(n + 2)]
    return specs


def reserve_hidden(n: int) -> frozenset:
    out = set()
    for i in range(n + 1):
        out |= {attr(f"a_{i + 1}"), attr(f"b_{i + 1}"), attr(f"c_{i}")}
    return frozenset(out)


def reserve_chain_term(n: int, pw="pw", k="k") -> Tuplix:
    """``P_n``: Q_0..Q_n and R_0..R_{n+1} composed, hiding a_{i+1}, b_{i+1}
    and c_i for i <= n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return composition(reserve_network(n), reserve_specs(n, pw, k), reserve_hidden(n))


def reserve_chain(n: int, pw="pw", k="k", eliminate: str | None = "flux",
                  trace: list | None = None) -> BasicForm:
    return normalize(reserve_chain_term(n, pw, k), eliminate=eliminate, trace=trace)


def reserve_chain_closed_form(n: int, pw="pw", k="k") -> Tuplix:
    """The closed form of ``P_n``, with every factor inside the Kirchhoff
    operator."""
    from .core import Kirch
    from .data import ZERO
    pw, k = as_term(pw), as_term(k)
    u, v, w, x = (Var(s) for s in "uvwx")
    incs = [Var(f"inc_{i}") for i in range(n + 1)]
    parts = [_e("a_0", -u), _e("b_0", -v), _e(f"c_{n + 1}", w), _e(f"a_{n + 2}", x)]
    for i, inc in enumerate(incs):
        parts += [_e(f"d_{i}", -inc), _e(f"e_{i}", pw + (1 - k) * inc)]
    return Kirch(ZERO, sum_over(["u", "v", "w", "x"], conj(*parts)))
