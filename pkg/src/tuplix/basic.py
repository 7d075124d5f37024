"""Basic forms and the normalization engine.

A basic form is a finite choice between alternatives.  Each alternative is
a block of summation binders over a conjunction of zero tests and entries
with pairwise distinct attributes.  ``DELTA`` is the empty choice.

Normalization works inside out: operator nodes are eliminated as soon as
their argument is in basic form.  Summation elimination then removes the
binders that some test pins down.
"""

from __future__ import annotations

import itertools
from contextvars import ContextVar
from dataclasses import dataclass, field
from math import gcd, lcm
from fractions import Fraction
from typing import Iterable, Mapping

from . import meadow
from .core import (
    DELTA, Alt, Attribute, Clear, Conj, Delta, Encap, Entry, Eps, Gamma,
    Kirch, Scalar, Select, Sum, SumFn, Test, ToFlat, ToSigned, Tuplix, Zeta,
    alt, attr_set, conj, sum_over,
)
from .data import ONE, Add, DataTerm, Inv, Mul, Neg, Var, fresh_name, var_names
from .errors import MalformedInput, UnboundFunctionVar
from .meadow import (
    Poly, Tri, atom_poly, const_poly, is_zero_or_unknown, monic, poly_add,
    poly_key, poly_mul, poly_to_term, poly_variables, solve_linear,
    split_linear, substitute_poly, to_poly,
)

MAX_TIDY_ROUNDS = 50

# Variables bound by summations enclosing the term under construction.  Tests
# on them are not used to rewrite the rest of the alternative, so the shape of
# the summation body survives until the binders are attached.
_ENCLOSING: ContextVar[frozenset] = ContextVar("enclosing_binders", default=frozenset())


@dataclass(frozen=True)
class Alternative:
    binders: tuple[str, ...] = ()
    tests: tuple[DataTerm, ...] = ()
    entries: tuple[tuple[Attribute, DataTerm], ...] = ()

    def entry_map(self) -> dict[Attribute, DataTerm]:
        return dict(self.entries)

    def all_vars(self) -> frozenset[str]:
        out = set(self.binders)
        for t in self.tests:
            out |= var_names(t)
        for _, t in self.entries:
            out |= var_names(t)
        return frozenset(out)

    def free_vars(self) -> frozenset[str]:
        return self.all_vars() - set(self.binders)

    def entry_vars(self) -> frozenset[str]:
        return frozenset().union(*(var_names(t) for _, t in self.entries))

    def merged_test(self) -> DataTerm | None:
        """The single test equivalent to the conjunction of all tests."""
        if not self.tests:
            return None
        out = self.tests[0]
        if len(self.tests) == 1:
            return out
        out = Mul(out, Inv(out))
        for t in self.tests[1:]:
            out = Add(out, Mul(t, Inv(t)))
        return out

    def to_tuplix(self) -> Tuplix:
        body = conj(*(Test(t) for t in self.tests),
                    *(Entry(a, t) for a, t in self.entries))
        return sum_over(self.binders, body)

    def rename(self, mapping: Mapping[str, str]) -> "Alternative":
        sub = {k: Var(v) for k, v in mapping.items()}
        from .data import substitute_many
        return Alternative(
            tuple(mapping.get(b, b) for b in self.binders),
            tuple(substitute_many(t, sub) for t in self.tests),
            tuple((a, substitute_many(t, sub)) for a, t in self.entries),
        )

    def __str__(self):
        from .syntax import format_tuplix
        return format_tuplix(self.to_tuplix())


@dataclass(frozen=True)
class BasicForm:
    alternatives: tuple[Alternative, ...] = ()

    @property
    def is_null(self) -> bool:
        return not self.alternatives

    def to_tuplix(self) -> Tuplix:
        return alt(*(a.to_tuplix() for a in self.alternatives))

    def attributes(self) -> frozenset[Attribute]:
        return frozenset(a for alt_ in self.alternatives for a, _ in alt_.entries)

    def free_vars(self) -> frozenset[str]:
        return frozenset().union(*(a.free_vars() for a in self.alternatives))

    def to_json(self) -> dict:
        from .data import format_data
        alts = []
        for a in self.alternatives:
            merged = a.merged_test()
            alts.append({
                "binders": list(a.binders),
                "test": None if merged is None else format_data(merged),
                "tests": [format_data(t) for t in a.tests],
                "entries": {str(k): format_data(v) for k, v in a.entries},
            })
        return {"null": self.is_null, "alternatives": alts}

    def __str__(self):
        from .syntax import format_tuplix
        return format_tuplix(self.to_tuplix())


NULL_FORM = BasicForm(())
EPS_FORM = BasicForm((Alternative(),))


# -- tests ------------------------------------------------------------------


def canonical_test(p: Poly) -> Poly:
    """Representative of the zero test on ``p``.

    A single monomial is zero exactly when one of its atoms is, so the
    coefficient and exponents are dropped and inverses replaced by their
    arguments.  A factor common to all monomials whose cofactor is provably
    nonzero is treated the same way.  Otherwise the polynomial is scaled to
    coprime integer coefficients.
    """
    if p.is_const:
        return p
    content = _content(p)
    if content:
        rest = meadow.poly_from_terms({
            tuple((a, e - content[a]) if a in content else (a, e)
                  for a, e in mono if not (a in content and e == content[a])): c
            for mono, c in p.terms})
        if is_zero_or_unknown(poly_to_term(rest)) is Tri.FALSE:
            p = const_poly(1)
            for atom in content:
                p = poly_mul(p, atom_poly(atom))
    if len(p.terms) == 1:
        mono, _ = p.terms[0]
        q = const_poly(1)
        for atom, _ in mono:
            q = poly_mul(q, atom[1] if atom[0] == "i" else atom_poly(atom))
        if len(q.terms) == 1:
            return q
        p = q
    return primitive(p)


def _content(p: Poly) -> dict:
    """Atoms dividing every monomial of ``p``, with their least exponent."""
    common: dict | None = None
    for mono, _ in p.terms:
        here = {a: e for a, e in mono if e > 0}
        common = here if common is None else {
            a: min(e, here[a]) for a, e in common.items() if a in here}
        if not common:
            return {}
    return common or {}


def primitive(p: Poly) -> Poly:
    """Scale ``p`` to coprime integer coefficients with a positive leading one."""
    den = lcm(*(c.denominator for _, c in p.terms))
    num = gcd(*(c.numerator for _, c in p.terms))
    factor = Fraction(den, num)
    if p.terms[0][1] < 0:
        factor = -factor
    return meadow.poly_scale(p, factor)


def _decide_tests(polys: Iterable[Poly]) -> list[Poly] | None:
    """Canonicalize and decide tests: drop valid ones, ``None`` if one fails."""
    kept: dict[str, Poly] = {}
    for p in polys:
        c = canonical_test(p)
        if not c.terms:
            continue
        if c.is_const:
            return None
        verdict = is_zero_or_unknown(poly_to_term(c))
        if verdict is Tri.TRUE:
            continue
        if verdict is Tri.FALSE:
            return None
        kept.setdefault(poly_key(c), c)
    return [kept[k] for k in sorted(kept)]


# -- alternatives -----------------------------------------------------------


@dataclass
class _Work:
    binders: set
    tests: list      # of Poly
    entries: dict    # Attribute -> Poly

    def substitute(self, mapping: dict[str, DataTerm], skip: int | None = None):
        self.tests = [t if i == skip else substitute_poly(t, mapping)
                      for i, t in enumerate(self.tests)]
        self.entries = {a: substitute_poly(t, mapping) for a, t in self.entries.items()}

    def freeze(self) -> Alternative:
        used = set()
        for t in self.tests:
            used |= poly_variables(t)
        for t in self.entries.values():
            used |= poly_variables(t)
        binders = tuple(sorted(b for b in self.binders if b in used))
        tests = tuple(poly_to_term(t) for t in sorted(self.tests, key=poly_key))
        entries = tuple((a, poly_to_term(self.entries[a])) for a in sorted(self.entries))
        return Alternative(binders, tests, entries)


def _work(a: Alternative) -> _Work:
    return _Work(set(a.binders), [to_poly(t) for t in a.tests],
                 {k: to_poly(v) for k, v in a.entries})


def _reduce_free(w: _Work) -> None:
    """Gauss-Jordan pass over tests without bound variables: each pivot
    variable is replaced by its solution everywhere else in the alternative."""
    blocked = w.binders | _ENCLOSING.get()
    rows = [i for i, t in enumerate(w.tests) if not (poly_variables(t) & blocked)]
    names = sorted(set().union(*(poly_variables(w.tests[i]) for i in rows))) if rows else []
    pivots: set[int] = set()
    for x in names:
        cands = [i for i in rows if i not in pivots and split_linear(w.tests[i], x)]
        if not cands:
            continue
        i = min(cands, key=lambda j: poly_key(w.tests[j]))
        c, r = split_linear(w.tests[i], x)
        pivots.add(i)
        sol = poly_to_term(meadow.poly_scale(r, -1 / c))
        w.substitute({x: sol}, skip=i)


def tidy(a: Alternative) -> Alternative | None:
    """Simplify one alternative; ``None`` when it is null."""
    w = _work(a)
    state = None
    for _ in range(MAX_TIDY_ROUNDS):
        tests = _decide_tests(w.tests)
        if tests is None:
            return None
        w.tests = tests
        _reduce_free(w)
        tests = _decide_tests(w.tests)
        if tests is None:
            return None
        w.tests = tests
        new_state = w.freeze()
        if new_state == state:
            break
        state = new_state
        w = _work(state)
    return state


def make_form(alts: Iterable[Alternative | None]) -> BasicForm:
    """Tidy, deduplicate, merge and sort alternatives."""
    seen: dict[Alternative, None] = {}
    for a in alts:
        if a is None:
            continue
        t = tidy(a)
        if t is not None:
            seen.setdefault(t, None)
    return BasicForm(_sorted(_absorb(_merge_choices(list(seen)))))


def _instance(general: Alternative, special: Alternative) -> Alternative | None:
    """``general`` with its binders chosen so that its entries are those of
    ``special``; ``None`` when no choice is found by linear solving."""
    if [k for k, _ in general.entries] != [k for k, _ in special.entries]:
        return None
    if not general.binders:
        return general
    taken = set(special.all_vars() | general.all_vars())
    renames = {}
    for b in general.binders:
        if b in special.all_vars():
            renames[b] = fresh_name(b, taken)
            taken.add(renames[b])
    g = general.rename(renames) if renames else general
    open_ = set(g.binders)
    tests = list(g.tests)
    entries = dict(g.entries)
    target = special.entry_map()
    progress = True
    while open_ and progress:
        progress = False
        for k in sorted(entries):
            diff = Add(entries[k], Neg(target[k]))
            names = var_names(diff) & open_
            if len(names) != 1:
                continue
            (b,) = names
            value = solve_linear(diff, b)
            if value is None:
                continue
            from .data import substitute_data
            entries = {kk: substitute_data(v, b, value) for kk, v in entries.items()}
            tests = [substitute_data(t, b, value) for t in tests]
            open_.discard(b)
            progress = True
            break
    rest = Alternative((), tuple(tests), tuple(entries.items()))
    if open_ & rest.all_vars():
        return None
    return rest


def _absorbs(general: Alternative, special: Alternative) -> bool:
    """``general + special = general``: ``special`` is ``general`` restricted
    by extra tests (possibly after fixing the binders of ``general``)."""
    inst = _instance(general, special)
    if inst is None:
        return False
    return tidy(Alternative((), special.tests + inst.tests, inst.entries)) == special


def _absorb(alts: list[Alternative]) -> list[Alternative]:
    """Drop binder-free alternatives that another alternative absorbs."""
    alive = list(alts)
    for b in list(alive):
        if b.binders:
            continue
        for a in alive:
            if a is b or (not b.tests and not a.binders):
                continue
            if _absorbs(a, b):
                alive.remove(b)
                break
    return alive


def _sorted(alts: list[Alternative]) -> tuple[Alternative, ...]:
    unique = {a: str(a) for a in alts}
    return tuple(sorted(unique, key=lambda a: unique[a]))


def _merge_choices(alts: list[Alternative]) -> list[Alternative]:
    """``<x> & X + <y> & X = <xy> & X`` for binder-free alternatives."""
    groups: dict[tuple, list[Alternative]] = {}
    out: list[Alternative] = []
    for a in alts:
        if a.binders:
            out.append(a)
        else:
            groups.setdefault(a.entries, []).append(a)
    for entries, group in groups.items():
        if len(group) == 1:
            out.append(group[0])
            continue
        if any(not g.tests for g in group):
            out.append(Alternative((), (), entries))
            continue
        # a product of tests on a binder of an enclosing summation is no
        # longer linear in it; keep the choice so each branch can be summed
        if _ENCLOSING.get() & frozenset().union(*(g.all_vars() for g in group)):
            out.extend(group)
            continue
        product = None
        for g in group:
            m = g.merged_test()
            product = m if product is None else Mul(product, m)
        merged = tidy(Alternative((), (product,), entries))
        if merged is not None:
            out.append(merged)
    return out


# -- operations on basic forms ----------------------------------------------


def _rename_apart(a: Alternative, b: Alternative) -> tuple[Alternative, Alternative]:
    avoid = set(a.all_vars() | b.all_vars())
    b_map = {}
    for x in b.binders:
        if x in a.all_vars():
            y = fresh_name(x, avoid)
            avoid.add(y)
            b_map[x] = y
    b = b.rename(b_map) if b_map else b
    a_map = {}
    for x in a.binders:
        if x in b.all_vars():
            y = fresh_name(x, avoid)
            avoid.add(y)
            a_map[x] = y
    a = a.rename(a_map) if a_map else a
    return a, b


def conj_alternatives(a: Alternative, b: Alternative) -> Alternative:
    a, b = _rename_apart(a, b)
    entries = dict(a.entries)
    for k, v in b.entries:
        entries[k] = Add(entries[k], v) if k in entries else v
    return Alternative(a.binders + b.binders, a.tests + b.tests,
                       tuple(sorted(entries.items())))


def conj_forms(p: BasicForm, q: BasicForm) -> BasicForm:
    return make_form(conj_alternatives(a, b)
                     for a in p.alternatives for b in q.alternatives)


def alt_forms(p: BasicForm, q: BasicForm) -> BasicForm:
    return make_form(p.alternatives + q.alternatives)


def sum_form(x: str, p: BasicForm) -> BasicForm:
    out = []
    for a in p.alternatives:
        if x in a.free_vars():
            a = Alternative(a.binders + (x,), a.tests, a.entries)
        out.append(a)
    return make_form(out)


def scalar_mul(t: DataTerm, p: "BasicForm | Tuplix") -> BasicForm:
    """Multiply every entry payload by ``t``; tests are unaffected."""
    p = _as_form(p)
    out = []
    names = var_names(t)
    for a in p.alternatives:
        clash = set(a.binders) & names
        if clash:
            avoid = set(a.all_vars() | names)
            mapping = {}
            for x in sorted(clash):
                mapping[x] = fresh_name(x, avoid)
                avoid.add(mapping[x])
            a = a.rename(mapping)
        out.append(Alternative(a.binders, a.tests,
                               tuple((k, Mul(t, v)) for k, v in a.entries)))
    return make_form(out)


def clear(attrs: Iterable, p: "BasicForm | Tuplix") -> BasicForm:
    """Erase entries whose attribute is in ``attrs``."""
    h = attr_set(attrs)
    p = _as_form(p)
    return make_form(Alternative(a.binders, a.tests,
                                 tuple(e for e in a.entries if e[0] not in h))
                     for a in p.alternatives)


def select(attrs: Iterable, p: "BasicForm | Tuplix") -> BasicForm:
    """Keep only entries whose attribute is in ``attrs``."""
    j = attr_set(attrs)
    p = _as_form(p)
    return clear(p.attributes() - j, p)


def encapsulate(attrs: Iterable, p: "BasicForm | Tuplix") -> BasicForm:
    """Replace the accumulated entry on each attribute in ``attrs`` by the
    test that it is zero."""
    h = attr_set(attrs)
    bad = sorted(str(a) for a in h if a.signed)
    if bad:
        raise MalformedInput(
            f"encapsulation over signed attributes is undefined: {', '.join(bad)}")
    p = _as_form(p)
    out = []
    for a in p.alternatives:
        tests = a.tests + tuple(v for k, v in a.entries if k in h)
        entries = tuple(e for e in a.entries if e[0] not in h)
        out.append(Alternative(a.binders, tests, entries))
    return make_form(out)


# -- summation elimination ----------------------------------------------------


def _first_attr(a: Alternative, x: str) -> str:
    names = [str(k) for k, v in a.entries if x in var_names(v)]
    return min(names) if names else ""


def _pick_elimination(a: Alternative, mode: str):
    bound = set(a.binders)
    visible = a.entry_vars()
    best = None
    for i, t in enumerate(a.tests):
        tv = var_names(t) & bound
        for x in sorted(tv):
            hidden = x not in visible
            if mode == "flux" and not hidden and tv != {x}:
                continue
            key = (0, "", x, i) if hidden else (1, _first_attr(a, x), x, i)
            if best is not None and key >= best[0]:
                continue
            sol = solve_linear(t, x)
            if sol is not None:
                best = (key, i, x, sol)
    return best


def _negation_pattern(t: DataTerm, x: str) -> bool:
    """Whether ``<t>`` has the form ``<1 - (x-s)/(x-s)>`` with x not in s."""
    p = to_poly(t)
    target = canonical_test(p)
    candidates = [const_poly(0)]
    for mono, _ in p.terms:
        for atom, _ in mono:
            if atom[0] == "i":
                s = split_linear(atom[1], x)
                if s is not None:
                    c, r = s
                    candidates.append(meadow.poly_scale(r, -1 / c))
    for s in candidates:
        u = poly_add(atom_poly(("v", x)), meadow.poly_scale(s, Fraction(-1)))
        ut = poly_to_term(u)
        neg = Add(ONE, Neg(Mul(ut, Inv(ut))))
        if canonical_test(to_poly(neg)) == target:
            return True
    return False


def eliminate_alternative(a: Alternative, mode: str = "all",
                          trace: list | None = None) -> Alternative | None:
    for _ in range(10_000):
        pick = _pick_elimination(a, mode)
        if pick is not None:
            _, i, x, sol = pick
            if trace is not None:
                from .data import format_data
                trace.append(f"sum {x}: solve [{format_data(a.tests[i])}] as "
                             f"{x} = {format_data(sol)}")
            w = _work(a)
            del w.tests[i]
            w.binders.discard(x)
            w.substitute({x: sol})
            a = tidy(w.freeze())
            if a is None:
                return None
            continue
        dropped = False
        for i, t in enumerate(a.tests):
            for x in sorted(var_names(t) & set(a.binders)):
                elsewhere = a.entry_vars().union(
                    *(var_names(s) for j, s in enumerate(a.tests) if j != i))
                if x in elsewhere or not _negation_pattern(t, x):
                    continue
                if trace is not None:
                    trace.append(f"sum {x}: negated test has a solution")
                a = tidy(Alternative(tuple(b for b in a.binders if b != x),
                                     a.tests[:i] + a.tests[i + 1:], a.entries))
                dropped = True
                break
            if dropped or a is None:
                break
        if a is None:
            return None
        if not dropped:
            return a
    return a


def sum_elim(p: BasicForm, mode: str = "all", trace: list | None = None) -> BasicForm:
    """Remove summation binders pinned down by a linear test.

    ``mode="all"`` eliminates every solvable binder, hidden ones (absent
    from entries) first.  ``mode="flux"`` only eliminates a visible binder
    through a test in which it is the sole bound variable, which keeps the
    shape of Kirchhoff constraints such as ``[u + v - w - x]``.
    """
    if mode not in ("all", "flux"):
        raise ValueError(f"unknown elimination mode {mode!r}")
    return make_form(eliminate_alternative(a, mode, trace) for a in p.alternatives)


# -- driver ------------------------------------------------------------------


@dataclass
class Context:
    """Ambient information for normalization: unit interfaces for the
    sign operators and an optional step trace."""

    interfaces: dict = field(default_factory=dict)
    trace: list | None = None

    def log(self, msg: str):
        if self.trace is not None:
            self.trace.append(msg)

    def interface(self, unit: str, ins, outs):
        if ins is not None and outs is not None:
            return ins, outs
        if unit not in self.interfaces:
            from .errors import UnknownUnit
            raise UnknownUnit(unit)
        return self.interfaces[unit]


def _as_form(p) -> BasicForm:
    return p if isinstance(p, BasicForm) else build(p)


def build(p: Tuplix, ctx: Context | None = None) -> BasicForm:
    """Basic form of ``p`` without summation elimination."""
    ctx = ctx or Context()
    from . import flux
    match p:
        case Eps():
            return EPS_FORM
        case Delta():
            return NULL_FORM
        case Test(t):
            return make_form([Alternative((), (t,), ())])
        case Entry(a, t):
            return make_form([Alternative((), (), ((a, t),))])
        case Conj(l, r):
            left = build(l, ctx)
            if left.is_null:
                return NULL_FORM
            return conj_forms(left, build(r, ctx))
        case Alt(l, r):
            return alt_forms(build(l, ctx), build(r, ctx))
        case Sum(x, body):
            token = _ENCLOSING.set(_ENCLOSING.get() | {x})
            try:
                inner = build(body, ctx)
            finally:
                _ENCLOSING.reset(token)
            return sum_form(x, inner)
        case Scalar(t, body):
            return scalar_mul(t, build(body, ctx))
        case Clear(h, body):
            return clear(h, build(body, ctx))
        case Select(h, body):
            return select(h, build(body, ctx))
        case Encap(h, body):
            out = encapsulate(h, build(body, ctx))
            ctx.log(f"encap{{{', '.join(sorted(map(str, h)))}}}: "
                    f"{len(out.alternatives)} alternative(s)")
            return out
        case Kirch(t, body):
            inner = build(body, ctx).to_tuplix()
            ctx.log("K: flux constraint added")
            return build(flux.kirchhoff(inner, t), ctx)
        case Zeta(g, h, body, ins, outs):
            ins, outs = ctx.interface(g, ins, outs)
            inner = build(body, ctx).to_tuplix()
            return build(flux.sign_annotate(inner, h, ins, outs), ctx)
        case ToFlat(body):
            return build(flux.to_flat(build(body, ctx).to_tuplix()), ctx)
        case ToSigned(g, body, ins, outs):
            ins, outs = ctx.interface(g, ins, outs)
            inner = build(body, ctx).to_tuplix()
            return build(flux.to_signed(inner, ins, outs), ctx)
        case Gamma(f, _):
            raise MalformedInput(f"definition of {f} outside a function summation")
        case SumFn(f, _):
            raise UnboundFunctionVar(
                f"function {f} is used without a single definition in its summation")
    raise TypeError(f"not a tuplix: {p!r}")


def simplify(p: Tuplix, *, interfaces: Mapping | None = None) -> BasicForm:
    """Basic form of ``p`` with every operator eliminated but summations
    left in place."""
    return build(p, Context(dict(interfaces or {}), None))


def normalize(p: Tuplix, *, interfaces: Mapping | None = None,
              eliminate: str | None = "all", trace: list | None = None) -> BasicForm:
    """Full pipeline: unfold function definitions, eliminate operators
    inside out, then eliminate summations (``eliminate=None`` skips this)."""
    from .funcdef import eliminate_functions
    ctx = Context(dict(interfaces or {}), trace)
    form = build(eliminate_functions(p), ctx)
    if eliminate is not None:
        form = sum_elim(form, eliminate, trace)
    return restore_names(form)


def _base_name(x: str) -> str:
    return x.rstrip("'") or x


# Above this many orderings of tied binders, ties are broken by name.
MAX_BINDER_ORDERINGS = 720


def restore_names(p: BasicForm) -> BasicForm:
    """Name binders canonically, so that alpha-equivalent alternatives
    print identically.

    Binders are ordered by where they first occur (entries in attribute
    order, then tests); each gets its name with the primes added by
    renaming apart removed, primed again only on a clash.  Binders whose
    first occurrence ties are tried in every order and the smallest
    printed result is kept."""
    return make_form(_canonical_binders(a) for a in p.alternatives)


def _first_use(a: Alternative) -> dict[str, int]:
    pos: dict[str, int] = {}
    terms = [t for _, t in a.entries] + list(a.tests)
    for i, t in enumerate(terms):
        for x in var_names(t):
            pos.setdefault(x, i)
    return pos


def _canonical_binders(a: Alternative) -> Alternative:
    if not a.binders:
        return a
    pos = _first_use(a)
    groups: dict[int, list[str]] = {}
    for x in a.binders:
        groups.setdefault(pos.get(x, len(pos) + 1), []).append(x)
    ordered = [sorted(groups[k]) for k in sorted(groups)]
    count = 1
    for g in ordered:
        for n in range(2, len(g) + 1):
            count *= n
    if count > MAX_BINDER_ORDERINGS:
        choices = [tuple(x for g in ordered for x in g)]
    else:
        choices = [tuple(x for part in parts for x in part)
                   for parts in itertools.product(*(itertools.permutations(g) for g in ordered))]
    free = a.free_vars()
    best = None
    for order in choices:
        taken = set(free)
        mapping = {}
        for x in order:
            name = _base_name(x)
            while name in taken:
                name += "'"
            mapping[x] = name
            taken.add(name)
        renamed = a.rename(mapping)
        renamed = tidy(Alternative(tuple(mapping[x] for x in order),
                                   renamed.tests, renamed.entries)) or renamed
        key = str(renamed)
        if best is None or key < best[0]:
            best = (key, renamed)
    return best[1]
