"""Symbolic algebra over non-trivial cancellation meadows.

Data terms are normalized to sparse polynomials over *atoms*: variables,
function applications and inverses of multi-term polynomials.  Exponents
of variable atoms range over the nonzero integers plus a special exponent
``0`` standing for the idempotent ``x*x^-1`` (which is 1 when x != 0 and 0
when x = 0).  The rules ``x*x*x^-1 = x`` and ``(x*y)^-1 = x^-1*y^-1`` make
this representation closed under multiplication and monomial inversion.

Zero tests are decided by case splitting on the zero-ness of every inverse
argument, innermost first.  Each leaf is a Laurent polynomial identity
problem over Q which is decided exactly.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .data import (
    Add, Apply, Const, DataTerm, FnApp, Inv, Lambda, Mul, Neg, Var,
    format_data, substitute_data,
)
from .errors import ResourceLimit, UnboundVariable

DEFAULT_SEED = 0xCAFE
DEFAULT_BRANCH_BUDGET = 2 ** 16
SAMPLES = 64


class Tri(enum.Enum):
    TRUE = "ProvablyTrue"
    FALSE = "ProvablyFalse"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


# -- polynomials ------------------------------------------------------------
#
# Atom:  ("v", name) | ("f", name, (Poly, ...)) | ("i", Poly)
# Mono:  tuple of (atom, exponent) sorted by atom key
# Poly:  tuple of (mono, Fraction) sorted by mono key, no zero coefficients


@dataclass(frozen=True)
class Poly:
    terms: tuple

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not self.terms[0][0])

    @property
    def const_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        mono, coeff = self.terms[0]
        if mono:
            raise ValueError("not a constant polynomial")
        return coeff

    def key(self) -> str:
        return _poly_key(self)

    def __str__(self):
        return format_data(poly_to_term(self))


@lru_cache(maxsize=None)
def _atom_key(atom) -> str:
    kind = atom[0]
    if kind == "v":
        return "1:" + atom[1]
    if kind == "f":
        return "2:" + atom[1] + "(" + ",".join(_poly_key(a) for a in atom[2]) + ")"
    return "3:(" + _poly_key(atom[1]) + ")"


def _mono_key(mono) -> tuple:
    degree = sum(abs(e) for _, e in mono)
    return (not mono, degree, tuple((_atom_key(a), e) for a, e in mono))


@lru_cache(maxsize=None)
def _poly_key(p: Poly) -> str:
    return "+".join(f"{c}*[{';'.join(f'{_atom_key(a)}^{e}' for a, e in m)}]"
                    for m, c in p.terms)


def _make(d: dict) -> Poly:
    return Poly(tuple(sorted(((m, c) for m, c in d.items() if c != 0),
                             key=lambda mc: _mono_key(mc[0]))))


ZERO_POLY = Poly(())


def const_poly(c) -> Poly:
    c = Fraction(c)
    return Poly((((), c),)) if c else ZERO_POLY


def _combine(e1: int, e2: int) -> int | None:
    if e1 == 0:
        return e2
    if e2 == 0:
        return e1
    return e1 + e2


def _mono_mul(m1, m2, nonzero: frozenset):
    if not m1:
        return m2
    if not m2:
        return m1
    exps: dict = dict(m1)
    for atom, e in m2:
        exps[atom] = _combine(exps[atom], e) if atom in exps else e
    items = []
    for atom, e in exps.items():
        if e == 0 and atom in nonzero:
            continue
        items.append((atom, e))
    items.sort(key=lambda ae: _atom_key(ae[0]))
    return tuple(items)


def _add(p: Poly, q: Poly) -> Poly:
    d = dict(p.terms)
    for m, c in q.terms:
        d[m] = d.get(m, 0) + c
    return _make(d)


def _scale(p: Poly, c: Fraction) -> Poly:
    if not c:
        return ZERO_POLY
    return Poly(tuple((m, k * c) for m, k in p.terms))


def _mul(p: Poly, q: Poly, nonzero: frozenset = frozenset()) -> Poly:
    d: dict = {}
    for m1, c1 in p.terms:
        for m2, c2 in q.terms:
            m = _mono_mul(m1, m2, nonzero)
            d[m] = d.get(m, 0) + c1 * c2
    return _make(d)


def _pow(p: Poly, n: int, nonzero: frozenset = frozenset()) -> Poly:
    result = const_poly(1)
    for _ in range(n):
        result = _mul(result, p, nonzero)
    return result


def _atom_poly(atom) -> Poly:
    return Poly(((((atom, 1),), Fraction(1)),))


def monic(p: Poly) -> tuple[Fraction, Poly]:
    """Split ``p`` into leading coefficient and a polynomial with leading
    coefficient 1."""
    if not p.terms:
        return Fraction(0), p
    lead = p.terms[0][1]
    return lead, _scale(p, 1 / lead)


# -- normalization context ---------------------------------------------------


@dataclass(frozen=True)
class Assumptions:
    """Facts holding in one case-split branch.

    ``zero_atoms`` / ``nonzero_atoms`` hold variable or function atoms.
    ``inverses`` lists inverse arguments in the order they were split on:
    ``(u, alias)`` assumes ``u != 0`` and names ``u^-1`` by the fresh
    variable ``alias``; ``(u, None)`` assumes ``u = 0``.
    ``nonzero_terms`` only serve to prune contradictory branches.
    """

    zero_atoms: frozenset = frozenset()
    nonzero_atoms: frozenset = frozenset()
    inverses: tuple = ()
    nonzero_terms: tuple = ()
    _resolved: tuple = field(default=None, compare=False, hash=False, repr=False)

    @property
    def aliases(self) -> tuple:
        return tuple((u, w) for u, w in self.inverses if w is not None)

    def resolved(self) -> tuple[dict, frozenset]:
        if self._resolved is None:
            amap: dict = {}
            zkeys: set = set()
            for u, w in self.inverses:
                partial = Assumptions(self.zero_atoms, self.nonzero_atoms)
                object.__setattr__(partial, "_resolved", (dict(amap), frozenset(zkeys)))
                _, key = monic(_Normalizer(partial).run(u))
                if w is None:
                    zkeys.add(key)
                else:
                    amap[key] = w
            object.__setattr__(self, "_resolved", (amap, frozenset(zkeys)))
        return self._resolved

    def with_atom(self, atom, zero: bool) -> "Assumptions":
        if zero:
            return Assumptions(self.zero_atoms | {atom}, self.nonzero_atoms,
                               self.inverses, self.nonzero_terms)
        return Assumptions(self.zero_atoms, self.nonzero_atoms | {atom},
                           self.inverses, self.nonzero_terms)

    def with_inverse(self, u: DataTerm, alias: str | None) -> "Assumptions":
        nonzero = self.nonzero_atoms if alias is None else self.nonzero_atoms | {("v", alias)}
        return Assumptions(self.zero_atoms, nonzero,
                           self.inverses + ((u, alias),), self.nonzero_terms)

    def substitute(self, name: str, value: DataTerm) -> "Assumptions":
        return Assumptions(
            self.zero_atoms, self.nonzero_atoms,
            tuple((substitute_data(u, name, value), w) for u, w in self.inverses),
            tuple(substitute_data(u, name, value) for u in self.nonzero_terms)
            + ((value,) if ("v", name) in self.nonzero_atoms else ()),
        )


NO_ASSUMPTIONS = Assumptions()


class _Normalizer:
    def __init__(self, ctx: Assumptions):
        self.ctx = ctx
        self.nonzero = ctx.nonzero_atoms
        if ctx is NO_ASSUMPTIONS:
            self.aliases, self.zero_keys = {}, frozenset()
        else:
            self.aliases, self.zero_keys = ctx.resolved()
        self.memo: dict = {}

    def run(self, t: DataTerm) -> Poly:
        p = self.memo.get(t)
        if p is None:
            p = self._norm(t)
            self.memo[t] = p
        return p

    def _atom(self, atom) -> Poly:
        if atom in self.ctx.zero_atoms:
            return ZERO_POLY
        return _atom_poly(atom)

    def _norm(self, t: DataTerm) -> Poly:
        match t:
            case Const(v):
                return const_poly(v)
            case Var(name):
                return self._atom(("v", name))
            case Neg(a):
                return _scale(self.run(a), Fraction(-1))
            case Add(a, b):
                return _add(self.run(a), self.run(b))
            case Mul(a, b):
                return _mul(self.run(a), self.run(b), self.nonzero)
            case Inv(a):
                return self.inverse(self.run(a))
            case FnApp(name, args):
                return self._atom(("f", name, tuple(self.run(a) for a in args)))
            case Apply():
                from .funcdef import beta_reduce
                return self.run(beta_reduce(t))
            case Lambda():
                raise TypeError("a lambda abstraction is not a quantity")
        raise TypeError(f"not a data term: {t!r}")

    def inverse(self, p: Poly) -> Poly:
        if not p.terms:
            return ZERO_POLY
        if len(p.terms) == 1:
            mono, c = p.terms[0]
            result = const_poly(1 / c)
            plain = []
            for atom, e in mono:
                if atom[0] == "i":
                    result = _mul(result, _pow(atom[1], e, self.nonzero), self.nonzero)
                else:
                    plain.append((atom, -e))
            if plain:
                result = _mul(result, Poly(((tuple(plain), Fraction(1)),)), self.nonzero)
            return result
        lead, q = monic(p)
        if q in self.zero_keys:
            return ZERO_POLY
        alias = self.aliases.get(q)
        if alias is not None:
            return _scale(_atom_poly(("v", alias)), 1 / lead)
        return _scale(_atom_poly(("i", q)), 1 / lead)


def to_poly(t: DataTerm, ctx: Assumptions = NO_ASSUMPTIONS) -> Poly:
    if ctx is NO_ASSUMPTIONS:
        return _to_poly_cached(t)
    return _Normalizer(ctx).run(t)


@lru_cache(maxsize=50_000)
def _to_poly_cached(t: DataTerm) -> Poly:
    return _Normalizer(NO_ASSUMPTIONS).run(t)


# -- back to terms -----------------------------------------------------------


def _atom_term(atom) -> DataTerm:
    kind = atom[0]
    if kind == "v":
        return Var(atom[1])
    if kind == "f":
        return FnApp(atom[1], tuple(poly_to_term(a) for a in atom[2]))
    return Inv(poly_to_term(atom[1]))


def _mono_term(mono, coeff: Fraction = Fraction(1)) -> DataTerm | None:
    """Product term for ``coeff * mono`` with ``coeff`` positive."""
    factors: list[DataTerm] = [] if coeff == 1 else [Const(coeff)]
    for atom, e in mono:
        base = _atom_term(atom)
        if atom[0] == "i":
            factors.extend([base] * e)
        elif e == 0:
            factors.extend([base, Inv(base)])
        elif e > 0:
            factors.extend([base] * e)
        else:
            factors.extend([Inv(base)] * -e)
    if not factors:
        return None
    term = factors[0]
    for f in factors[1:]:
        term = Mul(term, f)
    return term


def poly_to_term(p: Poly) -> DataTerm:
    """Canonical data term for ``p``; normalizing it gives ``p`` back."""
    if not p.terms:
        return Const(0)
    result: DataTerm | None = None
    for mono, c in p.terms:
        piece = _mono_term(mono, abs(c)) if mono else Const(abs(c))
        if result is None:
            result = Neg(piece) if c < 0 else piece
        else:
            result = Add(result, Neg(piece)) if c < 0 else Add(result, piece)
    return result


# -- public operations -------------------------------------------------------


def normalize_data(t: DataTerm) -> DataTerm:
    """Canonical representative of ``t``: a sparse polynomial over variables,
    function applications and inverses of non-constant sums."""
    return poly_to_term(to_poly(t))


def eval_data(t: DataTerm, env: Mapping[str, Fraction]) -> Fraction:
    """Exact evaluation with totalized division (``0^-1 = 0``)."""
    match t:
        case Const(v):
            return v
        case Var(name):
            if name not in env:
                raise UnboundVariable(name)
            return Fraction(env[name])
        case Neg(a):
            return -eval_data(a, env)
        case Add(a, b):
            return eval_data(a, env) + eval_data(b, env)
        case Mul(a, b):
            return eval_data(a, env) * eval_data(b, env)
        case Inv(a):
            v = eval_data(a, env)
            return 1 / v if v else Fraction(0)
        case Apply():
            from .funcdef import beta_reduce
            return eval_data(beta_reduce(t), env)
        case FnApp(name, _):
            raise TypeError(f"cannot evaluate application of function variable {name}")
    raise TypeError(f"cannot evaluate {t!r}")


def eval_poly(p: Poly, env: Mapping, rng: random.Random | None = None,
              fn_values: dict | None = None) -> Fraction:
    """Evaluate a normalized polynomial.  Function atoms get values drawn
    from ``rng`` (memoized in ``fn_values``)."""
    total = Fraction(0)
    for mono, c in p.terms:
        v = c
        for atom, e in mono:
            base = _eval_atom(atom, env, rng, fn_values)
            if e == 0:
                v *= 1 if base else 0
            elif base == 0:
                v = Fraction(0)
            else:
                v *= base ** e
            if not v:
                break
        total += v
    return total


def _eval_atom(atom, env, rng, fn_values) -> Fraction:
    kind = atom[0]
    if kind == "v":
        if atom[1] not in env:
            raise UnboundVariable(atom[1])
        return Fraction(env[atom[1]])
    if kind == "i":
        v = eval_poly(atom[1], env, rng, fn_values)
        return 1 / v if v else Fraction(0)
    key = (atom[1], tuple(eval_poly(a, env, rng, fn_values) for a in atom[2]))
    if fn_values is None or rng is None:
        raise TypeError(f"cannot evaluate application of function variable {atom[1]}")
    if key not in fn_values:
        fn_values[key] = _random_rational(rng)
    return fn_values[key]


def poly_variables(p: Poly) -> frozenset[str]:
    names: set[str] = set()
    for mono, _ in p.terms:
        for atom, _ in mono:
            if atom[0] == "v":
                names.add(atom[1])
            elif atom[0] == "i":
                names |= poly_variables(atom[1])
            else:
                for a in atom[2]:
                    names |= poly_variables(a)
    return frozenset(names)


def _random_rational(rng: random.Random) -> Fraction:
    den = 0
    while den == 0:
        den = rng.randint(-100, 100)
    return Fraction(rng.randint(-100, 100), den)


# -- zero decision -----------------------------------------------------------

_ZERO, _NONZERO, _OPEN = "zero", "nonzero", "open"


class _Search:
    def __init__(self, budget: int):
        self.budget = budget
        self.leaves = 0
        self.alias_count = 0

    def fresh_alias(self) -> str:
        self.alias_count += 1
        return f"%w{self.alias_count}"

    def fresh_unit(self) -> str:
        self.alias_count += 1
        return f"$u{self.alias_count}"

    def tick(self):
        self.leaves += 1
        if self.leaves > self.budget:
            raise ResourceLimit(f"case-split budget of {self.budget} exceeded")


def _find_split(p: Poly, ctx: Assumptions):
    """Innermost inverse occurrence not yet settled by ``ctx``."""
    for mono, _ in p.terms:
        for atom, e in mono:
            if atom[0] == "i":
                inner = _find_split(atom[1], ctx)
                return inner if inner is not None else atom
            if e <= 0 and atom not in ctx.nonzero_atoms:
                return atom
    return None


def _linear_solution(u: Poly, ctx: Assumptions, forbidden: frozenset):
    """Solve ``u = 0`` for a variable with a constant coefficient."""
    candidates = {}
    bad = set(forbidden)
    for mono, c in u.terms:
        for atom, e in mono:
            if atom[0] != "v":
                continue
            name = atom[1]
            if len(mono) == 1 and e == 1:
                candidates[name] = candidates.get(name, 0) + 1
            else:
                bad.add(name)
    for mono, _ in u.terms:
        for atom, _ in mono:
            if atom[0] != "v":
                bad |= poly_variables(_atom_poly(atom))
    for name in sorted(candidates):
        if name in bad or ("v", name) in ctx.nonzero_atoms or name.startswith("%"):
            continue
        coeff = Fraction(0)
        rest: dict = {}
        for mono, c in u.terms:
            if mono == ((("v", name), 1),):
                coeff += c
            else:
                rest[mono] = c
        if coeff:
            return name, poly_to_term(_scale(_make(rest), -1 / coeff))
    return None


def _infeasible(ctx: Assumptions) -> bool:
    norm = _Normalizer(ctx)
    for u, w in ctx.inverses:
        p = norm.run(u)
        if w is not None and not p:
            return True
        if w is None and p.is_const and p.const_value != 0:
            return True
    return any(not norm.run(u) for u in ctx.nonzero_terms)


def _leaf(p: Poly, ctx: Assumptions) -> str:
    norm = _Normalizer(ctx)
    nonzero = ctx.nonzero_atoms
    q = p
    for u_term, w in reversed(ctx.aliases):
        u = norm.run(u_term)
        walias = ("v", w)
        split: dict[int, dict] = {}
        for mono, c in q.terms:
            e = 0
            rest = []
            for atom, k in mono:
                if atom == walias:
                    e = k
                else:
                    rest.append((atom, k))
            split.setdefault(e, {})[tuple(rest)] = c
        if set(split) <= {0}:
            continue
        top = max(split)
        acc = ZERO_POLY
        for e, part in split.items():
            acc = _add(acc, _mul(_make(part), _pow(u, top - e, nonzero), nonzero))
        q = acc
    if not q.terms:
        return _ZERO
    if len(q.terms) == 1:
        mono, _ = q.terms[0]
        if all(atom in nonzero and not atom[1].startswith("%") for atom, _ in mono):
            return _NONZERO
    return _OPEN


def _decide(t: DataTerm, ctx: Assumptions, search: _Search, out: set):
    p = to_poly(t, ctx)
    atom = _find_split(p, ctx)
    if atom is None:
        search.tick()
        out.add(_leaf(p, ctx))
        return
    if atom[0] in ("v", "f"):
        for branch in (ctx.with_atom(atom, True), ctx.with_atom(atom, False)):
            if _infeasible(branch):
                search.tick()
                continue
            _decide(t, branch, search, out)
            if _OPEN in out or out == {_ZERO, _NONZERO}:
                return
        return
    u = atom[1]
    u_term = poly_to_term(u)
    forbidden = frozenset(w for _, w in ctx.aliases)
    sol = _linear_solution(u, ctx, forbidden)
    if sol is not None:
        # u = c*x + r: write x = value + s/c with s standing for u, so the
        # nonzero branch only has to know that the atom s is nonzero
        name, value = sol
        zero_ctx = ctx.substitute(name, value)
        zero_t = substitute_data(t, name, value)
        c, _ = split_linear(u, name)
        s = search.fresh_unit()
        shifted = Add(value, Mul(Const(1 / c), Var(s)))
        nonzero_ctx = ctx.substitute(name, shifted).with_atom(("v", s), False)
        nonzero_t = substitute_data(t, name, shifted)
    else:
        zero_ctx = ctx.with_inverse(u_term, None)
        zero_t = t
        nonzero_ctx = ctx.with_inverse(u_term, search.fresh_alias())
        nonzero_t = t
    for branch_t, branch in ((zero_t, zero_ctx), (nonzero_t, nonzero_ctx)):
        if _infeasible(branch):
            search.tick()
            continue
        _decide(branch_t, branch, search, out)
        if _OPEN in out or out == {_ZERO, _NONZERO}:
            return


def is_zero(t: DataTerm, budget: int = DEFAULT_BRANCH_BUDGET) -> Tri:
    """Decide whether ``t = 0`` in every non-trivial cancellation meadow.

    FALSE means ``t`` is nonzero under every assignment.  Raises
    :class:`ResourceLimit` when more than ``budget`` branches are needed.
    """
    p = to_poly(t)
    if not p.terms:
        return Tri.TRUE
    if p.is_const:
        return Tri.FALSE
    return _is_zero_cached(poly_to_term(p), budget)


@lru_cache(maxsize=20_000)
def _is_zero_cached(t: DataTerm, budget: int) -> Tri:
    out: set = set()
    _decide(t, NO_ASSUMPTIONS, _Search(budget), out)
    if out == {_ZERO}:
        return Tri.TRUE
    if out == {_NONZERO}:
        return Tri.FALSE
    return Tri.UNKNOWN


def is_zero_or_unknown(t: DataTerm, budget: int = DEFAULT_BRANCH_BUDGET) -> Tri:
    """:func:`is_zero`, degrading a budget overrun to UNKNOWN."""
    try:
        return is_zero(t, budget)
    except ResourceLimit:
        return Tri.UNKNOWN


def sample_assignments(names, seed: int = DEFAULT_SEED, samples: int = SAMPLES):
    """Deterministic evaluation points: the 0/1 corners of the first few
    variables, then ``samples`` random rationals."""
    names = sorted(names)
    rng = random.Random(seed)
    corners = names[:4]
    for bits in range(2 ** len(corners)):
        env = {n: Fraction(0) for n in names}
        for i, n in enumerate(corners):
            env[n] = Fraction((bits >> i) & 1)
        yield env
    for _ in range(samples):
        yield {n: _random_rational(rng) for n in names}


def refute(t: DataTerm, s: DataTerm, seed: int = DEFAULT_SEED) -> dict | None:
    """Search for an assignment on which ``t`` and ``s`` evaluate differently."""
    pt, ps = to_poly(t), to_poly(s)
    names = poly_variables(pt) | poly_variables(ps)
    rng = random.Random(seed ^ 0x5EED)
    for env in sample_assignments(names, seed):
        fn_values: dict = {}
        if eval_poly(pt, env, rng, fn_values) != eval_poly(ps, env, rng, fn_values):
            return env
    return None


def eq_data(t: DataTerm, s: DataTerm, seed: int = DEFAULT_SEED,
            budget: int = DEFAULT_BRANCH_BUDGET) -> Tri:
    """TRUE if ``t = s`` is valid; FALSE if some assignment separates them."""
    diff = Add(t, Neg(s))
    if not to_poly(diff).terms:
        return Tri.TRUE
    if refute(t, s, seed) is not None:
        return Tri.FALSE
    return is_zero_or_unknown(diff, budget)


def solve_linear(t: DataTerm, x: str) -> DataTerm | None:
    """If ``t = c*x + r`` with ``c`` provably nonzero and ``x`` not in
    ``c`` or ``r``, return the normalized solution ``-r/c`` of ``t = 0``."""
    p = to_poly(t)
    coeff: dict = {}
    rest: dict = {}
    target = ("v", x)
    for mono, c in p.terms:
        exps = dict(mono)
        if target in exps:
            if exps[target] != 1:
                return None
            reduced = tuple((a, e) for a, e in mono if a != target)
            coeff[reduced] = coeff.get(reduced, 0) + c
        else:
            rest[mono] = c
    if not coeff:
        return None
    cpoly, rpoly = _make(coeff), _make(rest)
    if x in poly_variables(cpoly) or x in poly_variables(rpoly):
        return None
    if cpoly.is_const:
        return poly_to_term(_scale(rpoly, -1 / cpoly.const_value))
    if is_zero_or_unknown(poly_to_term(cpoly)) is not Tri.FALSE:
        return None
    return normalize_data(Mul(Neg(poly_to_term(rpoly)), Inv(poly_to_term(cpoly))))


def split_linear(p: Poly, x: str) -> tuple[Fraction, Poly] | None:
    """Write ``p`` as ``c*x + r`` with constant ``c != 0`` and ``x`` absent
    from ``r``; ``None`` if that is impossible."""
    target = ((("v", x), 1),)
    coeff = Fraction(0)
    rest: dict = {}
    for mono, c in p.terms:
        if mono == target:
            coeff += c
        else:
            rest[mono] = c
    if not coeff:
        return None
    r = _make(rest)
    if x in poly_variables(r):
        return None
    return coeff, r


def substitute_poly(p: Poly, mapping: Mapping[str, DataTerm]) -> Poly:
    from .data import substitute_many
    if not mapping or not (poly_variables(p) & set(mapping)):
        return p
    return to_poly(substitute_many(poly_to_term(p), dict(mapping)))


poly_add = _add
poly_mul = _mul
poly_scale = _scale
atom_poly = _atom_poly
poly_key = _poly_key


poly_from_terms = _make
