"""Deciding equality of tuplices.

Both sides are normalized with full summation elimination.  Binders are
then reparametrized by the entries they feed, so two alternatives that
differ only in the choice of bound variables line up.  Tests and payloads
are compared with the data-term decision procedure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from . import meadow
from .basic import (
    Alternative, BasicForm, make_form, normalize, restore_names, sum_elim,
)
from .core import Tuplix
from .data import (
    ONE, Add, DataTerm, Inv, Mul, Neg, Var, format_data, substitute_many,
    var_names,
)
from .meadow import (
    DEFAULT_SEED, Tri, eq_data, is_zero_or_unknown, poly_to_term, split_linear,
    to_poly,
)


class Verdict(enum.Enum):
    EQUAL = "Equal"
    NOT_EQUAL = "NotEqual"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class EqResult:
    verdict: Verdict
    witness: str | None = None

    def __str__(self):
        return str(self.verdict) if self.witness is None else f"{self.verdict}: {self.witness}"


def _reparametrize(a: Alternative) -> Alternative:
    """Rename binders canonically: the binder feeding the first entry
    becomes ``@1`` standing for that entry's payload, and so on."""
    if not a.binders:
        return a
    free = set(a.binders)
    mapping: dict[str, DataTerm] = {}
    tests = list(a.tests)
    entries = list(a.entries)
    count = 0
    for idx in range(len(entries)):
        payload = entries[idx][1]
        p = to_poly(payload)
        for x in sorted(var_names(payload) & free):
            s = split_linear(p, x)
            if s is None:
                continue
            c, r = s
            count += 1
            new = Var(f"@{count}")
            # payload = c*x + r  =>  x = (new - r)/c
            sol = poly_to_term(meadow.poly_scale(
                meadow.poly_add(to_poly(new), meadow.poly_scale(r, Fraction(-1))), 1 / c))
            sub = {x: sol}
            tests = [substitute_many(t, sub) for t in tests]
            entries = [(k, substitute_many(v, sub)) for k, v in entries]
            free.discard(x)
            mapping[x] = new
            break
    rest = sorted(free, key=lambda x: (_first_use(tests, x), x))
    renames = {}
    for x in rest:
        count += 1
        renames[x] = f"@{count}"
    binders = tuple(v.name for v in mapping.values()) + tuple(renames[x] for x in rest)
    alt = Alternative(binders, tuple(tests), tuple(entries)).rename(renames)
    tidied = make_form([alt]).alternatives
    return tidied[0] if tidied else alt


def _first_use(tests, x) -> int:
    for i, t in enumerate(tests):
        if x in var_names(t):
            return i
    return len(tests)


def canonical_form(p: Tuplix | BasicForm, interfaces=None) -> BasicForm:
    if isinstance(p, BasicForm):
        # a form may come from a partial pipeline (e.g. flux-only elimination)
        form = restore_names(sum_elim(p))
    else:
        form = normalize(p, interfaces=interfaces)
    return make_form(_reparametrize(a) for a in form.alternatives)


def _indicator(a: Alternative) -> DataTerm:
    """1 when every test of ``a`` holds, 0 otherwise."""
    m = a.merged_test()
    if m is None:
        return ONE
    return Add(ONE, Neg(Mul(m, Inv(m))))


def _alt_equal(a: Alternative, b: Alternative, seed: int) -> bool:
    if a == b:
        return True
    if a.binders != b.binders:
        return False
    if [k for k, _ in a.entries] != [k for k, _ in b.entries]:
        return False
    if eq_data(_indicator(a), _indicator(b), seed) is not Tri.TRUE:
        return False
    for (_, p), (_, q) in zip(a.entries, b.entries):
        if eq_data(p, q, seed) is Tri.TRUE:
            continue
        # payloads only matter where the tests hold
        if a.tests and eq_data(Mul(_indicator(a), p), Mul(_indicator(a), q), seed) is Tri.TRUE:
            continue
        return False
    return True


def _match(xs, ys, seed) -> bool:
    used = [False] * len(ys)
    for a in xs:
        for j, b in enumerate(ys):
            if not used[j] and _alt_equal(a, b, seed):
                used[j] = True
                break
        else:
            return False
    return all(used)


def _definite_difference(p: BasicForm, q: BasicForm) -> str | None:
    """A description of a difference that holds under every assignment."""
    plain = all(not a.tests and not a.binders
                for a in p.alternatives + q.alternatives)
    if not plain:
        return None
    if p.is_null != q.is_null:
        return "one side is null"
    if len(p.alternatives) == 1 and len(q.alternatives) == 1:
        a, b = p.alternatives[0], q.alternatives[0]
        ka, kb = dict(a.entries), dict(b.entries)
        if set(ka) != set(kb):
            diff = sorted(map(str, set(ka) ^ set(kb)))
            return f"attribute {diff[0]} occurs on one side only"
        for k in sorted(ka):
            if is_zero_or_unknown(Add(ka[k], Neg(kb[k]))) is Tri.FALSE:
                return f"{k}: {format_data(ka[k])} vs {format_data(kb[k])}"
    if not (p.free_vars() | q.free_vars()) and set(p.alternatives) != set(q.alternatives):
        extra = sorted(map(str, set(p.alternatives) ^ set(q.alternatives)))
        return f"alternative {extra[0]} occurs on one side only"
    return None


def tuplix_eq(p: Tuplix | BasicForm, q: Tuplix | BasicForm, *,
              seed: int = DEFAULT_SEED, interfaces=None) -> EqResult:
    """``Equal`` when provably equal, ``NotEqual`` when the two sides differ
    under every assignment, ``Unknown`` otherwise."""
    fp = canonical_form(p, interfaces)
    fq = canonical_form(q, interfaces)
    if fp == fq:
        return EqResult(Verdict.EQUAL)
    if len(fp.alternatives) == len(fq.alternatives) and \
            _match(fp.alternatives, fq.alternatives, seed):
        return EqResult(Verdict.EQUAL)
    witness = _definite_difference(fp, fq)
    if witness is not None:
        return EqResult(Verdict.NOT_EQUAL, witness)
    return EqResult(Verdict.UNKNOWN)
