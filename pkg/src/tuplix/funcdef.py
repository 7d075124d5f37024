"""Function definitions inside tuplices.

``Gamma(f, lam x. t)`` pins the function variable ``f``; conjoined terms
may then use ``f(s)`` which unfolds to ``t[s/x]``.  A summation over ``f``
around such a definition acts as a local let-binding and disappears once
every use has been unfolded.
"""

from __future__ import annotations

from .core import (
    Conj, Gamma, Sum, SumFn, Tuplix, children, conj, conj_factors, free_fns,
    rebuild, rename_bound,
)
from .data import (
    Add, Apply, Const, DataTerm, FnApp, Inv, Lambda, Mul, Neg, Var,
    substitute_many, var_names,
)
from .errors import ArityMismatch, MalformedInput


def beta_reduce(t: DataTerm) -> DataTerm:
    """Eliminate every ``Apply`` node in ``t``."""
    match t:
        case Var() | Const():
            return t
        case Neg(a):
            return Neg(beta_reduce(a))
        case Inv(a):
            return Inv(beta_reduce(a))
        case Add(a, b):
            return Add(beta_reduce(a), beta_reduce(b))
        case Mul(a, b):
            return Mul(beta_reduce(a), beta_reduce(b))
        case FnApp(name, args):
            return FnApp(name, tuple(beta_reduce(a) for a in args))
        case Lambda(params, body):
            return Lambda(params, beta_reduce(body))
        case Apply(fn, args):
            if not isinstance(fn, Lambda):
                raise MalformedInput("only a lambda abstraction can be applied")
            if len(args) != fn.arity:
                raise ArityMismatch(
                    f"lambda of arity {fn.arity} applied to {len(args)} argument(s)")
            args = tuple(beta_reduce(a) for a in args)
            return beta_reduce(substitute_many(fn.body, dict(zip(fn.params, args))))
    raise TypeError(f"not a data term: {t!r}")


def unfold_data(t: DataTerm, f: str, lam: Lambda) -> DataTerm:
    """Replace applications of ``f`` in ``t`` by instances of ``lam``."""
    match t:
        case Var() | Const():
            return t
        case Neg(a):
            return Neg(unfold_data(a, f, lam))
        case Inv(a):
            return Inv(unfold_data(a, f, lam))
        case Add(a, b):
            return Add(unfold_data(a, f, lam), unfold_data(b, f, lam))
        case Mul(a, b):
            return Mul(unfold_data(a, f, lam), unfold_data(b, f, lam))
        case FnApp(name, args):
            args = tuple(unfold_data(a, f, lam) for a in args)
            if name != f:
                return FnApp(name, args)
            return beta_reduce(Apply(lam, args))
        case Lambda(params, body):
            return Lambda(params, unfold_data(body, f, lam))
        case Apply(fn, args):
            return Apply(unfold_data(fn, f, lam),
                         tuple(unfold_data(a, f, lam) for a in args))
    raise TypeError(f"not a data term: {t!r}")


def _unfold(p: Tuplix, f: str, lam: Lambda, captured: frozenset) -> Tuplix:
    match p:
        case SumFn(g, _) if g == f:
            return p
        case Gamma(g, other):
            return Gamma(g, unfold_data(other, f, lam))
        case Sum(x, _):
            p = rename_bound(p, captured)
            return Sum(p.var, _unfold(p.body, f, lam, captured))
    from .core import map_data
    if not children(p):
        return map_data(p, lambda t: unfold_data(t, f, lam))
    kids = tuple(_unfold(c, f, lam, captured) for c in children(p))
    shell = rebuild(p, kids)
    # operator nodes may carry their own data term (scalar factor, K start)
    return _unfold_own_data(shell, f, lam)


def _unfold_own_data(p: Tuplix, f: str, lam: Lambda) -> Tuplix:
    from .core import Kirch, Scalar
    match p:
        case Scalar(t, body):
            return Scalar(unfold_data(t, f, lam), body)
        case Kirch(t, body):
            return Kirch(unfold_data(t, f, lam), body)
    return p


def apply_fd(p: Tuplix) -> Tuplix:
    """Unfold uses of every function defined by a conjoined ``Gamma``."""
    kids = tuple(apply_fd(c) for c in children(p))
    p = rebuild(p, kids) if kids else p
    if not isinstance(p, Conj):
        return p
    factors = conj_factors(p)
    for i, fac in enumerate(factors):
        if not isinstance(fac, Gamma):
            continue
        captured = var_names(fac.lam)
        for j, other in enumerate(factors):
            if j == i:
                continue
            if isinstance(other, Gamma) and other.fn == fac.fn:
                continue
            factors[j] = _unfold(other, fac.fn, fac.lam, captured)
    return conj(*factors)


def _check_arities(p: Tuplix, arities: dict[str, int]):
    def visit_data(t: DataTerm):
        match t:
            case FnApp(name, args):
                if name in arities and len(args) != arities[name]:
                    raise ArityMismatch(
                        f"{name} takes {arities[name]} argument(s), got {len(args)}")
                for a in args:
                    visit_data(a)
            case Neg(a) | Inv(a):
                visit_data(a)
            case Add(a, b) | Mul(a, b):
                visit_data(a)
                visit_data(b)
            case Lambda(_, body):
                visit_data(body)
            case Apply(fn, args):
                if len(args) != fn.arity:
                    raise ArityMismatch(
                        f"lambda of arity {fn.arity} applied to {len(args)} argument(s)")
                visit_data(fn)
                for a in args:
                    visit_data(a)

    from .core import data_terms
    if isinstance(p, Gamma):
        arities = {**arities, p.fn: p.lam.arity}
    for t in data_terms(p):
        visit_data(t)
    for c in children(p):
        _check_arities(c, arities)


def _definitions(p: Tuplix) -> dict[str, int]:
    out: dict[str, int] = {}
    if isinstance(p, Gamma):
        out[p.fn] = p.lam.arity
    for c in children(p):
        for f, n in _definitions(c).items():
            if f in out and out[f] != n:
                raise ArityMismatch(f"{f} is defined with arities {out[f]} and {n}")
            out[f] = n
    return out


def sum_fn_elim(p: Tuplix) -> Tuplix:
    """Drop function summations whose definitions have been fully unfolded.

    ``sumf f . (Gamma(f, lam) & P)`` becomes ``P`` once ``f`` no longer
    occurs in ``P``; a summation over an unused function is dropped."""
    kids = tuple(sum_fn_elim(c) for c in children(p))
    p = rebuild(p, kids) if kids else p
    if not isinstance(p, SumFn):
        return p
    factors = conj_factors(p.body)
    rest = [fac for fac in factors
            if not (isinstance(fac, Gamma) and fac.fn == p.fn)]
    defs = len(factors) - len(rest)
    body = conj(*rest)
    if p.fn in free_fns(body) or defs > 1:
        return p
    return body


def eliminate_functions(p: Tuplix) -> Tuplix:
    """Check arities, unfold definitions and discharge let-bindings."""
    _check_arities(p, _definitions(p))
    return sum_fn_elim(apply_fd(p))
