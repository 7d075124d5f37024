"""ASCII concrete syntax for data terms, tuplices and ``.tpx`` files.

Tuplix notation::

    eps  null  [t]  [t == s]  a(t)  +a(t)  -a(t)  P & Q  P + Q
    sum x, y . P          (scopes to the end of the expression)
    t * P                 (t a data primary: name, number, f(..) or (..))
    encap{a, b}(P)  clear{a}(P)  select{a, +a}(P)  K(P)  K{t}(P)
    zeta{g; a, b}(P)  flat(P)  signed{g}(P)
    gamma(f, lam x . t)   sumf f . P   def f = lam x . t in P

Files hold one statement per line (a line may continue after an operator
or inside brackets)::

    net N { unit g { in: a; out: b } unit h { in: b; out: c } }
    spec g = a(-1) & b(1)
    let P = encap{b}(g & h)
    option seed = 7
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    Alt, Attribute, Clear, Conj, Delta, DELTA, Encap, Entry, Eps, EPS, Gamma,
    Kirch, Scalar, Select, Sum, SumFn, Test, ToFlat, ToSigned, Tuplix, Zeta,
)
from .data import (
    Add, Apply, Const, DataTerm, FnApp, Inv, Lambda, Mul, Neg, Var, ZERO,
    format_data,
)

# -- printing ---------------------------------------------------------------

_P_SUM, _P_ALT, _P_CONJ, _P_SCALAR, _P_ATOM = 0.0, 1.0, 2.0, 3.0, 4.0


def _tprec(p: Tuplix) -> float:
    match p:
        case Sum() | SumFn():
            return _P_SUM
        case Alt():
            return _P_ALT
        case Conj():
            return _P_CONJ
        case Scalar():
            return _P_SCALAR
    return _P_ATOM


def _attrs_text(attrs) -> str:
    return ", ".join(sorted(str(a) for a in attrs))


def _data_primary(t: DataTerm) -> str:
    text = format_data(t)
    match t:
        case Var() | FnApp():
            return text
        case Const(v) if v >= 0 and v.denominator == 1:
            return text
    return f"({text})"


def _tfmt(p: Tuplix, ctx: float) -> str:
    text = _tfmt_bare(p)
    return f"({text})" if _tprec(p) < ctx else text


def _tfmt_bare(p: Tuplix) -> str:
    match p:
        case Eps():
            return "eps"
        case Delta():
            return "null"
        case Test(t):
            return f"[{format_data(t)}]"
        case Entry(a, t):
            return f"{a}({format_data(t)})"
        case Alt(a, b):
            return f"{_tfmt(a, _P_ALT)} + {_tfmt(b, _P_ALT + 0.5)}"
        case Conj(a, b):
            return f"{_tfmt(a, _P_CONJ)} & {_tfmt(b, _P_CONJ + 0.5)}"
        case Scalar(t, body):
            return f"{_data_primary(t)} * {_tfmt(body, _P_SCALAR)}"
        case Sum():
            names = []
            while isinstance(p, Sum):
                names.append(p.var)
                p = p.body
            return f"sum {', '.join(names)} . {_tfmt(p, _P_SUM)}"
        case SumFn(f, Conj(Gamma(g, lam), rest)) if g == f:
            return f"def {f} = {format_data(lam)} in {_tfmt(rest, _P_SUM)}"
        case SumFn(f, body):
            return f"sumf {f} . {_tfmt(body, _P_SUM)}"
        case Gamma(f, lam):
            return f"gamma({f}, {format_data(lam)})"
        case Encap(h, body):
            return f"encap{{{_attrs_text(h)}}}({_tfmt(body, _P_SUM)})"
        case Clear(h, body):
            return f"clear{{{_attrs_text(h)}}}({_tfmt(body, _P_SUM)})"
        case Select(h, body):
            return f"select{{{_attrs_text(h)}}}({_tfmt(body, _P_SUM)})"
        case Kirch(t, body):
            if t == ZERO:
                return f"K({_tfmt(body, _P_SUM)})"
            return f"K{{{format_data(t)}}}({_tfmt(body, _P_SUM)})"
        case Zeta(g, h, body, _, _):
            return f"zeta{{{g}; {_attrs_text(h)}}}({_tfmt(body, _P_SUM)})"
        case ToFlat(body):
            return f"flat({_tfmt(body, _P_SUM)})"
        case ToSigned(g, body, _, _):
            return f"signed{{{g}}}({_tfmt(body, _P_SUM)})"
    raise TypeError(f"not a tuplix: {p!r}")


def format_tuplix(p: Tuplix) -> str:
    return _tfmt(p, _P_SUM)


# -- tokens -----------------------------------------------------------------


class ParseError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str     # "num", "id", "op", "nl", "eof"
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<op>==|[-+*/^&()\[\]{},;.=:])
""", re.VERBOSE)

_CONTINUES = {"==", "-", "+", "*", "/", "^", "&", ",", ";", ".", "=", ":"}
_OPEN, _CLOSE = "([{", ")]}"

STATEMENTS = {"net", "spec", "let", "option"}
KEYWORDS = {
    "eps", "null", "sum", "sumf", "def", "in", "lam", "encap", "clear",
    "select", "K", "zeta", "flat", "signed", "gamma",
}


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    depth = 0
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        s = m.group()
        pos = m.end()
        if kind == "nl":
            if depth == 0 and tokens and tokens[-1].kind != "nl" \
                    and not (tokens[-1].kind == "op" and tokens[-1].text in _CONTINUES):
                tokens.append(Token("nl", "\n", line, col))
            line, line_start = line + 1, pos
            continue
        if kind in ("ws", "comment"):
            continue
        if kind == "op":
            if s in _OPEN:
                depth += 1
            elif s in _CLOSE:
                depth = max(0, depth - 1)
        if kind == "id" and s in STATEMENTS and tokens and tokens[-1].line != line:
            # a statement keyword opening a line ends whatever came before,
            # so an unclosed bracket cannot swallow the rest of the file
            depth = 0
            if tokens[-1].kind != "nl":
                tokens.append(Token("nl", "\n", line, col))
        tokens.append(Token(kind, s, line, col))
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# -- parser -----------------------------------------------------------------


class Parser:
    def __init__(self, tokens: list[Token], env: dict | None = None,
                 interfaces: dict | None = None):
        self.toks = tokens
        self.i = 0
        self.env = env if env is not None else {}
        self.interfaces = interfaces if interfaces is not None else {}

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else \
            "end of line" if tok.kind == "nl" else repr(tok.text)
        raise ParseError(f"{msg}, found {found}", tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "id")

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}")
        tok = self.tok
        self.i += 1
        return tok

    def ident(self, what: str = "identifier") -> str:
        if self.tok.kind != "id" or self.tok.text in KEYWORDS:
            self.error(f"expected {what}")
        name = self.tok.text
        self.i += 1
        return name

    # data terms
    def data(self) -> DataTerm:
        left = self.data_term()
        while True:
            if self.accept("+"):
                left = Add(left, self.data_term())
            elif self.accept("-"):
                left = Add(left, Neg(self.data_term()))
            else:
                return left

    def data_term(self) -> DataTerm:
        if self.accept("-"):
            return Neg(self.data_term())
        left = self.data_factor()
        while True:
            if self.accept("*"):
                left = Mul(left, self.data_factor())
            elif self.accept("/"):
                right = Inv(self.data_factor())
                if isinstance(left, Const) and isinstance(right.arg, Const) \
                        and right.arg.value != 0:
                    left = Const(left.value / right.arg.value)
                else:
                    left = Mul(left, right)
            else:
                return left

    def data_factor(self) -> DataTerm:
        if self.accept("-"):
            return Neg(self.data_factor())
        base = self.data_atom()
        while self.accept("^"):
            neg = self.accept("-")
            if self.tok.kind != "num" or "." in self.tok.text:
                self.error("expected an integer exponent")
            n = int(self.tok.text)
            self.i += 1
            if n == 0:
                self.error("exponent 0 is not supported", self.peek(-1))
            power = base
            for _ in range(n - 1):
                power = Mul(power, base)
            base = Inv(power) if neg else power
        return base

    def data_atom(self) -> DataTerm:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return Const(Fraction(tok.text))
        if self.at("("):
            self.i += 1
            if self.at("lam"):
                lam = self.lam()
                self.expect(")")
                self.expect("(")
                return Apply(lam, self.data_args())
            inner = self.data()
            self.expect(")")
            return inner
        if tok.kind == "id" and tok.text not in KEYWORDS:
            self.i += 1
            if self.accept("("):
                return FnApp(tok.text, self.data_args())
            return Var(tok.text)
        self.error("expected a data term")

    def data_args(self) -> tuple[DataTerm, ...]:
        args = []
        if not self.at(")"):
            args.append(self.data())
            while self.accept(","):
                args.append(self.data())
        self.expect(")")
        return tuple(args)

    def lam(self) -> Lambda:
        self.expect("lam")
        params = [self.ident("parameter name")]
        while self.accept(","):
            params.append(self.ident("parameter name"))
        self.expect(".")
        return Lambda(tuple(params), self.data())

    # tuplices
    def tuplix(self) -> Tuplix:
        left = self.conj()
        while self.accept("+"):
            left = Alt(left, self.conj())
        return left

    def conj(self) -> Tuplix:
        left = self.unary()
        while self.accept("&"):
            left = Conj(left, self.unary())
        return left

    def unary(self) -> Tuplix:
        if self.accept("sum"):
            names = [self.ident("variable")]
            while self.accept(","):
                names.append(self.ident("variable"))
            self.expect(".")
            body = self.tuplix()
            for n in reversed(names):
                body = Sum(n, body)
            return body
        if self.accept("sumf"):
            f = self.ident("function name")
            self.expect(".")
            return SumFn(f, self.tuplix())
        if self.accept("def"):
            f = self.ident("function name")
            self.expect("=")
            lam = self.lam()
            self.expect("in")
            return SumFn(f, Conj(Gamma(f, lam), self.tuplix()))
        scalar = self.try_scalar()
        if scalar is not None:
            return scalar
        return self.primary()

    def try_scalar(self) -> Tuplix | None:
        start = self.i
        tok = self.tok
        if not (tok.kind == "num" or self.at("(")
                or (tok.kind == "id" and tok.text not in KEYWORDS)):
            return None
        try:
            factor = self.data_atom()
        except ParseError:
            self.i = start
            return None
        if not self.accept("*"):
            self.i = start
            return None
        return Scalar(factor, self.unary())

    def attr_list(self, close: str = "}") -> frozenset[Attribute]:
        out = []
        while not self.at(close):
            sign = ""
            if self.at("+") or self.at("-"):
                sign = self.tok.text
                self.i += 1
            out.append(Attribute(self.ident("attribute"), sign))
            if not self.accept(","):
                break
        return frozenset(out)

    def braced_attrs(self) -> frozenset[Attribute]:
        self.expect("{")
        attrs = self.attr_list()
        self.expect("}")
        return attrs

    def paren_tuplix(self) -> Tuplix:
        self.expect("(")
        body = self.tuplix()
        self.expect(")")
        return body

    def primary(self) -> Tuplix:
        tok = self.tok
        if self.accept("eps"):
            return EPS
        if self.accept("null"):
            return DELTA
        if self.accept("["):
            t = self.data()
            if self.accept("=="):
                t = Add(t, Neg(self.data()))
            self.expect("]")
            return Test(t)
        if self.at("+") or self.at("-"):
            sign = tok.text
            self.i += 1
            name = self.ident("attribute")
            self.expect("(")
            t = self.data()
            self.expect(")")
            return Entry(Attribute(name, sign), t)
        if self.accept("("):
            body = self.tuplix()
            self.expect(")")
            return body
        if self.accept("encap"):
            return Encap(self.braced_attrs(), self.paren_tuplix())
        if self.accept("clear"):
            return Clear(self.braced_attrs(), self.paren_tuplix())
        if self.accept("select"):
            return Select(self.braced_attrs(), self.paren_tuplix())
        if self.accept("K"):
            start = ZERO
            if self.accept("{"):
                start = self.data()
                self.expect("}")
            return Kirch(start, self.paren_tuplix())
        if self.accept("zeta"):
            self.expect("{")
            g = self.ident("unit name")
            attrs: frozenset = frozenset()
            if self.accept(";"):
                attrs = self.attr_list()
            self.expect("}")
            ins, outs = self.interfaces.get(g, (None, None))
            return Zeta(g, attrs, self.paren_tuplix(), ins, outs)
        if self.accept("flat"):
            return ToFlat(self.paren_tuplix())
        if self.accept("signed"):
            self.expect("{")
            g = self.ident("unit name")
            self.expect("}")
            ins, outs = self.interfaces.get(g, (None, None))
            return ToSigned(g, self.paren_tuplix(), ins, outs)
        if self.accept("gamma"):
            self.expect("(")
            f = self.ident("function name")
            self.expect(",")
            lam = self.lam()
            self.expect(")")
            return Gamma(f, lam)
        if tok.kind == "id" and tok.text not in KEYWORDS:
            self.i += 1
            if self.accept("("):
                t = self.data()
                self.expect(")")
                return Entry(Attribute(tok.text), t)
            if tok.text in self.env:
                return self.env[tok.text]
            raise ParseError(f"unknown name {tok.text!r}", tok.line, tok.col)
        self.error("expected a tuplix")

    def end_of_statement(self):
        if self.tok.kind not in ("nl", "eof"):
            self.error("expected end of statement")
        if self.tok.kind == "nl":
            self.i += 1


def parse_data(text: str) -> DataTerm:
    p = Parser(tokenize(text))
    t = p.data()
    _expect_end(p)
    return t


def parse_tuplix(text: str, env: dict | None = None,
                 interfaces: dict | None = None) -> Tuplix:
    """Parse a single tuplix.  ``env`` maps names to previously defined
    tuplices; ``interfaces`` maps unit names to ``(ins, outs)``."""
    p = Parser(tokenize(text), env, interfaces)
    t = p.tuplix()
    _expect_end(p)
    return t


def _expect_end(p: Parser):
    while p.tok.kind == "nl":
        p.i += 1
    if p.tok.kind != "eof":
        p.error("unexpected trailing input")


# -- workspaces ---------------------------------------------------------------


@dataclass
class Workspace:
    """Contents of a ``.tpx`` file."""

    networks: dict = field(default_factory=dict)   # name -> FTN
    specs: dict = field(default_factory=dict)      # unit -> UnitSpec
    terms: dict = field(default_factory=dict)      # name -> Tuplix
    options: dict = field(default_factory=dict)
    errors: list = field(default_factory=list)     # ParseError

    def interfaces(self) -> dict:
        out = {}
        for net in self.networks.values():
            for g in net.units:
                out[g] = (net.ins[g], net.outs[g])
        return out

    def network_of(self, unit: str):
        for net in self.networks.values():
            if unit in net.units:
                return net
        return None

    def lookup(self, name: str) -> Tuplix:
        if name in self.terms:
            return self.terms[name]
        if name in self.specs:
            return self.specs[name].body
        raise KeyError(name)

    @property
    def seed(self) -> int | None:
        return self.options.get("seed")


def parse_workspace(text: str) -> Workspace:
    """Parse a ``.tpx`` file, collecting every statement-level error."""
    from .ftn import FTN, UnitSpec
    ws = Workspace()
    try:
        tokens = tokenize(text)
    except ParseError as e:
        ws.errors.append(e)
        return ws
    env: dict = {}
    p = Parser(tokens, env, {})
    while p.tok.kind != "eof":
        if p.tok.kind == "nl":
            p.i += 1
            continue
        start = p.tok
        try:
            if p.accept("net"):
                name = p.ident("network name")
                units = _net_body(p)
                if name in ws.networks:
                    raise ParseError(f"network {name!r} declared twice", start.line, start.col)
                net = FTN.build(units, name=name)
                ws.networks[name] = net
                p.interfaces.update(ws.interfaces())
            elif p.accept("spec"):
                unit_tok = p.tok
                unit = p.ident("unit name")
                p.expect("=")
                body = p.tuplix()
                if ws.network_of(unit) is None:
                    raise ParseError(f"spec for undeclared unit {unit!r}",
                                     unit_tok.line, unit_tok.col)
                if unit in ws.specs:
                    raise ParseError(f"unit {unit!r} specified twice",
                                     unit_tok.line, unit_tok.col)
                ws.specs[unit] = UnitSpec(unit, body)
                env[unit] = body
            elif p.accept("let"):
                name_tok = p.tok
                name = p.ident("name")
                p.expect("=")
                body = p.tuplix()
                if name in ws.terms:
                    raise ParseError(f"name {name!r} bound twice", name_tok.line, name_tok.col)
                ws.terms[name] = body
                env[name] = body
            elif p.accept("option"):
                key = p.ident("option name")
                p.expect("=")
                if p.tok.kind == "num" and "." not in p.tok.text:
                    value = int(p.tok.text)
                elif p.tok.kind == "id":
                    value = p.tok.text
                else:
                    p.error("expected an option value")
                p.i += 1
                ws.options[key] = value
            else:
                p.error("expected 'net', 'spec', 'let' or 'option'")
            p.end_of_statement()
        except ParseError as e:
            ws.errors.append(e)
            while p.tok.kind not in ("nl", "eof"):
                p.i += 1
    return ws


def _net_body(p: Parser) -> dict:
    p.expect("{")
    units: dict = {}
    while p.accept("unit"):
        tok = p.tok
        g = p.ident("unit name")
        if g in units:
            raise ParseError(f"unit {g!r} declared twice", tok.line, tok.col)
        ins: list = []
        outs: list = []
        p.expect("{")
        while not p.at("}"):
            which = p.tok.text
            if which not in ("in", "out"):
                p.error("expected 'in' or 'out'")
            p.i += 1
            p.expect(":")
            names = []
            while p.tok.kind == "id":
                names.append(p.ident("attribute"))
                if not p.accept(","):
                    break
            (ins if which == "in" else outs).extend(names)
            if not p.accept(";"):
                break
        p.expect("}")
        units[g] = (ins, outs)
    p.expect("}")
    return units
