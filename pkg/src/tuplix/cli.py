"""Command line front end.

Exit codes: 0 success, 1 error (bad input, unknown name, engine error),
2 the result is null, 3 a negative answer (``eq`` found a difference,
``check-net`` found violations), 4 ``eq`` could not decide.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .basic import BasicForm, normalize
from .core import Kirch, Tuplix
from .data import ZERO
from .equality import Verdict, tuplix_eq
from .errors import TuplixError
from .ftn import (
    SpecError, classify, compose_encapsulate, focus, self_channels, validate_ftn,
)
from .meadow import DEFAULT_SEED
from .syntax import ParseError, Workspace, parse_tuplix, parse_workspace

EXIT_OK, EXIT_ERROR, EXIT_NULL, EXIT_NO, EXIT_UNKNOWN = 0, 1, 2, 3, 4


class CommandError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse would exit with 2, which here means a null result
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _load(path: str) -> Workspace:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as e:
        raise CommandError(f"cannot read {path}: {e.strerror}") from None
    ws = parse_workspace(text)
    if ws.errors:
        raise CommandError("\n".join(f"{path}:{e}" for e in ws.errors))
    return ws


def _seed(ws: Workspace) -> int:
    env = os.environ.get("TUPLIX_SEED")
    if env:
        try:
            return int(env, 0)
        except ValueError:
            raise CommandError(f"TUPLIX_SEED is not an integer: {env!r}") from None
    seed = ws.seed
    return DEFAULT_SEED if seed is None else int(seed)


def _term(ws: Workspace, ref: str) -> Tuplix:
    """A name bound in the file, or a term written in the file's syntax."""
    try:
        return ws.lookup(ref)
    except KeyError:
        pass
    env = dict(ws.terms)
    env.update({u: s.body for u, s in ws.specs.items()})
    try:
        return parse_tuplix(ref, env, ws.interfaces())
    except ParseError as e:
        raise CommandError(f"cannot resolve {ref!r}: {e}") from None


def _net(ws: Workspace, name: str | None):
    if name is None:
        if len(ws.networks) != 1:
            raise CommandError("the file declares %d networks; name one" % len(ws.networks))
        return next(iter(ws.networks.values()))
    if name not in ws.networks:
        raise CommandError(f"unknown network {name!r}")
    return ws.networks[name]


def _emit_form(form: BasicForm, args, out) -> int:
    if args.json:
        out.write(json.dumps(form.to_json(), sort_keys=True) + "\n")
    else:
        out.write(f"{form}\n")
    if form.is_null:
        sys.stderr.write("nullified\n")
        return EXIT_NULL
    return EXIT_OK


def _flush_trace(trace, args):
    if args.trace and trace:
        for line in trace:
            sys.stderr.write(f"trace: {line}\n")


def cmd_normalize(args, out) -> int:
    ws = _load(args.file)
    trace: list = []
    mode = None if args.mode == "none" else args.mode
    form = normalize(_term(ws, args.term), interfaces=ws.interfaces(),
                     eliminate=mode, trace=trace)
    _flush_trace(trace, args)
    return _emit_form(form, args, out)


def cmd_flux(args, out) -> int:
    ws = _load(args.file)
    trace: list = []
    form = normalize(Kirch(ZERO, _term(ws, args.term)), interfaces=ws.interfaces(),
                     eliminate="flux", trace=trace)
    _flush_trace(trace, args)
    return _emit_form(form, args, out)


def cmd_eq(args, out) -> int:
    ws = _load(args.file)
    result = tuplix_eq(_term(ws, args.left), _term(ws, args.right),
                       seed=_seed(ws), interfaces=ws.interfaces())
    if args.json:
        out.write(json.dumps({"verdict": str(result.verdict),
                              "witness": result.witness}, sort_keys=True) + "\n")
    else:
        out.write(f"{result}\n")
    return {Verdict.EQUAL: EXIT_OK, Verdict.NOT_EQUAL: EXIT_NO,
            Verdict.UNKNOWN: EXIT_UNKNOWN}[result.verdict]


def _braced(items) -> str:
    return "{" + ",".join(sorted(map(str, items))) + "}"


def cmd_check_net(args, out) -> int:
    ws = _load(args.file)
    net = _net(ws, args.net)
    violations = validate_ftn(net)
    from .ftn import check_unit_spec
    for unit, spec in sorted(ws.specs.items()):
        if unit in net.units:
            violations += check_unit_spec(net, spec)
    internal = sorted(str(a) for a in net.attrs if str(classify(net, a)) == "internal")
    external = sorted(str(a) for a in net.attrs if str(classify(net, a)) == "external")
    loops = [f"{a} at {g}" for g, a in self_channels(net)]
    if args.json:
        out.write(json.dumps({
            "network": net.name, "ok": not violations,
            "violations": [v.message for v in violations],
            "internal": internal, "external": external, "self_channels": loops,
        }, sort_keys=True) + "\n")
    else:
        status = "ok" if not violations else "violations: " + "; ".join(
            v.message for v in violations)
        line = f"{status}; internal: {_braced(internal)}; external: {_braced(external)}"
        if loops:
            line += f"; self-channels: {', '.join(loops)}"
        out.write(line + "\n")
    return EXIT_OK if not violations else EXIT_NO


def _specs_for(ws: Workspace, net, units):
    if not units:
        units = [u for u in net.units if u in ws.specs]
    missing = [u for u in units if u not in ws.specs]
    if missing:
        raise CommandError(f"no spec for unit(s): {', '.join(missing)}")
    return [ws.specs[u] for u in units]


def _hide(args):
    if args.hide is None:
        return None
    return [a.strip() for a in args.hide.split(",") if a.strip()]


def cmd_encapsulate(args, out) -> int:
    ws = _load(args.file)
    net = _net(ws, args.net)
    trace: list = []
    form = compose_encapsulate(net, _specs_for(ws, net, args.units), _hide(args),
                               eliminate=args.mode, trace=trace)
    _flush_trace(trace, args)
    return _emit_form(form, args, out)


def cmd_focus(args, out) -> int:
    ws = _load(args.file)
    net = _net(ws, args.net)
    trace: list = []
    form = focus(net, _specs_for(ws, net, None), args.unit, _hide(args), trace=trace)
    _flush_trace(trace, args)
    return _emit_form(form, args, out)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--trace", action="store_true",
                        help="print normalization steps to stderr")
    parser = _Parser(prog="tuplix", description=(
        "Normalize and compare tuplix terms over cancellation meadows."))
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", parents=[common], help="print the basic form of a term")
    p.add_argument("file")
    p.add_argument("term", help="a name bound in FILE or a term expression")
    p.add_argument("--mode", choices=["all", "flux", "none"], default="all",
                   help="which summations to eliminate (default: all)")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("eq", parents=[common], help="decide equality of two terms")
    p.add_argument("file")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_eq)

    p = sub.add_parser("check-net", parents=[common], help="validate a network")
    p.add_argument("file")
    p.add_argument("net", nargs="?")
    p.set_defaults(func=cmd_check_net)

    p = sub.add_parser("encapsulate", parents=[common],
                       help="compose unit specs and hide internal channels")
    p.add_argument("file")
    p.add_argument("net")
    p.add_argument("units", nargs="*", help="units to compose (default: all with specs)")
    p.add_argument("--hide", help="comma separated attributes to encapsulate")
    p.add_argument("--mode", choices=["all", "flux"], default="all")
    p.set_defaults(func=cmd_encapsulate)

    p = sub.add_parser("focus", parents=[common],
                       help="show one unit's transactions within the network")
    p.add_argument("file")
    p.add_argument("net")
    p.add_argument("unit")
    p.add_argument("--hide", help="comma separated attributes to encapsulate")
    p.set_defaults(func=cmd_focus)

    p = sub.add_parser("flux", parents=[common], help="apply the Kirchhoff operator")
    p.add_argument("file")
    p.add_argument("term")
    p.set_defaults(func=cmd_flux)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except CommandError as e:
        sys.stderr.write(f"error: {e}\n")
    except SpecError as e:
        sys.stderr.write(f"error: {e}\n")
    except (TuplixError, ParseError) as e:
        sys.stderr.write(f"error: {type(e).__name__}: {e}\n")
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
