"""Command-line front end.

Exit status is 0 on success, 1 when the mathematics says no (the error is
printed to stderr as JSON) and 2 when the command line itself is wrong.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Sequence

from .algebra import format_poly, parse_poly
from .belyi import FormPair, PermTriple, is_belyi, passport_of_forms, passport_of_triple
from .classify import (
    CoverFormula,
    beta_forms,
    bel2_catalog,
    d4_construct,
    family_infos,
    fiber_describe,
    type_check,
    verify_normal_form,
)
from .errors import DomainError
from .hjchains import WeightedChain, cf_eval, chain_group, supplement_delta
from .monodromy_numeric import TrackerConfig, monodromy_report
from .perms import parse_cycles
from .pullback import pullback_for_type
from .resolution import ade_germ, parse_germ, resolve_minimal


class UsageError(Exception):
    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details


def _parsing(fn, *args, what: str):
    """Run an input parser, turning its failure into a usage error."""
    try:
        return fn(*args)
    except DomainError as exc:
        raise UsageError(f"cannot parse {what}: {exc}", input=str(args[0]), **exc.details) from None
    except ValueError as exc:
        raise UsageError(f"cannot parse {what}: {exc}", input=str(args[0])) from None


def _int_list(text: str, what: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"{what} must be comma-separated integers", input=text) from None


def _forms(args) -> FormPair:
    h1 = _parsing(parse_poly, args.h1, what="--h1")
    h2 = _parsing(parse_poly, args.h2, what="--h2")
    return _parsing(lambda a, b: FormPair(a, b), h1, h2, what="the form pair")


def _triple(args) -> PermTriple:
    n = getattr(args, "n", None)
    if n is None:
        points = [int(x) for x in re.findall(r"\d+", f"{args.s0} {args.s1}")]
        n = max(points, default=None)
    s0 = _parsing(parse_cycles, args.s0, n, what="--s0")
    s1 = _parsing(parse_cycles, args.s1, n, what="--s1")
    return _parsing(PermTriple.from_pair, s0, s1, what="the permutation pair")


def _belyi_input(args):
    if args.h1 is not None and args.h2 is not None:
        return _forms(args)
    if args.s0 is not None and args.s1 is not None:
        return _triple(args)
    raise UsageError("give either --h1 and --h2 or --s0 and --s1")


def _passport(args):
    f = _belyi_input(args)
    return passport_of_forms(f) if isinstance(f, FormPair) else passport_of_triple(f)


# subcommands; each returns a JSON-ready object, or a string for DOT


def cmd_resolve(args):
    if (args.equation is None) == (args.type is None):
        raise UsageError("give exactly one of --equation and --type")
    germ = ade_germ(args.type) if args.type else _parsing(parse_germ, args.equation, what="--equation")
    graph, trails = resolve_minimal(germ)
    if args.dot:
        return graph.to_dot(trails)
    return graph.to_json(trails)


def cmd_hj(args):
    if args.hj_cmd == "cf":
        t = cf_eval(_int_list(args.chain, "chain"))
        out = {"m0": t.m0, "q": t.q}
        if t.unit_weights:
            out["unit_weights"] = True
        return out
    if args.hj_cmd == "chain":
        weights = _int_list(args.chain, "chain")
        marks = _int_list(args.mark, "--mark") if args.mark else []
        if any(not 1 <= m <= len(weights) for m in marks):
            raise UsageError("--mark positions are 1-based and must lie on the chain")
        g = chain_group(WeightedChain(tuple(weights), frozenset(m - 1 for m in marks)))
        out = {"order": g.order, "exponents": list(g.exponents)}
        if marks:
            out["marked_generates"] = all(g.generates(m - 1) for m in marks)
        return out
    s = supplement_delta(args.n, args.m)
    return {"delta": s.delta, "residual": s.residual.as_pair()}


def cmd_belyi(args):
    f = _belyi_input(args)
    if args.belyi_cmd == "check":
        if not isinstance(f, FormPair):
            raise UsageError("belyi check takes --h1 and --h2")
        ok = is_belyi(f)
        out = {"belyi": ok}
        if ok:
            out["passport"] = passport_of_forms(f).to_json()
        return out
    p = passport_of_forms(f) if isinstance(f, FormPair) else passport_of_triple(f)
    return p.to_json()


def cmd_type(args):
    return type_check(_passport(args), args.as_type).to_json()


def cmd_fiber(args):
    return fiber_describe(_belyi_input(args), args.type).to_json()


def cmd_catalog(args):
    params = {k: getattr(args, k) for k in ("n", "m", "m0", "m1", "m2", "j") if getattr(args, k) is not None}
    infos = family_infos(args.type)
    if not params:
        return {"type": infos[0].label, "families": [i.to_json() for i in infos]}
    return bel2_catalog(args.type, params, args.family).to_json()


def cmd_verify(args):
    formula = _parsing(CoverFormula.from_json, args.formula, what="--formula")
    _parsing(CoverFormula.parsed, formula, what="--formula")
    return verify_normal_form(formula).to_json()


def cmd_pullback(args):
    names = [s for s in args.branch.replace(" ", "").split(",") if s]
    return pullback_for_type(args.type, names, args.degree).to_json()


def cmd_monodromy(args):
    f = _forms(args)
    kw = {}
    if args.radius is not None:
        kw["radius"] = args.radius
    if args.seed_step is not None:
        kw["step"] = args.seed_step
    cfg = _parsing(lambda d: TrackerConfig(**d), kw, what="tracker settings")
    return monodromy_report(f, cfg).to_json()


def cmd_d4(args):
    return d4_construct(_forms(args), args.m1, args.m2).to_json()


def cmd_beta(args):
    formula = _parsing(CoverFormula.from_json, args.formula, what="--formula")
    center = tuple(_int_list(args.center, "--center")) if args.center else None
    if center is None:
        # the formula's own branch curve gives the center; (1, 1) when it cannot be recomputed
        try:
            center = verify_normal_form(formula).center_valuation
        except DomainError:
            center = (1, 1)
    b = beta_forms(formula, center)
    out = {"degree": b.degree, "center": list(center), "weights": list(b.weights),
           "passport": b.passport().to_json()}
    try:
        pair = b.form_pair()
        out["h1"] = format_poly(pair.h1)
        out["h2"] = format_poly(pair.h2)
    except DomainError:
        out["h1"] = out["h2"] = None
    return out


DOT_COMMANDS = {"resolve"}


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", default=d if suppress else True,
                     help="print JSON (default)")
    fmt.add_argument("--dot", action="store_true", default=d if suppress else False,
                     help="print a Graphviz graph where the command has one")
    p.add_argument("--quiet", action="store_true", default=d if suppress else False,
                   help="print nothing on success")


def _belyi_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--h1", help="binary form in x1, x2")
    p.add_argument("--h2", help="binary form in x1, x2")
    p.add_argument("--s0", help="permutation in cycle notation, e.g. '(1 2)'")
    p.add_argument("--s1", help="permutation in cycle notation")
    p.add_argument("--n", type=int, help="degree, if points are fixed by both permutations")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ade-belyi", description="Covers branched in ADE curve germs over Belyi pairs.")
    _add_globals(parser, False)
    sub = parser.add_subparsers(dest="cmd", parser_class=_Parser)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        _add_globals(p, True)
        return p

    p = add("resolve", "minimal normal-crossing resolution of a curve germ in u, v")
    p.add_argument("--equation")
    p.add_argument("--type", help="an ADE label such as E6")
    p.set_defaults(fn=cmd_resolve)

    p = add("hj", "Hirzebruch-Jung chains")
    hj = p.add_subparsers(dest="hj_cmd", parser_class=_Parser)
    q = hj.add_parser("cf", help="evaluate a continued fraction")
    q.add_argument("chain")
    _add_globals(q, True)
    q = hj.add_parser("chain", help="cyclic group of a chain")
    q.add_argument("chain")
    q.add_argument("--mark", help="1-based positions that must generate")
    _add_globals(q, True)
    q = hj.add_parser("delta", help="blow-downs on B1 for the degree-m cover of A_{n,n-1}")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--m", type=int, required=True)
    _add_globals(q, True)
    p.set_defaults(fn=cmd_hj)

    p = add("belyi", "passports and the Belyi test")
    bl = p.add_subparsers(dest="belyi_cmd", parser_class=_Parser)
    for name in ("passport", "check"):
        q = bl.add_parser(name)
        _belyi_args(q)
        _add_globals(q, True)
    p.set_defaults(fn=cmd_belyi)

    p = add("type", "test the typing clause of an ADE label")
    _belyi_args(p)
    p.add_argument("--as", dest="as_type", required=True)
    p.set_defaults(fn=cmd_type)

    p = add("fiber", "covers of a given ADE type over a Belyi pair")
    _belyi_args(p)
    p.add_argument("--type", required=True)
    p.set_defaults(fn=cmd_fiber)

    p = add("catalog", "explicit covers over z -> z^n")
    p.add_argument("--type", required=True)
    p.add_argument("--family", type=int, default=1)
    p.add_argument("--bel2", action="store_true", help="list the families (the default without parameters)")
    for name in ("n", "m", "m0", "m1", "m2", "j"):
        p.add_argument(f"--{name}", type=int)
    p.set_defaults(fn=cmd_catalog)

    p = add("verify", "recompute the branch curve of a cover formula")
    p.add_argument("--formula", required=True, help='JSON such as {"u": "z^3", "v": "z^2 + w^2"}')
    p.set_defaults(fn=cmd_verify)

    p = add("pullback", "cyclic cover of an ADE resolution branched on two trails")
    p.add_argument("--type", required=True)
    p.add_argument("--branch", required=True, help="two trails, e.g. B1,trail3")
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(fn=cmd_pullback)

    p = add("monodromy", "numerical monodromy of a Belyi pair")
    p.add_argument("--h1", required=True)
    p.add_argument("--h2", required=True)
    p.add_argument("--radius", type=float)
    p.add_argument("--seed-step", type=float)
    p.set_defaults(fn=cmd_monodromy)

    p = add("d4", "cover branched in a D4 germ from a Belyi pair")
    p.add_argument("--h1", required=True)
    p.add_argument("--h2", required=True)
    p.add_argument("--m1", type=int, default=1)
    p.add_argument("--m2", type=int, default=1)
    p.set_defaults(fn=cmd_d4)

    p = add("beta", "the Belyi pair a cover induces over the center")
    p.add_argument("--formula", required=True)
    p.add_argument("--center", help="orders of u, v along the center, e.g. 3,2")
    p.set_defaults(fn=cmd_beta)
    return parser


def _emit(stream, obj) -> None:
    stream.write(json.dumps(obj, separators=(",", ":"), ensure_ascii=False) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.cmd is None or (args.cmd == "hj" and args.hj_cmd is None) or \
                (args.cmd == "belyi" and args.belyi_cmd is None):
            raise UsageError("missing subcommand")
        args.dot = getattr(args, "dot", False)
        if args.dot and args.cmd not in DOT_COMMANDS:
            raise UsageError(f"--dot is not available for {args.cmd}")
        result = args.fn(args)
    except UsageError as exc:
        _emit(sys.stderr, {"error": "usage", "message": str(exc), **exc.details})
        return 2
    except DomainError as exc:
        _emit(sys.stderr, exc.to_json())
        return 1
    if not getattr(args, "quiet", False):
        if isinstance(result, str):
            sys.stdout.write(result if result.endswith("\n") else result + "\n")
        else:
            _emit(sys.stdout, result)
    return 0


if __name__ == "__main__":
    sys.exit(main())
