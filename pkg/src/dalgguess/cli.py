"""Command-line front end.

    dalgguess guess-fun --builtin labelled_rooted_trees --n 9 --deg-poly 1 --all-poly-deg
    dalgguess guess-seq --builtin fib_pow2 --n 15 --deg-ade 5 --modulus 101
    dalgguess guess-modular --builtin fib_pow2 --n 15 --kind sequence --deg-ade 5 --primes 101,103
    dalgguess terms --builtin odd_indexed_primes --n 5
    dalgguess verify --equation eq.json --builtin fib_pow2 --n 30

Exit status: 0 on success, 1 when nothing is found (or verification fails),
2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import List, Optional

from .errors import DalgError, InsufficientData, SupportMismatch
from .exact import format_rational
from .guess import GuessConfig, guess_function, guess_function_fixed_order, guess_sequence, verify_candidate
from .modular import check_prime, guess_modular, multi_prime_reconstruct, support_refit
from .polys import dump_json, poly_from_json
from .sources import TermList, builtin_terms, emit_bfile, emit_terms_file, parse_bfile, parse_terms_file

log = logging.getLogger("dalgguess")


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _add_source(p):
    g = p.add_argument_group("input (exactly one)")
    g.add_argument("--builtin", metavar="NAME", help="built-in sequence, e.g. catalan or catalan_multisection:4")
    g.add_argument("--file", metavar="PATH", help="terms file, one rational per line or JSON; '-' reads stdin")
    g.add_argument("--bfile", metavar="PATH", help="OEIS b-file")
    p.add_argument("--n", type=int, help="number of terms to use")


def _add_guess_flags(p, fun: bool):
    p.add_argument("--deg-ade", type=int, default=2, help="degree bound k of the equation (default 2)")
    if fun:
        p.add_argument("--deg-poly", type=int, default=2, help="degree bound d of the polynomial coefficients (default 2)")
        p.add_argument("--all-poly-deg", action="store_true", help="try all coefficient-degree tuples at the critical index")
        p.add_argument("--order", type=int, help="search at this fixed order only")
    else:
        p.add_argument("--no-affine", action="store_true", help="leave the constant monomial out of the ansatz")
    p.add_argument("--start-from-ord", type=int, default=0, help="starting order r_min (default 0)")
    p.add_argument("--offset", type=int, default=0, help="drop this many leading terms")


def _add_format(p, choices=("text", "json")):
    p.add_argument("--format", choices=choices, default="text")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="dalgguess", description="Guess algebraic differential and difference equations from terms.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("guess-fun", help="guess an ADE for the generating function")
    _add_source(p)
    _add_guess_flags(p, fun=True)
    p.add_argument("--modulus", type=int, help="work over GF(p)")
    _add_format(p)

    p = sub.add_parser("guess-seq", help="guess a difference equation for the sequence")
    _add_source(p)
    _add_guess_flags(p, fun=False)
    p.add_argument("--modulus", type=int, help="work over GF(p)")
    _add_format(p)

    p = sub.add_parser("guess-modular", help="guess modulo several primes and lift to Q")
    _add_source(p)
    p.add_argument("--kind", choices=("function", "sequence"), default="sequence")
    p.add_argument("--deg-ade", type=int, default=2)
    p.add_argument("--deg-poly", type=int, default=2)
    p.add_argument("--all-poly-deg", action="store_true")
    p.add_argument("--order", type=int)
    p.add_argument("--start-from-ord", type=int, default=0)
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--no-affine", action="store_true")
    p.add_argument("--primes", required=True, help="comma-separated primes")
    p.add_argument("--refit", type=int, metavar="N", help="refit over Q on the common support using the first N terms")
    _add_format(p)

    p = sub.add_parser("terms", help="print terms of a source")
    _add_source(p)
    _add_format(p, ("text", "lines", "bfile", "json"))

    p = sub.add_parser("verify", help="check an equation file against data")
    _add_source(p)
    p.add_argument("--equation", required=True, metavar="PATH", help="equation JSON as emitted by guess-* --format json")
    _add_format(p)
    return ap


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def load_source(args) -> TermList:
    given = [x for x in (args.builtin, args.file, args.bfile) if x is not None]
    if len(given) != 1:
        raise _Usage("give exactly one of --builtin, --file, --bfile")
    if args.n is not None and args.n < 1:
        raise _Usage("--n must be positive")
    if args.builtin is not None:
        if args.n is None:
            raise _Usage("--builtin needs --n")
        return builtin_terms(args.builtin, args.n)
    try:
        text = _read(args.file if args.file is not None else args.bfile)
    except OSError as exc:
        raise _Usage(f"cannot read input: {exc.strerror}") from None
    tl = parse_terms_file(text) if args.file is not None else parse_bfile(text)
    if args.n is not None:
        if args.n > len(tl):
            raise InsufficientData(f"asked for {args.n} terms, input has {len(tl)}", min_terms=args.n)
        tl = tl.head(args.n)
    return tl


def _config(args, kind) -> GuessConfig:
    return GuessConfig(
        kind=kind,
        k=args.deg_ade,
        d=getattr(args, "deg_poly", 0) if kind == "function" else 0,
        r_min=args.start_from_ord,
        all_poly_deg=getattr(args, "all_poly_deg", False),
        offset=args.offset,
        affine=not getattr(args, "no_affine", False),
    )


def _emit_result(res, fmt, out) -> int:
    if res is None:
        out.append("null" if fmt == "json" else "None")
        return 1
    if fmt == "json":
        out.append(dump_json(res.to_json()))
    else:
        out.extend(p.render() for p in res.basis)
    return 0


def _cmd_guess(args, out) -> int:
    kind = "function" if args.command == "guess-fun" else "sequence"
    cfg = _config(args, kind)
    if args.modulus is not None:
        check_prime(args.modulus)
    data = load_source(args)
    if kind == "sequence":
        res = guess_sequence(data, cfg, modulus=args.modulus)
    elif args.order is not None:
        res = guess_function_fixed_order(data, cfg, args.order, modulus=args.modulus)
    else:
        res = guess_function(data, cfg, modulus=args.modulus)
    return _emit_result(res, args.format, out)


def _cmd_modular(args, out) -> int:
    try:
        primes = [int(x) for x in args.primes.split(",") if x.strip()]
    except ValueError:
        raise _Usage(f"bad prime list {args.primes!r}") from None
    if not primes:
        raise _Usage("--primes is empty")
    for p in primes:
        check_prime(p)
    cfg = _config(args, args.kind)
    data = load_source(args)
    reports = [guess_modular(data, p, cfg, args.order) for p in primes]
    if args.refit is not None:
        supports = {r.support for r in reports}
        if len(supports) != 1 or any(r.result is None for r in reports):
            raise SupportMismatch("supports differ between primes; cannot refit", {r.prime: r.support for r in reports})
        res = support_refit(data.head(args.refit) if isinstance(data, TermList) else data[: args.refit], reports[0].support, args.kind, offset=args.offset)
        return _emit_result(res, args.format, out)
    if len(primes) == 1:
        return _emit_result(reports[0].result, args.format, out)
    poly = multi_prime_reconstruct(data, primes, cfg, args.order, reports=reports)
    out.append(poly.dumps() if args.format == "json" else poly.render())
    return 0


def _cmd_terms(args, out) -> int:
    tl = load_source(args)
    if args.format == "bfile":
        out.append(emit_bfile(tl).rstrip("\n"))
    elif args.format == "json":
        out.append(emit_terms_file(tl, structured=True).rstrip("\n"))
    elif args.format == "lines":
        out.append(emit_terms_file(tl).rstrip("\n"))
    else:
        out.append(" ".join(format_rational(t) for t in tl.terms))
    return 0


def _equations(doc) -> list:
    if isinstance(doc, list):
        return [poly_from_json(d) for d in doc]
    if isinstance(doc, dict) and "basis" in doc:
        return [poly_from_json(d) for d in doc["basis"]]
    return [poly_from_json(doc)]


def _cmd_verify(args, out) -> int:
    try:
        doc = json.loads(_read(args.equation))
    except OSError as exc:
        raise _Usage(f"cannot read equation: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise _Usage(f"equation file is not JSON: {exc.msg} at line {exc.lineno}") from None
    polys = _equations(doc)
    data = load_source(args)
    status = 0
    reports = []
    for p in polys:
        rep = verify_candidate(p, data)
        reports.append({"holds": rep.holds, "rows_checked": rep.rows_checked, "first_failure": rep.first_failure})
        if not rep.holds:
            status = 1
        if args.format == "text":
            if rep.holds:
                out.append(f"holds on {rep.rows_checked} rows: {p.render()}")
            else:
                out.append(f"fails at row {rep.first_failure}: {p.render()}")
    if args.format == "json":
        out.append(dump_json(reports))
    return status


_COMMANDS = {
    "guess-fun": _cmd_guess,
    "guess-seq": _cmd_guess,
    "guess-modular": _cmd_modular,
    "terms": _cmd_terms,
    "verify": _cmd_verify,
}


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    out: List[str] = []
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
        status = _COMMANDS[args.command](args, out)
    except _Usage as exc:
        print(f"dalgguess: {exc}", file=stderr)
        return 2
    except DalgError as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"dalgguess: {type(exc).__name__}: {msg}", file=stderr)
        return 2
    if out:
        print("\n".join(out), file=stdout)
    return status


def main() -> None:
    sys.exit(run())
