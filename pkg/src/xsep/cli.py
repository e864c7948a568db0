"""Command-line interface: ``xsep <verb> [input] [flags]``.

Exit codes: 0 success, 1 unparsable input or arguments, 2 input is not a
positive semidefinite state, 3 no separable decomposition is available.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import core
from .criteria import SEPARABLE, classify, evaluate_witness, matched_witness
from .curves import CURVE_HEADERS, CURVE_ROWS, FAMILIES
from .errors import InvalidProfile, NegativeDiagonal, NotAState, NotDecomposable, ParseError
from .oracle import RandomProfile, decomposition_error, random_states, verify_decomposition
from .serialization import (
    decomposition_to_json,
    load_json_text,
    parse_z,
    xstate_from_json,
    xstate_to_json,
)

EXIT_OK, EXIT_PARSE, EXIT_NOT_STATE, EXIT_NOT_DECOMPOSABLE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    """Argument errors exit with the parse-error status instead of argparse's 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _read_input(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    if source.lstrip().startswith("{"):
        return source
    try:
        return Path(source).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {source!r}: {exc.strerror}") from None


def _load_state(args) -> core.XState:
    return xstate_from_json(load_json_text(_read_input(args.input)), tol=args.tol)


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def cmd_validate(args) -> int:
    s = _load_state(args)
    positive = core.is_positive(s)
    out = {"state": xstate_to_json(s), "positive": positive}
    if positive:
        out["ppt"] = core.is_ppt(s)
        out["invariants"] = core.invariants(s).to_json()
    _emit(out)
    return EXIT_OK if positive else EXIT_NOT_STATE


def cmd_classify(args) -> int:
    s = _load_state(args)
    verdict = classify(s)
    _emit(verdict.to_json())
    return EXIT_NOT_STATE if verdict.tag == "NotAState" else EXIT_OK


def cmd_decompose(args) -> int:
    s = _load_state(args)
    if not core.is_positive(s):
        raise NotAState("input is not positive semidefinite")
    verdict = classify(s)
    if verdict.tag != SEPARABLE or verdict.certificate is None:
        raise NotDecomposable(f"no certificate: classifier returned {verdict.tag}")
    d = verdict.certificate
    out = {
        "certificate": decomposition_to_json(d),
        "criterion": verdict.criterion,
        "verified": verify_decomposition(s, d),
        "max_err": decomposition_error(s, d),
        "terms": len(d),
    }
    if not s.is_diagonal() and core.rank(s) == 6:
        from .length import optimal_decompose_rank6

        out["plan"] = optimal_decompose_rank6(s)[1].to_json()
    _emit(out)
    return EXIT_OK


def _fmt(v: float) -> str:
    return "%.17g" % v


def cmd_curve(args) -> int:
    if args.samples < 8:
        raise ParseError("--samples must be at least 8 for curves")
    rows = CURVE_ROWS[args.family](args.samples, args.tol)
    header = CURVE_HEADERS[args.family]
    if args.format == "json":
        for row in rows:
            _emit(dict(zip(header, row)))
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return EXIT_OK


def cmd_witness(args) -> int:
    s = _load_state(args)
    if not core.is_positive(s):
        raise NotAState("input is not positive semidefinite")
    z = matched_witness(s) if args.z == "auto" else parse_z(args.z)
    _emit(evaluate_witness(s, z).to_json())
    return EXIT_OK


def cmd_random(args) -> int:
    profile = RandomProfile.parse(args.profile, seed=args.seed, count=args.count)
    for s in random_states(profile):
        _emit(xstate_to_json(s))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="comparison tolerance (default 1e-9)")
    common.add_argument("--format", choices=("json", "csv"), default=None)

    parser = _Parser(prog="xsep", description="Separability of three-qubit X-states.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def with_input(name, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("input", help='state JSON: a file path, inline JSON, or "-" for stdin')
        return p

    with_input("validate", "parse a state and report its invariants").set_defaults(func=cmd_validate)
    with_input("classify", "classify a state").set_defaults(func=cmd_classify)
    with_input("decompose", "emit a verified product-state decomposition").set_defaults(func=cmd_decompose)
    p = with_input("witness", "evaluate the diagonal/anti-diagonal witness")
    p.add_argument("--z", default="auto", help='"auto" or JSON [[re, im] x 4]')
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("curve", parents=[common], help="emit a boundary sweep")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--samples", type=int, default=13)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("random", parents=[common], help="emit random states as JSON lines")
    p.add_argument("profile", help="product_mixture, random_ppt, near_boundary or random_rank(k)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", "--samples", type=int, default=1, dest="count")
    p.set_defaults(func=cmd_random)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.tol is not None and not args.tol > 0:
            parser.error("--tol must be positive")
    except SystemExit as exc:
        # argparse exits on --help and on bad arguments; report the status instead
        return int(exc.code or 0)
    if args.verb == "curve":
        args.tol = args.tol or core.DEFAULT_TOL
        args.format = args.format or "csv"
    try:
        return args.func(args)
    except (ParseError, InvalidProfile) as exc:
        print(f"xsep: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NotAState, NegativeDiagonal) as exc:
        print(f"xsep: not a state: {exc}", file=sys.stderr)
        return EXIT_NOT_STATE
    except NotDecomposable as exc:
        print(f"xsep: {exc}", file=sys.stderr)
        return EXIT_NOT_DECOMPOSABLE


if __name__ == "__main__":
    sys.exit(main())
