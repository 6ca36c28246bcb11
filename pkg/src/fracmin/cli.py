"""Command-line front end.

Exit codes: 0 success, 1 an exact check failed, 2 malformed input or usage,
3 validation failure, 4 quadrature did not converge, 5 an envelope check
failed or was flagged.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import theorems
from .minimal import Exponents, minimal_minus, minimal_plus, minimal_plus_oracle
from .rng import SplitMix64, random_function, random_pair
from .stepfn import INF, Interval, SchemaError, StepFunction
from .weights import (DEFAULT_REFINEMENT, DEFAULT_TOL, Kind, QuadratureError, WeightPair,
                      class_constant, interval_family, plus_minus)

EXIT_OK, EXIT_EXACT, EXIT_INPUT, EXIT_INVALID, EXIT_QUAD, EXIT_ENVELOPE = 0, 1, 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _interval(text: str) -> Interval:
    try:
        a, b = (float(t) for t in text.split(","))
        return Interval(a, b)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a,b with a < b: {exc}") from None


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INPUT, f"{path}: malformed JSON ({exc})") from None


def _schema(exc: SchemaError) -> CliError:
    # negative or zero values parse fine as JSON but fail validation
    code = EXIT_INVALID if ("negative" in str(exc) or "zero" in str(exc)) else EXIT_INPUT
    return CliError(code, f"invalid field {exc}")


def load_function(path: str) -> StepFunction:
    try:
        return StepFunction.from_dict(_load_json(path))
    except SchemaError as exc:
        raise _schema(exc) from None


def load_pair(path: str) -> WeightPair:
    try:
        return WeightPair.from_dict(_load_json(path))
    except SchemaError as exc:
        raise _schema(exc) from None


def _exponents(args) -> Exponents:
    try:
        return Exponents(args.mu, args.p, args.q)
    except ValueError as exc:
        raise CliError(EXIT_INVALID, str(exc)) from None


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot write {out}: {exc.strerror}") from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_eval(args) -> int:
    f = load_function(args.f)
    if args.mu < 0:
        raise CliError(EXIT_INVALID, f"mu must be nonnegative, got {args.mu}")
    lines = []
    for x in args.x:
        vals = [minimal_plus(f, args.mu, x)]
        if args.minus:
            vals.append(minimal_minus(f, args.mu, x))
        if args.oracle:
            h_max = args.h_max
            if h_max is None:
                h_max = max(f.breakpoints[-1] - x, 0.0)
                if f.right_tail < INF or h_max == 0:
                    h_max = max(h_max, 1.0) * 1e3
            vals.append(minimal_plus_oracle(f, args.mu, x, h_max, args.n))
        lines.extend(fmt(v) for v in vals)
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_constant(args) -> int:
    pair = load_pair(args.pair)
    e = _exponents(args)
    window = args.window or pair.hull
    family = interval_family(window, pair, args.refinement)
    kind = {"wpq": Kind.WPQ, "wpq-eta": Kind.WPQ_ETA, "sawyer": Kind.SAWYER}[args.kind]
    if kind is Kind.WPQ_ETA and not (args.eta is not None and 0 < args.eta < 1):
        raise CliError(EXIT_INVALID, "--eta in (0, 1) is required for wpq-eta")
    descriptor = {"window": window.to_dict(), "refinement": args.refinement, "size": len(family)}
    try:
        rep = class_constant(kind, pair, e, family, eta=args.eta, tol=args.tol, descriptor=descriptor)
    except QuadratureError as exc:
        raise CliError(EXIT_QUAD, str(exc)) from None
    _emit(dumps(rep.to_dict()), args.out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    if args.depth < 1:
        raise CliError(EXIT_INVALID, "--depth must be at least 1")
    _emit(dumps(plus_minus(args.interval, args.depth).to_dict()), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.theorem != "all" and args.theorem not in theorems.SUITES:
        raise CliError(EXIT_INPUT, f"unknown theorem {args.theorem!r}; choose from "
                                   f"{', '.join(theorems.THEOREMS)} or all")
    if args.trials < 0:
        raise CliError(EXIT_INVALID, "--trials must be nonnegative")
    try:
        results = theorems.run_suite(args.theorem, args.trials, args.seed)
    except QuadratureError as exc:
        raise CliError(EXIT_QUAD, str(exc)) from None
    report = {
        "config": {"theorem": args.theorem, "trials": args.trials, "seed": args.seed},
        "summary": {
            "checks": len(results),
            "passed": sum(r.passed for r in results),
            "flagged": sum(r.flagged for r in results),
        },
        "results": [r.to_dict() for r in results],
    }
    text = dumps(report)
    table = theorems.results_csv(results)
    if args.out is None:
        sys.stdout.write(table if args.format == "csv" else text)
    else:
        out = Path(args.out)
        _emit(text, str(out.with_suffix(".json")))
        _emit(table, str(out.with_suffix(".csv")))
    exact_fail = [r for r in results if r.kind == "exact" and not r.passed]
    envelope_bad = [r for r in results if r.kind == "envelope" and (not r.passed or r.flagged)]
    for r in exact_fail:
        print(f"FAILED {r.name} {r.witness.get('instance', '')}", file=sys.stderr)
    for r in envelope_bad:
        tag = "failed" if not r.passed else "flagged"
        print(f"envelope {tag}: {r.name} {r.witness.get('instance', '')}", file=sys.stderr)
    if exact_fail:
        return EXIT_EXACT
    if envelope_bad:
        return EXIT_ENVELOPE
    return EXIT_OK


def cmd_generate(args) -> int:
    rng = SplitMix64(args.seed)
    window = args.window or Interval(0.0, 1.0)
    cells = None
    if args.cells is not None:
        cells = args.cells
    if args.kind == "pair":
        obj = random_pair(rng, window, cells).to_dict()
    else:
        obj = random_function(rng, window, cells).to_dict()
    text = dumps(obj)
    if args.out is None:
        sys.stdout.write(text)
    else:
        _emit(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracmin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mu", type=float, default=0.0)
    common.add_argument("--p", type=float, default=1.0)
    common.add_argument("--q", type=float, default=1.0)
    common.add_argument("--window", type=_interval, default=None, help="a,b")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=10)
    common.add_argument("--refinement", type=int, default=DEFAULT_REFINEMENT)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("eval", parents=[common], help="evaluate the minimal function")
    p.add_argument("--f", required=True, help="step-function JSON file")
    p.add_argument("--x", type=_floats, required=True, help="comma-separated points")
    p.add_argument("--minus", action="store_true", help="also print the backward version")
    p.add_argument("--oracle", action="store_true", help="also print the brute-force value")
    p.add_argument("--h-max", type=float, default=None)
    p.add_argument("--n", type=int, default=64)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("constant", parents=[common], help="family-relative class constant")
    p.add_argument("--pair", required=True, help="weight-pair JSON file")
    p.add_argument("--kind", choices=("wpq", "wpq-eta", "sawyer"), default="wpq")
    p.add_argument("--eta", type=float, default=None)
    p.set_defaults(func=cmd_constant)

    p = sub.add_parser("decompose", parents=[common], help="plus-minus decomposition")
    p.add_argument("--interval", type=_interval, required=True, help="a,b")
    p.add_argument("--depth", type=int, default=3)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", parents=[common], help="run a theorem suite")
    p.add_argument("--theorem", default="all")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", parents=[common], help="write a random instance")
    p.add_argument("--kind", choices=("pair", "function"), default="pair")
    p.add_argument("--cells", type=int, default=None)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
