"""
Command-line entry point.

Exit codes: 0 success, 1 usage or validation error, 2 I/O error, 3 a strict
verification run found a claim off its expected status.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from contextlib import contextmanager

import numpy as np

from . import __version__
from .claims import ClaimError, dumps_report, run_report
from .data import DataError, load_dataset
from .decompose import (
    decomposition_count_formula,
    enumerate_cube_splits,
    recurrence_count,
    single_split_count,
    split_identity_sides,
    verify_decompositions,
)
from .lattice import N_CAP_ENV, LatticeError, LatticeFunction, SignConvention, as_convention, fast_signed_transform
from .measures import (
    DistributionError,
    delta,
    differential_entropy,
    entropy_lattice_from_samples,
    multi_information,
    symmetric_delta,
)
from .operators import ConventionSet, apply, operator
from .predict import predict

log = logging.getLogger("mobiusinfo")

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_STRICT = 0, 1, 2, 3
MEASURES = ("entropy", "interaction", "delta", "symmetric-delta", "multi-info", "cll")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; 2 is reserved for I/O here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _n_range(text: str) -> tuple:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
        elif "-" in text:
            lo, hi = text.split("-", 1)
        else:
            lo = hi = text
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range like 2..4, got {text!r}") from None


def _int_list(text: str) -> list:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-base", choices=("e", "2"), default="e", help="logarithm base for entropies")
    common.add_argument("--convention", choices=[c.value for c in SignConvention], default="paper-3a",
                        help="sign convention for the down-set and up-set operators")
    common.add_argument("--n-cap", type=int, default=None, help=f"largest lattice size (overrides {N_CAP_ENV})")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-o", "--output", default="-", help="output file, '-' for stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="mobiusinfo", description="Signed lattice transforms and information measures.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("measures", parents=[common], help="information measures of a data table")
    m.add_argument("input")
    m.add_argument("--measure", choices=MEASURES, default="entropy")
    m.add_argument("--vars", help="comma-separated columns (default: all)")
    m.add_argument("--target", help="variable singled out by delta and cll")
    m.add_argument("--sign-mode", choices=("product", "negated-product"), default="product")
    m.add_argument("--format", choices=("json", "csv"), default="json")
    m.add_argument("--bins", type=int, default=4, help="bins for numeric columns")
    m.set_defaults(func=cmd_measures)

    t = sub.add_parser("transform", parents=[common], help="apply an operator to a lattice JSON file")
    t.add_argument("input")
    t.add_argument("--op", required=True, help="m, M, X, P, R, I or F:<mask>")
    t.add_argument("--generalized-convention", choices=[c.value for c in SignConvention], default="paper-18")
    t.set_defaults(func=cmd_transform)

    v = sub.add_parser("verify", parents=[common], help="evaluate every registered claim")
    v.add_argument("--n", dest="n_range", type=_n_range, default=(2, 4), help="size range, e.g. 2..4")
    v.add_argument("--seeds", type=_int_list, default=None, help="comma-separated seeds (default: --seed)")
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--strict", action="store_true", help="exit 3 if a pinned claim misses its status")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("predict", parents=[common], help="best conditioning subset for a target column")
    r.add_argument("input")
    r.add_argument("--target", required=True)
    r.add_argument("--max-degree", type=int, default=2)
    r.add_argument("--holdout", type=float, default=0.0, help="fraction of rows held out")
    r.add_argument("--bins", type=int, default=4)
    r.set_defaults(func=cmd_predict)

    d = sub.add_parser("decompose", parents=[common], help="split decompositions of the n-cube")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--verify", action="store_true", help="check every split numerically")
    d.add_argument("--samples", type=int, default=50)
    d.set_defaults(func=cmd_decompose)
    return p


# -- output -----------------------------------------------------------------

def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _lattice_rows(f: LatticeFunction):
    return [(f.label(mask), mask, repr(float(f.values[mask]))) for mask in range(1 << f.n)]


# -- subcommands ------------------------------------------------------------

def _load_codes(args):
    data = load_dataset(args.input, bins=args.bins)
    names = data.names
    if args.vars:
        names = [s.strip() for s in args.vars.split(",") if s.strip()]
        unknown = [s for s in names if s not in data.columns]
        if unknown:
            raise UsageError(f"unknown column(s): {', '.join(unknown)}")
        if len(set(names)) != len(names):
            raise UsageError("--vars lists a column twice")
    return data.codes(names), names


def cmd_measures(args) -> int:
    codes, names = _load_codes(args)
    base = 2 if args.log_base == "2" else "e"
    H = entropy_lattice_from_samples(codes, names, base)
    target = None
    if args.target is not None:
        if args.target not in names:
            raise UsageError(f"target {args.target!r} is not among the variables: {', '.join(names)}")
        target = names.index(args.target)
    elif args.measure == "cll":
        raise UsageError("--measure cll needs --target")

    if args.measure in ("entropy", "interaction", "multi-info", "cll"):
        if args.measure == "entropy":
            f = H
        elif args.measure == "interaction":
            f = fast_signed_transform(H, "down", as_convention(args.convention)).replace(role="interaction")
        elif args.measure == "multi-info":
            f = multi_information(H)
        else:
            f = differential_entropy(H, target).replace(role="cll")
        if args.format == "csv":
            return _emit(args, _csv(_lattice_rows(f), ("subset", "mask", "value")))
        out = f.to_dict()
        if args.measure == "cll":
            out["target"] = args.target
        return _emit(args, _json(out))

    if H.n < (2 if args.measure == "symmetric-delta" else 1):
        raise UsageError(f"{args.measure} needs at least two variables")
    if args.measure == "delta":
        picks = [target] if target is not None else list(range(H.n))
        values = {names[x]: delta(H, x) for x in picks}
        if args.format == "csv":
            return _emit(args, _csv([(k, repr(v)) for k, v in values.items()], ("variable", "value")))
        return _emit(args, _json({"measure": "delta", "labels": names, "values": values}))
    value = symmetric_delta(H, args.sign_mode)
    if args.format == "csv":
        return _emit(args, _csv([("symmetric-delta", repr(value))], ("measure", "value")))
    return _emit(args, _json({"measure": "symmetric-delta", "labels": names, "sign_mode": args.sign_mode,
                              "value": value}))


def cmd_transform(args) -> int:
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except UnicodeDecodeError as exc:
        raise UsageError(f"{args.input}: not a text file ({exc})") from None
    f = LatticeFunction.loads(text)
    c = as_convention(args.convention)
    op = operator(args.op, ConventionSet(c, c, as_convention(args.generalized_convention)))
    if op.kind == "F" and op.reference >> f.n:
        raise UsageError(f"reference mask {op.reference} out of range for n={f.n}")
    return _emit(args, apply(op, f).dumps() + "\n")


def cmd_verify(args) -> int:
    seeds = args.seeds if args.seeds is not None else [args.seed]
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    report = run_report(args.n_range, seeds, args.samples)
    _emit(args, dumps_report(report))
    failures = report["expectation_failures"]
    if args.strict and failures:
        for f in failures:
            log.error("claim %s at n=%d (%s, %s): %s, expected %s", f["claim"], f["n"], f["convention"],
                      f["framing"], f["status"], f["expected"])
        return EXIT_STRICT
    return EXIT_OK


def cmd_predict(args) -> int:
    data = load_dataset(args.input, bins=args.bins)
    base = 2 if args.log_base == "2" else "e"
    report = predict(data, args.target, args.max_degree, args.holdout, args.seed, base)
    return _emit(args, _json(report.to_dict()))


def cmd_decompose(args) -> int:
    n = args.n
    if not 2 <= n <= 5:
        raise UsageError(f"--n must be between 2 and 5, got {n}")
    specs = enumerate_cube_splits(n)
    out = {
        "n": n,
        "splits": [{"axis": s.split_axis,
                    "halves": [{"lo": h.lo, "hi": h.hi, "terms": [{"reference": t.reference, "tau": t.tau}
                                                                   for t in h.candidates]} for h in s.terms],
                    "expressions": s.expression_count} for s in specs],
        "single_split_count": single_split_count(n),
        "formula_count": decomposition_count_formula(n),
        "recurrence_count": recurrence_count(n),
        "axis_recurrence_count": recurrence_count(n, None),
        "notes": [],
    }
    if out["recurrence_count"] != out["axis_recurrence_count"]:
        out["notes"].append(f"the published recurrence uses 3 cuts per level; a {n}-cube has {n} axes")
    if args.verify:
        if args.samples < 1:
            raise UsageError("--samples must be positive")
        rng = np.random.default_rng([args.seed, n])
        conv = as_convention(args.convention)
        split_dev, expr_dev = 0.0, 0.0
        for _ in range(args.samples):
            f = LatticeFunction(n, rng.standard_normal(1 << n))
            left, right = split_identity_sides(f, conv, axis=1)
            split_dev = max(split_dev, float(abs(left - right)))
            expr_dev = max(expr_dev, max(float(r[3]) for r in verify_decompositions(f, conv)))
        out["verify"] = {"convention": conv.value, "samples": args.samples, "seed": args.seed,
                         "tolerance": 1e-12, "split_identity_max_deviation": split_dev,
                         "split_identity_pass": split_dev <= 1e-12,
                         "all_expressions_max_deviation": expr_dev,
                         "all_expressions_pass": expr_dev <= 1e-12}
    return _emit(args, _json(out))


def _emit(args, text: str) -> int:
    try:
        _write(args.output, text)
    except OSError as exc:
        raise _IOFailure(f"cannot write {args.output}: {exc.strerror or exc}") from None
    return EXIT_OK


class _IOFailure(Exception):
    pass


@contextmanager
def _n_cap_override(cap):
    if cap is None:
        yield
        return
    old = os.environ.get(N_CAP_ENV)
    os.environ[N_CAP_ENV] = str(cap)
    try:
        yield
    finally:
        if old is None:
            os.environ.pop(N_CAP_ENV, None)
        else:
            os.environ[N_CAP_ENV] = old


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s")
    if args.n_cap is not None and args.n_cap < 0:
        print("mobiusinfo: error: --n-cap must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    try:
        with _n_cap_override(args.n_cap):
            return args.func(args)
    except _IOFailure as exc:
        print(f"mobiusinfo: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        name = getattr(exc, "filename", None)
        print(f"mobiusinfo: error: {name + ': ' if name else ''}{exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, DataError, LatticeError, DistributionError, ClaimError) as exc:
        print(f"mobiusinfo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, TypeError, KeyError, OverflowError) as exc:
        # malformed input that slipped past validation still gets a clean exit
        log.debug("unexpected error", exc_info=True)
        print(f"mobiusinfo: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
