"""Command-line interface: ``python -m soefgt <command> ...``.

Exit status is 0 on success, 2 for usage errors and 1 when a numerical
procedure fails.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import bench, fgt
from .exceptions import DomainError, NumericalFailure, StructuralError
from .reduction import reduce
from .soe import max_error, write_table

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2

DEFAULT_DELTAS = [10.0 ** k for k in range(-7, 5)]


class UsageError(Exception):
    pass


def _int_list(text):
    """``"8,12,16"`` or ``"8:64:4"`` (inclusive stop) to a list of ints."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            lo, hi = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            if step <= 0:
                raise ValueError
            return list(range(lo, hi + 1, step))
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}") from None


def _float_list(text):
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number list: {text!r}") from None


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_soe(args):
    soe = bench.make_soe(args.method, args.n, args.theta)
    rep = max_error(soe)
    if args.out:
        write_table(soe, args.out)
    if args.json:
        print(json.dumps({"method": args.method, "n": rep.n, "max_error": rep.max_abs_error,
                          "argmax_x": rep.argmax_x}))
    else:
        if not args.out:
            sys.stdout.write(write_table(soe))
        print(f"# n={rep.n} E={rep.max_abs_error:.6e} argmax_x={rep.argmax_x:.6e}")


def cmd_convergence(args):
    rows, rates = bench.convergence(args.method, args.n, args.reduce, args.theta)
    text = _csv(["n", "n_r", "E", "E_r"],
                [(n, nr, f"{E:.6e}", f"{Er:.6e}") for n, E, nr, Er in rows])
    if args.json:
        text = json.dumps({"method": args.method, "rows": [
            {"n": n, "n_r": nr, "E": E, "E_r": Er} for n, E, nr, Er in rows], **rates}) + "\n"
    _emit(text, args.out)
    if not args.json:
        for k, v in rates.items():
            print(f"# {k}={v:.4f}", file=sys.stderr)


def cmd_reduce(args):
    soe = bench.make_soe(args.method, args.n, args.theta)
    E = max_error(soe).max_abs_error
    tol = E / 3.0 if args.tol is None else args.tol
    red, rep = reduce(soe, tol)
    Er = max_error(red).max_abs_error
    if args.out:
        write_table(red, args.out)
    info = {**rep.to_dict(), "original_error": E, "reduced_error": Er}
    if args.json:
        print(json.dumps(info))
    else:
        if not args.out:
            sys.stdout.write(write_table(red))
        print(f"# n={rep.original_n} n_r={rep.reduced_n} tol={tol:.3e} "
              f"E={E:.6e} E_r={Er:.6e}")


def cmd_bench(args):
    scenario = "SamePoints" if args.M is None else "DistinctPoints"
    rec = bench.run_bench(scenario, args.N, args.M, args.ne, args.delta, args.seed,
                          args.dist, args.presort, args.repeat)
    if args.json:
        text = rec.to_json() + "\n"
    else:
        d = rec.to_dict()
        text = _csv(list(d), [list(d.values())])
    _emit(text, args.out)


def cmd_delta_sweep(args):
    deltas = DEFAULT_DELTAS if args.delta is None else args.delta
    rows = bench.delta_sweep(args.N, args.ne, deltas, args.seed, args.dist)
    if args.json:
        text = json.dumps([{"delta": d, "error": e} for d, e in rows]) + "\n"
    else:
        text = _csv(["delta", "error"], [(f"{d:.6e}", f"{e:.6e}") for d, e in rows])
    _emit(text, args.out)


def _read_points(path):
    try:
        data = np.loadtxt(path, delimiter=",", ndmin=2, comments="#")
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read points from {path}: {exc}") from None
    if data.size == 0:
        return np.empty(0), np.empty(0)
    if data.shape[1] not in (1, 2):
        raise UsageError(f"{path}: expected 1 or 2 columns, got {data.shape[1]}")
    x = data[:, 0]
    a = data[:, 1] if data.shape[1] == 2 else np.ones_like(x)
    return x, a


def cmd_transform(args):
    y, a = _read_points(args.points)
    x = None if args.targets is None else _read_points(args.targets)[0]
    u = fgt.gauss_transform(y, a, x, args.delta, n_e=args.ne)
    _emit(_csv(["index", "potential"], [(i, repr(float(v))) for i, v in enumerate(u)]), args.out)


def build_parser():
    p = argparse.ArgumentParser(prog="soefgt", description=(
        "Sum-of-exponentials approximations of the Gaussian and a linear-time "
        "one-dimensional fast Gauss transform."))
    sub = p.add_subparsers(dest="command", required=True)

    def method_args(sp, n_type=int):
        sp.add_argument("--method", required=True, choices=bench.METHODS)
        sp.add_argument("--n", type=n_type, required=True)
        sp.add_argument("--theta", type=float, default=None,
                        help="balancing parameter of the stabilized hyperbola")

    def common(sp):
        sp.add_argument("--json", action="store_true", help="structured output")
        sp.add_argument("--out", default=None, help="output file (default stdout)")

    sp = sub.add_parser("soe", help="build an SOE and report its error")
    method_args(sp)
    common(sp)
    sp.set_defaults(func=cmd_soe)

    sp = sub.add_parser("convergence", help="error versus n for an SOE family")
    method_args(sp, _int_list)
    sp.add_argument("--reduce", action="store_true", help="also reduce at tol = E/3")
    common(sp)
    sp.set_defaults(func=cmd_convergence)

    sp = sub.add_parser("reduce", help="compress an SOE by balanced truncation")
    method_args(sp)
    sp.add_argument("--tol", type=float, default=None, help="default E/3")
    common(sp)
    sp.set_defaults(func=cmd_reduce)

    def transform_args(sp):
        sp.add_argument("--ne", type=int, default=6, choices=range(1, 8), metavar="{1..7}")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--dist", choices=("uniform", "chebyshev"), default="uniform")

    sp = sub.add_parser("bench", help="timed transform with error estimate")
    sp.add_argument("--N", type=int, default=100_000)
    sp.add_argument("--M", type=int, default=None, help="distinct targets (default: same points)")
    sp.add_argument("--delta", type=float, default=1.0)
    sp.add_argument("--presort", action="store_true")
    sp.add_argument("--repeat", type=int, default=1)
    transform_args(sp)
    common(sp)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("delta-sweep", help="transform error versus delta")
    sp.add_argument("--N", type=int, default=100_000)
    sp.add_argument("--delta", type=_float_list, default=None,
                    help="comma-separated deltas (default 1e-7,...,1e4)")
    transform_args(sp)
    common(sp)
    sp.set_defaults(func=cmd_delta_sweep)

    sp = sub.add_parser("transform", help="apply the transform to points from a file")
    sp.add_argument("points", help="CSV of source coordinates and optional strengths")
    sp.add_argument("--targets", default=None, help="CSV of target coordinates")
    sp.add_argument("--delta", type=float, default=1.0)
    sp.add_argument("--ne", type=int, default=6, choices=range(1, 8), metavar="{1..7}")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_transform)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"soefgt {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalFailure, StructuralError, FloatingPointError) as exc:
        print(f"soefgt {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
