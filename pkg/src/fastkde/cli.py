"""Command-line front end: ``fastkde {estimate,bench-accuracy,bench-speed,efficiency-table}``.

Exit codes: 0 success, 2 usage or unreadable input, 3 bad data.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

import numpy as np

from . import __version__
from .bandwidth import DegenerateSampleError, silverman_bandwidth
from .binned import binned_kde, linear_bin
from .densities import RNG_ALGORITHM, catalog_rows
from .exact import AT_SAMPLES, PrecisionError, kde, kde_deriv
from .experiments import (
    DEFAULT_BINS,
    METHODS,
    ExperimentRecord,
    bench_accuracy,
    bench_speed,
    efficiency_table,
)
from .kernels import InvalidKernelError, make_kalpha

SCHEMA_LINE = "# fastkde-results v1"

EXIT_USAGE = 2
EXIT_DATA = 3


class CLIError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def read_numbers(path):
    """One value per line, or a single-column CSV with an optional header."""
    try:
        with open(path, newline="") as fh:
            rows = [row for row in csv.reader(fh)]
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc.strerror}", EXIT_USAGE) from exc
    values = []
    for lineno, row in enumerate(rows, 1):
        cells = [c.strip() for c in row if c.strip()]
        if not cells or cells[0].startswith("#"):
            continue
        if len(cells) > 1:
            raise CLIError(f"{path}:{lineno}: expected a single column", EXIT_USAGE)
        try:
            v = float(cells[0])
        except ValueError:
            if not values and lineno == _first_content_line(rows):
                continue  # header
            raise CLIError(f"{path}:{lineno}: not a number: {cells[0]!r}", EXIT_DATA)
        if not math.isfinite(v):
            raise CLIError(f"{path}:{lineno}: non-finite value {cells[0]!r}", EXIT_DATA)
        values.append(v)
    if not values:
        raise CLIError(f"{path}: no data", EXIT_DATA)
    return np.array(values)


def _first_content_line(rows):
    for lineno, row in enumerate(rows, 1):
        cells = [c.strip() for c in row if c.strip()]
        if cells and not cells[0].startswith("#"):
            return lineno
    return 0


def parse_kernel(text):
    t = text.strip().lower()
    try:
        if t.startswith("alpha="):
            return make_kalpha(int(t.split("=", 1)[1]))
        if t.startswith("k") and t[1:].isdigit():
            return make_kalpha(int(t[1:]))
    except (ValueError, InvalidKernelError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    raise argparse.ArgumentTypeError(f"kernel must be k1, k4, k7 or alpha=N, got {text!r}")


def parse_bandwidth(text):
    if text == "silverman":
        return text
    try:
        h = float(text)
    except ValueError:
        h = float("nan")
    if not (h > 0 and math.isfinite(h)):
        raise argparse.ArgumentTypeError("bandwidth must be 'silverman' or a positive number")
    return h


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _int_list(text):
    return [int(float(t)) for t in text.split(",") if t.strip()]


def write_csv(path, columns, rows, meta=()):
    fh = sys.stdout if path in (None, "-") else open(path, "w", newline="")
    try:
        fh.write(SCHEMA_LINE + "\n")
        for line in meta:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    finally:
        if fh is not sys.stdout:
            fh.close()


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def _records_out(path, records, meta):
    cols = ExperimentRecord.columns()
    write_csv(path, cols, ([getattr(r, c) for c in cols] for r in records), meta)


def cmd_estimate(args):
    if args.deriv == 1 and args.bins:
        raise CLIError("--deriv 1 cannot be combined with --bins", EXIT_USAGE)
    x = read_numbers(args.input)
    K = args.kernel
    if args.bandwidth == "silverman":
        try:
            h = silverman_bandwidth(x, K, args.deriv)
        except DegenerateSampleError as exc:
            raise CLIError(f"silverman bandwidth undefined: {exc}", EXIT_DATA) from exc
    else:
        h = args.bandwidth
    if args.at_samples:
        queries = x
    else:
        lo = args.lo if args.lo is not None else float(x.min()) - 3 * h
        hi = args.hi if args.hi is not None else float(x.max()) + 3 * h
        if not hi > lo and args.grid > 1:
            raise CLIError("--hi must exceed --lo", EXIT_USAGE)
        queries = np.linspace(lo, hi, args.grid)
    try:
        if args.bins:
            bs = linear_bin(x, args.bins)
            dens = binned_kde(bs, K, h, queries)
            cols, data = ["query", "density"], [queries, dens]
        else:
            q = AT_SAMPLES if args.at_samples else queries
            dens = kde(x, K, h, q)
            cols, data = ["query", "density"], [queries, dens]
            if args.deriv == 1:
                cols.append("derivative")
                data.append(kde_deriv(x, K, h, q))
    except (PrecisionError, InvalidKernelError) as exc:
        raise CLIError(str(exc), EXIT_DATA) from exc
    meta = [f"kernel alpha={K.alpha}", f"bandwidth {h!r}", f"n {x.size}", f"seed {args.seed}"]
    write_csv(args.output, cols, zip(*data), meta)


def _density_meta(seed):
    meta = [f"seed {seed}", f"rng {RNG_ALGORITHM}", "density label,name,weights,means,sds"]
    meta += ["density " + ",".join(row) for row in catalog_rows()]
    return meta


def cmd_bench_accuracy(args):
    try:
        recs = bench_accuracy(args.density, args.n, args.reps, args.k, args.methods,
                              args.seed, args.m, args.bins)
    except (KeyError, ValueError) as exc:
        raise CLIError(str(exc), EXIT_USAGE) from exc
    _records_out(args.output, recs, _density_meta(args.seed))


def cmd_bench_speed(args):
    try:
        recs = bench_speed(args.n_list, args.m_list, args.methods, args.reps,
                           args.density, args.k, args.seed, args.bins)
    except (KeyError, ValueError) as exc:
        raise CLIError(str(exc), EXIT_USAGE) from exc
    _records_out(args.output, recs, _density_meta(args.seed))


def cmd_efficiency_table(args):
    rows = efficiency_table(args.k, args.alpha_max)
    write_csv(args.output, ["kernel", "alpha", "eff", "releff"], rows, [f"k {args.k}"])


def _methods(text):
    out = [t.strip() for t in text.split(",") if t.strip()]
    for t in out:
        if t not in METHODS:
            raise argparse.ArgumentTypeError(f"unknown method {t!r}")
    return out


def build_parser():
    p = argparse.ArgumentParser(prog="fastkde", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("estimate", help="density (and derivative) estimates from a data file")
    e.add_argument("--input", required=True)
    e.add_argument("--output", default="-")
    e.add_argument("--kernel", type=parse_kernel, default=make_kalpha(1))
    e.add_argument("--bandwidth", type=parse_bandwidth, default="silverman")
    e.add_argument("--deriv", type=int, choices=(0, 1), default=0)
    where = e.add_mutually_exclusive_group()
    where.add_argument("--grid", type=_positive_int, default=1000, metavar="M")
    where.add_argument("--at-samples", action="store_true")
    e.add_argument("--lo", type=float)
    e.add_argument("--hi", type=float)
    e.add_argument("--bins", type=int, metavar="B")
    e.add_argument("--seed", type=int, default=0)
    e.set_defaults(func=cmd_estimate)

    a = sub.add_parser("bench-accuracy", help="ISE over replications")
    a.add_argument("--density", default="a")
    a.add_argument("--n", type=_positive_int, default=1000)
    a.add_argument("--reps", type=_positive_int, default=30)
    a.add_argument("--k", type=int, choices=(0, 1), default=0)
    a.add_argument("--methods", type=_methods, default=["exact-K1", "exact-K4"])
    a.add_argument("--m", type=int, default=10001, help="ISE grid size (odd)")
    a.add_argument("--bins", type=int, default=DEFAULT_BINS)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--output", default="-")
    a.set_defaults(func=cmd_bench_accuracy)

    s = sub.add_parser("bench-speed", help="mean wall time per method, n and m")
    s.add_argument("--n-list", type=_int_list, default=[1000, 10000, 100000])
    s.add_argument("--m-list", type=_int_list, default=[1000],
                   help="evaluation grid sizes; 0 means at the sample points")
    s.add_argument("--methods", type=_methods, default=["exact-K1", "exact-K4"])
    s.add_argument("--reps", type=_positive_int, default=5)
    s.add_argument("--density", default="d")
    s.add_argument("--k", type=int, choices=(0, 1), default=0)
    s.add_argument("--bins", type=int, default=DEFAULT_BINS)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--output", default="-")
    s.set_defaults(func=cmd_bench_speed)

    t = sub.add_parser("efficiency-table", help="(relative) efficiency of K_alpha")
    t.add_argument("--k", type=int, choices=(0, 1), default=0)
    t.add_argument("--alpha-max", type=int, default=15)
    t.add_argument("--output", default="-")
    t.set_defaults(func=cmd_efficiency_table)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "bins", None) is not None and args.bins < 2:
        parser.error("--bins must be at least 2")
    try:
        args.func(args)
    except CLIError as exc:
        print(f"fastkde: error: {exc}", file=sys.stderr)
        return exc.code
    return 0


if __name__ == "__main__":
    sys.exit(main())
