"""Command-line front end.

Subcommands: ``norm``, ``sweep``, ``required-n``, ``power``, ``gap``,
``verify``.  Systems are given with ``--system`` as a JSON file or inline
JSON, e.g. ``--system '{"type": "fir", "coeffs": [1, 1]}'``.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys

from . import bounds, experiments, protocols, verify
from .errors import BoundTooWeakError, InvalidArgumentError, ResourceError, UnstableSystemError
from .systems import from_descriptor, hinf_norm, to_descriptor
from .toeplitz import DENSE_LIMIT, ToeplitzSection, operator_norm_dense

EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BOUND = 3


class CliError(Exception):
    def __init__(self, message, code=EXIT_USAGE):
        super().__init__(message)
        self.code = code


def load_system(source):
    """Parse ``--system``: inline JSON when it looks like an object, else a path."""
    if source is None:
        raise CliError("--system is required")
    text = source
    if not source.lstrip().startswith("{"):
        if not os.path.exists(source):
            raise CliError(f"system file not found: {source}")
        with open(source) as fh:
            text = fh.read()
    try:
        desc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed system JSON: {exc}") from None
    try:
        return from_descriptor(desc)
    except UnstableSystemError as exc:
        raise CliError(f"unstable system rejected: {exc}") from None
    except InvalidArgumentError as exc:
        raise CliError(f"invalid system descriptor: {exc}") from None


def n_values(args, default=None):
    if args.n:
        out = []
        for chunk in args.n:
            out.extend(int(v) for v in str(chunk).split(",") if v.strip())
        return sorted(set(out))
    if args.nmin is not None and args.nmax is not None:
        return experiments.log_spaced_ints(args.nmin, args.nmax, args.points)
    if default is not None:
        return default
    raise CliError("give --n or both --nmin and --nmax")


@contextlib.contextmanager
def output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def emit_json(obj, path):
    with output(path) as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


# --------------------------------------------------------------------------

def cmd_norm(args):
    sys_ = load_system(args.system)
    res = hinf_norm(sys_)
    rows = []
    for n in n_values(args, default=[]):
        value, method = experiments.toeplitz_norm(sys_, n, seed=args.seed)
        rows.append({"n": n, "toeplitz_norm": value, "method": method})
    emit_json({"system": to_descriptor(sys_), "hinf_norm": res.norm, "theta0": res.theta0,
               "error_bound": res.error_bound, "toeplitz": rows}, args.out)
    return 0


def cmd_sweep(args):
    sys_ = load_system(args.system)
    try:
        config = experiments.SweepConfig(sys_, n_values(args), eps=args.eps, gamma=args.gamma,
                                         seed=args.seed, out=args.out)
    except InvalidArgumentError as exc:
        raise CliError(str(exc)) from None
    rows = experiments.sweep(config)
    with output(args.out) as fh:
        experiments.write_sweep_csv(rows, fh)
    if args.verify:
        problems = experiments.check_sweep(rows)
        for r in rows:
            again = bounds.theorem1_gap_bound(sys_, r.gamma_star, r.n).gap_bound
            if abs(again - r.theorem1_bound) > 1e-12 * max(1.0, abs(again)):
                problems.append((r, "bound does not reproduce"))
        for r, why in problems:
            print(f"verify: n={r.n}: {why}", file=sys.stderr)
        if problems:
            return EXIT_FAIL
        print(f"verify: {len(rows)} rows ok", file=sys.stderr)
    return 0


def cmd_required_n(args):
    sys_ = load_system(args.system)
    if args.eps is None or not args.eps > 0:
        raise CliError("--eps must be a positive number")
    try:
        n = bounds.required_length(sys_, args.eps)
    except BoundTooWeakError as exc:
        detail = {"error": str(exc),
                  "report": exc.report.to_dict() if exc.report else None}
        print(json.dumps(detail, indent=2, sort_keys=True), file=sys.stderr)
        return EXIT_BOUND
    gamma, report = bounds.optimize_gamma(sys_, n)
    emit_json({"n": n, "eps": args.eps, "gamma_star": gamma, "report": report.to_dict()},
              args.out)
    return 0


def cmd_power(args):
    sys_ = load_system(args.system)
    results = []
    for n in n_values(args):
        oracle = protocols.QueryOracle(sys_, n, args.sigma, args.seed)
        trace = protocols.wahlberg_power_method(oracle, args.iters, args.repeats,
                                                tol=args.tol, seed=args.seed)
        row = {"n": n, "estimate": trace.final.value, "iterations": trace.final.iterations,
               "queries_used": trace.queries_used, "samples_used": trace.samples_used}
        if n <= DENSE_LIMIT:
            row["dense"] = operator_norm_dense(ToeplitzSection.from_system(sys_, n))
        results.append(row)
    emit_json({"system": to_descriptor(sys_), "sigma": args.sigma, "runs": results}, args.out)
    return 0


def cmd_gap(args):
    if args.eps is None or not args.eps > 0:
        raise CliError("--eps must be a positive number")
    a_values = [float(v) for chunk in args.a for v in str(chunk).split(",") if v.strip()]
    rows = protocols.gap_experiment(a_values, args.eps, args.sigma, args.seed)
    with output(args.out) as fh:
        protocols.write_gap_csv(rows, fh)
    for r in rows:
        if r.limit_reached:
            print(f"gap: a={r.a:g} hit the dense limit before eps was reached",
                  file=sys.stderr)
    return 0


def cmd_verify(args):
    results = verify.run_checks(c1=args.c1)
    with output(args.out) as fh:
        for check in results:
            fh.write(check.line() + "\n")
    return 0 if all(c.passed for c in results) else EXIT_FAIL


# --------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="toeplitz-hinf",
        description="Finite Toeplitz sections vs the H-infinity norm of LTI systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, system=True, ns=True):
        if system:
            p.add_argument("--system", help="JSON file or inline JSON descriptor")
        if ns:
            p.add_argument("--n", action="append", help="section sizes, comma separated")
            p.add_argument("--nmin", type=int)
            p.add_argument("--nmax", type=int)
            p.add_argument("--points", type=int, default=20)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("norm", help="H-infinity norm and ||T_n||")
    common(p)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("sweep", help="CSV of gap and gap bound over n")
    common(p)
    p.add_argument("--eps", type=float)
    p.add_argument("--gamma", type=float, help="fixed gamma instead of optimizing")
    p.add_argument("--verify", action="store_true", help="re-check every row")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("required-n", help="length that the gap bound certifies for eps")
    common(p, ns=False)
    p.add_argument("--eps", type=float, required=True)
    p.set_defaults(func=cmd_required_n)

    p = sub.add_parser("power", help="time-reversal power method through a noisy oracle")
    common(p)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--iters", type=int, default=500)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("gap", help="Toeplitz length vs FIR trials for a + a z^-1")
    common(p, system=False, ns=False)
    p.add_argument("--a", action="append", required=True, help="values of a, comma separated")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--sigma", type=float, default=0.1)
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("verify", help="run the built-in self-checks")
    p.add_argument("--out")
    p.add_argument("--c1", type=float, default=bounds.C1,
                   help="override the n^-2 constant (negative control)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (InvalidArgumentError, ResourceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
