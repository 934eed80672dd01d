"""Command-line interface.

    kinshock run <config>                      run one scenario
    kinshock sweep <config> --eps 0.2,0.1,...  rerun it per entropy scale
    kinshock verify [--seed N] [--exhaustive]  invariant suites, CSV report
    kinshock riemann-table <config>            exact two-state solution table

Output files land under --out-root, the KINSHOCK_OUT environment
variable, or the working directory, in that order of preference.
Exit status: 0 success, 1 usage or configuration error, 2 invariant or
property violation.
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, parse_config
from .properties import report_csv, run_property_suite
from .runner import fmt, riemann_table, run_scenario, run_sweep
from .scheme import InvariantViolation

__all__ = ["main"]

USAGE_ERROR, VIOLATION = 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kinshock", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario from a config file")
    p_run.add_argument("config")
    p_run.add_argument("--out-root", default=None)

    p_sweep = sub.add_parser("sweep", help="run a scenario across entropy scales")
    p_sweep.add_argument("config")
    p_sweep.add_argument("--eps", required=True,
                         help="comma-separated entropy scales, e.g. 0.2,0.1,0.05")
    p_sweep.add_argument("--out-root", default=None)

    p_verify = sub.add_parser("verify", help="run the invariant suites")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--n-random", type=int, default=10000)
    p_verify.add_argument("--exhaustive", action="store_true",
                          help="extend the exhaustive enumerations to their full sizes")
    p_verify.add_argument("--inject-bug", action="store_true",
                          help="flip the projection case selection; the suite must fail")

    p_table = sub.add_parser("riemann-table",
                             help="write the exact Riemann solution at t_final")
    p_table.add_argument("config")
    p_table.add_argument("--out-root", default=None)
    return parser


def _cmd_run(args) -> int:
    summary = run_scenario(parse_config(args.config), args.out_root)
    for key, value in summary.items():
        print(f"{key} = {fmt(value)}")
    return 0


def _cmd_sweep(args) -> int:
    eps_values = [float(tok) for tok in args.eps.split(",") if tok]
    if not eps_values:
        print("sweep: --eps needs at least one value", file=sys.stderr)
        return USAGE_ERROR
    rows = run_sweep(parse_config(args.config), eps_values, args.out_root)
    for row in rows:
        print(f"eps = {fmt(row['eps'])}  front_speed_error = "
              f"{fmt(row['front_speed_error'])}  l1_to_reference = "
              f"{fmt(row['l1_to_reference'])}")
    return 0


def _cmd_verify(args) -> int:
    results = run_property_suite(seed=args.seed, n_random=args.n_random,
                                 exhaustive=args.exhaustive,
                                 swap_cases=args.inject_bug)
    sys.stdout.write(report_csv(results))
    failures = [r for r in results if not r.passed]
    for r in failures:
        print(f"FAIL {r.name}: {r.violations}/{r.cases} violations, "
              f"worst margin {r.worst_margin:.3e}", file=sys.stderr)
        if r.counterexample:
            print(f"  counterexample profile: {r.counterexample}", file=sys.stderr)
    if args.inject_bug:
        if not failures:
            print("inject-bug: the suite failed to detect the flipped "
                  "case selection", file=sys.stderr)
            return VIOLATION
        print(f"inject-bug: detected by {len(failures)} checks, as expected",
              file=sys.stderr)
        return 0
    return VIOLATION if failures else 0


def _cmd_table(args) -> int:
    path = riemann_table(parse_config(args.config), args.out_root)
    print(path)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_table(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return VIOLATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
