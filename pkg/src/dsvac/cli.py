"""Command line driver.

``dsvac run`` executes the verification suites and writes a JSON (or CSV)
report; ``dsvac diff`` compares two reports.  Exit codes: 0 all checks pass,
1 at least one failing check, 2 configuration error.
"""

import argparse
import json
import sys

from .report import (
    ALL_SUITES,
    RunConfig,
    diff_reports,
    has_failures,
    run,
    to_csv,
    to_json,
)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="dsvac",
        description="Verification suites for the Calderon-projector vacuum "
                    "of linearized gravity on de Sitter space.")
    sub = parser.add_subparsers(dest="command")
    runp = sub.add_parser("run", help="run verification suites")
    runp.add_argument("--config", help="JSON config file (flags override it)")
    runp.add_argument("--k-max", type=int, default=None)
    runp.add_argument("--suites", default=None,
                      help="comma separated subset of: " + ",".join(ALL_SUITES))
    runp.add_argument("--alpha", default=None,
                      help="comma separated Bogoliubov parameters")
    runp.add_argument("--tol-verdict", type=float, default=None)
    runp.add_argument("--tol-linear-algebra", type=float, default=None)
    runp.add_argument("--tol-ode", type=float, default=None)
    runp.add_argument("--margin", type=float, default=None)
    runp.add_argument("--k-dynamics", type=int, default=None)
    runp.add_argument("--seed", type=int, default=None)
    runp.add_argument("--jobs", type=int, default=None,
                      help="worker processes for per-sector construction")
    runp.add_argument("--out", default=None, help="output path (default stdout)")
    runp.add_argument("--format", dest="fmt", choices=("json", "csv"),
                      default=None)
    diffp = sub.add_parser("diff", help="diff two JSON reports")
    diffp.add_argument("old")
    diffp.add_argument("new")
    diffp.add_argument("--drift-factor", type=float, default=10.0)
    return parser


_FLAG_FIELDS = ("k_max", "tol_verdict", "tol_linear_algebra", "tol_ode",
                "margin", "k_dynamics", "seed", "jobs", "fmt")


def _config_from_args(args):
    base = {}
    if args.config:
        try:
            with open(args.config) as fh:
                base = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValueError(f"cannot read config file: {exc}")
    cfg = RunConfig()
    for key, value in base.items():
        if not hasattr(cfg, key):
            raise ValueError(f"unknown config key {key!r}")
        setattr(cfg, key, tuple(value) if isinstance(value, list) else value)
    for field_name in _FLAG_FIELDS:
        value = getattr(args, field_name, None)
        if value is not None:
            setattr(cfg, field_name, value)
    if args.suites is not None:
        cfg.suites = tuple(s.strip() for s in args.suites.split(",") if s.strip())
    if args.alpha is not None:
        cfg.alpha_values = tuple(float(a) for a in args.alpha.split(","))
    if args.out is not None:
        cfg.output = args.out
    cfg.validate()
    return cfg


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "run":
        try:
            cfg = _config_from_args(args)
        except ValueError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
        report = run(cfg)
        text = to_json(report) if cfg.fmt == "json" else to_csv(report)
        if cfg.output:
            try:
                with open(cfg.output, "w") as fh:
                    fh.write(text)
            except OSError as exc:
                print(f"cannot write output: {exc}", file=sys.stderr)
                return 2
        else:
            sys.stdout.write(text)
        counts = report["summary"]
        print(f"checks: {sum(counts.values())} "
              f"pass={counts.get('pass', 0)} fail={counts.get('fail', 0)} "
              f"structural={counts.get('structural', 0)}", file=sys.stderr)
        return 1 if has_failures(report) else 0
    if args.command == "diff":
        try:
            with open(args.old) as fh:
                old = json.load(fh)
            with open(args.new) as fh:
                new = json.load(fh)
            delta = diff_reports(old, new, drift_factor=args.drift_factor)
        except (OSError, json.JSONDecodeError, ValueError) as exc:
            print(f"diff error: {exc}", file=sys.stderr)
            return 2
        print(json.dumps(delta, indent=2))
        return 0
    parser.print_help()
    return 2


if __name__ == "__main__":
    sys.exit(main())
