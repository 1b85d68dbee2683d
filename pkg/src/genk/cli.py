"""Command-line front end.

Exit codes: 0 every check passed, 1 some check failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import platform
import sys
from pathlib import Path

import numpy as np

from . import checks, kernels
from . import scenario as scenario_mod
from .errors import GenkError
from .report import Report

EXIT_PASS, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


def _environment(sc) -> dict:
    return {
        "seed": sc.seed,
        "radius": sc.radius,
        "arithmetic": "rational" if sc.exact else "float",
        "tolerance_overrides": dict(sc.tol),
        "tiers": list(sc.tiers),
        "kernel_backend": kernels.BACKEND,
        "numpy": np.__version__,
        "python": platform.python_version(),
    }


def run_scenario(path, radius=None, tol=None, seed=None, exact=False) -> Report:
    sc = scenario_mod.load(path).with_overrides(radius=radius, tol=tol, seed=seed, exact=exact or None)
    results = checks.run_checks(sc)
    return Report(sc.name, results, _environment(sc))


def _write(report: Report, fmt: str, output: str | None):
    text = report.dumps() if fmt == "json" else report.to_csv()
    if output is None:
        return
    try:
        Path(output).write_text(text)
    except OSError as exc:
        raise GenkError(f"cannot write {output}: {exc.strerror}") from None


def cmd_run(args) -> int:
    report = run_scenario(args.scenario, args.radius, args.tol, args.seed, args.exact)
    print(report.table())
    out = args.output
    if out is None:
        out = f"{report.scenario}_report.{args.format}"
    _write(report, args.format, out)
    print(f"report written to {out}")
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_list_checks(args) -> int:
    for line in checks.catalog_lines():
        print(line)
    print(f"{len(checks.CATALOG)} checks")
    return EXIT_PASS


def cmd_export(args) -> int:
    try:
        text = Path(args.report).read_text()
    except OSError as exc:
        raise GenkError(f"cannot read {args.report}: {exc.strerror}") from None
    try:
        report = Report.loads(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise GenkError(f"not a report: {exc}") from None
    if args.output is None:
        sys.stdout.write(report.dumps() if args.format == "json" else report.to_csv())
    else:
        _write(report, args.format, args.output)
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="genk", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run the checks of a scenario")
    r.add_argument("--scenario", required=True, help="scenario file, or the name of a shipped scenario")
    r.add_argument("--radius", type=int, help="Fourier truncation |k|_inf <= N")
    r.add_argument("--tol", type=float, help="threshold override for every check")
    r.add_argument("--seed", type=int, help="seed for randomized checks")
    r.add_argument("--exact", action="store_true", help="rational arithmetic where supported")
    r.add_argument("--format", choices=("json", "csv"), default="json")
    r.add_argument("--output", help="report path (default <scenario>_report.<format>)")
    r.set_defaults(func=cmd_run)

    lc = sub.add_parser("list-checks", help="print the check catalog with anchors")
    lc.set_defaults(func=cmd_list_checks)

    e = sub.add_parser("export", help="re-emit a JSON report as JSON or CSV")
    e.add_argument("report")
    e.add_argument("--format", choices=("json", "csv"), default="csv")
    e.add_argument("--output")
    e.set_defaults(func=cmd_export)

    sub.add_parser("scenarios", help="list shipped scenarios").set_defaults(
        func=lambda a: print("\n".join(scenario_mod.shipped_scenarios())) or EXIT_PASS
    )
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except GenkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
