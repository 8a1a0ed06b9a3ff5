"""``g2flow`` command line: verification suites, parameter solving and golden reports.

Exit codes: 0 all checks pass, 1 a check failed, 2 unknown algebra or suite,
3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import suites
from .flow import OutOfScope, SingularSystem, flow_to_coflow, solve_flow_parameters
from .liealg import CatalogError, load_catalog

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _select(name: str):
    specs = load_catalog()
    if name == "all":
        return specs
    chosen = [s for s in specs if s.name == name]
    if not chosen:
        raise UsageError(f"unknown algebra {name!r}; known: {', '.join(s.name for s in specs)}")
    return chosen


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _checks_text(checks) -> str:
    lines = []
    for c in checks:
        line = f"{c.status.upper():4} {c.algebra:8} {c.check}"
        if c.witness:
            line += f"  [{c.witness}]"
        lines.append(line)
    passed = sum(c.status == "pass" for c in checks)
    failed = sum(c.status == "fail" for c in checks)
    lines.append(f"{passed} passed, {failed} failed, {len(checks) - passed - failed} skipped")
    return "\n".join(lines) + "\n"


def _checks_csv(checks) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["algebra", "check", "status", "witness"])
    for c in checks:
        w.writerow([c.algebra, c.check, c.status, c.witness])
    return buf.getvalue()


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_verify(args) -> int:
    specs = _select(args.algebra)
    if args.what == "all":
        what = list(suites.SUITES)
    elif args.what in suites.SUITES:
        what = [args.what]
    else:
        raise UsageError(f"unknown suite {args.what!r}; choose from {', '.join(suites.SUITES)} or all")
    checks = suites.run(specs, what, m_val=args.m, t_val=args.t)
    if args.format == "json":
        text = _dump({"checks": [c.to_json() for c in checks]})
    elif args.format == "csv":
        text = _checks_csv(checks)
    else:
        text = _checks_text(checks)
    _emit(text, args.out)
    return EXIT_FAIL if any(c.status == "fail" for c in checks) else EXIT_OK


def cmd_solve(args) -> int:
    (spec,) = _select(args.algebra)
    if not spec.is_cp:
        raise UsageError(f"{spec.name} has no LCP flow ansatz; choose one of cp1..cp7")
    try:
        flow = solve_flow_parameters(spec)
        co = flow_to_coflow(flow)
    except (SingularSystem, OutOfScope) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    data = {
        "algebra": spec.name,
        "flow": {"alpha": str(flow.alpha), "beta": [str(b) for b in flow.beta],
                 "interval_m2": suites._interval(flow.interval)},
        "coflow": {"gamma": str(co.gamma), "delta": [str(d) for d in co.delta],
                   "interval_m2": suites._interval(co.interval)},
    }
    if args.format == "json":
        text = _dump(data)
    else:
        f, c = data["flow"], data["coflow"]
        text = (
            f"{spec.name}\n"
            f"flow:   alpha = {f['alpha']}; beta = ({', '.join(f['beta'])}); t*m^2 in {_fmt_interval(flow.interval)}\n"
            f"coflow: gamma = {c['gamma']}; delta = ({', '.join(c['delta'])}); t*m^2 in {_fmt_interval(co.interval)}\n"
        )
    _emit(text, args.out)
    return EXIT_OK


def _fmt_interval(bounds) -> str:
    lo, hi = bounds
    return f"({'-inf' if lo is None else lo}, {'inf' if hi is None else hi})"


def cmd_report(args) -> int:
    specs = load_catalog()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "table2.json": _dump(suites.table2(specs)),
        "table3.json": _dump(suites.table3(specs)),
        "ricci_diagonals.json": _dump(suites.ricci_diagonals(specs)),
        "soliton_constants.json": _dump(suites.soliton_constants(specs)),
        "coflow_solutions.json": _dump(suites.coflow_solutions(specs)),
    }
    rows = suites.curvature_rows(specs)
    if args.format == "json":
        files["curvature_tables.json"] = _dump(rows)
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, ["algebra", "i", "j", "k", "l", "coeff_over_C", "which_C"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        files["curvature_tables.csv"] = buf.getvalue()
    for name, text in files.items():
        (out / name).write_text(text)
    print("\n".join(str(out / n) for n in sorted(files)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="g2flow", description="Exact LCP Laplacian flows on solvable Lie algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("text", "json", "csv"), default="text"):
        sp.add_argument("--m", type=_rational, default=Fraction(1), help="value of m for numeric-mode output")
        sp.add_argument("--t", type=_rational, default=Fraction(0), help="time for numeric-mode sampling")
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--out", help="write to this path instead of stdout")

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--algebra", default="all")
    v.add_argument("--what", default="all", help=f"one of {', '.join(suites.SUITES)} or all")
    common(v)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("solve", help="solve the flow ansatz and print flow and coflow parameters")
    s.add_argument("algebra")
    common(s, ("text", "json"))
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("report", help="regenerate the golden tables")
    r.add_argument("--all", action="store_true", help="write every table (the default)")
    common(r, ("csv", "json"), "csv")
    r.set_defaults(func=cmd_report, out=None)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "report" and not args.out:
        args.out = "golden"
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, CatalogError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
