"""Command-line front end: ``covbounds {lower,upper,table,quadrature,verify}``.

Exit codes: 0 success, 1 internal or convergence failure, 2 invalid input,
3 mismatch against the reference tables in ``table --diff``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from .adjacent import ValidityError, quadrature_rule
from .config import Settings
from .lowerbound import DesignSpec, InvalidSpec, combined_lower_bound, fl_bound, lower_bound_given_ell
from .oracle import builtin_design, deep_hole, attaining_points, load_pointset, verify_strength
from .tables import ceil4, diff_table1, diff_table2, table1_rows, table2_rows, truncate
from .upperbound import (antipodal_3_upper, antipodal_5_upper, optimal_upper_4design,
                         search_upper_bound)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_MISMATCH = 0, 1, 2, 3


class UsageError(Exception):
    pass


def low6(x: float) -> str:
    """Lower bounds as shown in tables: truncated to six decimals."""
    return f"{truncate(x):.6f}" if math.isfinite(x) else str(x)


def up4(x: float) -> str:
    return f"{ceil4(x):.4f}" if math.isfinite(x) else str(x)


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(fmt: str, columns: list[str], rows: list[dict], payload=None) -> str:
    if fmt == "json":
        return json.dumps(payload if payload is not None else rows, indent=2, sort_keys=True)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r[c]) for c in columns])
        return buf.getvalue().rstrip("\n")
    lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
    for r in rows:
        lines.append("| " + " | ".join(_fmt(r[c]) for c in columns) + " |")
    return "\n".join(lines)


def _settings(args) -> Settings:
    kw = {"seed": args.seed}
    if args.tol is not None:
        kw["tol"] = args.tol
    if args.budget is not None:
        kw["budget"] = args.budget
    return Settings().with_overrides(**kw)


def _check_ell(ell: float) -> None:
    if not -1.0 <= ell < 0.0:
        raise UsageError("--ell must lie in [-1, 0)")


# --------------------------------------------------------------------------
# commands


def cmd_lower(args) -> tuple[str, int]:
    spec = DesignSpec(args.n, args.tau, args.m)
    _check_ell(args.ell)
    t_fl = fl_bound(spec.n, spec.tau)
    summary = {"n": spec.n, "cardinality": spec.cardinality, "strength": spec.tau,
               "ell": args.ell, "fl_bound": low6(t_fl)}
    if spec.e == 0 or args.ell == -1.0:
        note = "odd strength" if spec.e == 0 else "ell = -1 reduces to the FL bound"
        summary.update(lower_bound=low6(t_fl), note=note)
        payload = dict(summary, raw={"fl_bound": t_fl, "lower_bound": t_fl})
        return render(args.format, list(summary), [summary], payload), EXIT_OK
    if args.assume_ell_le_t1:
        v = lower_bound_given_ell(spec, args.ell)
        summary["lower_bound"] = low6(v)
        payload = dict(summary, raw={"fl_bound": t_fl, "lower_bound": v},
                       hypothesis="ell <= t_1(y)")
        return render(args.format, list(summary), [summary], payload), EXIT_OK
    rep = combined_lower_bound(spec, args.ell, _settings(args))
    summary.update(mC=rep.mC, t_kk_adjacent=low6(rep.t_kk_adjacent),
                   lower_bound=low6(rep.worst_case_bound))
    code = EXIT_OK
    if any(b.status in ("max-iterations", "inconclusive") for b in rep.branches):
        code = EXIT_FAIL
    if args.format == "json":
        return render("json", [], [], {"summary": summary, "report": rep.to_dict()}), code
    text = render(args.format, list(summary), [summary])
    if args.format == "md":
        cols = ["case", "j", "s", "bound", "iterations", "status"]
        rows = [{"case": b.case, "j": b.j, "s": low6(b.s), "bound": low6(b.bound),
                 "iterations": b.iterations, "status": b.status} for b in rep.branches]
        text += "\n\n" + render("md", cols, rows)
    return text, code


def cmd_upper(args) -> tuple[str, int]:
    n, tau, M = args.n, args.tau, args.m
    if args.antipodal and tau == 3:
        res = antipodal_3_upper(n, M)
    elif args.antipodal and tau == 5:
        res = antipodal_5_upper(n, M)
    elif tau == 4 and not args.antipodal:
        DesignSpec(n, tau, M)
        res = optimal_upper_4design(n, M)
    else:
        res = search_upper_bound(DesignSpec(n, tau, M), antipodal=args.antipodal,
                                 settings=_settings(args))
    row = {"n": n, "cardinality": M, "strength": tau, "method": res.method,
           "upper_bound": up4(res.bound), "radius": res.radius}
    return render(args.format, list(row), [row], dict(row, raw=res.to_dict())), EXIT_OK


def _diff_rows(cells) -> list[dict]:
    return [{"row": c.row, "column": c.column, "computed": c.computed,
             "reference": c.reference, "delta": float(c.computed - c.reference), "ok": c.ok}
            for c in cells]


def cmd_table(args) -> tuple[str, int]:
    if args.which == 1:
        raw = table1_rows()
        cols = ["n", "cardinality", "strength", "ell", "fl_bound", "new_bound"]
        shown = [dict(r, fl_bound=low6(r["fl_bound"]), new_bound=low6(r["new_bound"]))
                 for r in raw]
        cells = diff_table1(raw) if args.diff else []
    else:
        raw = table2_rows(_settings(args), workers=args.workers)
        cols = ["n", "cardinality", "mC", "fl_bound", "lower_bound", "upper_bound"]
        shown = [{"n": r["n"], "cardinality": r["cardinality"], "mC": r["mC"],
                  "fl_bound": low6(r["fl_bound"]), "lower_bound": low6(r["lower_bound"]),
                  "upper_bound": up4(r["upper_bound"])} for r in raw]
        cells = diff_table2(raw) if args.diff else []
    code = EXIT_OK
    if args.diff:
        failures = [c for c in cells if not c.ok]
        code = EXIT_MISMATCH if failures else EXIT_OK
        dcols = ["row", "column", "computed", "reference", "delta", "ok"]
        drows = _diff_rows(cells)
        if args.format == "json":
            payload = {"rows": len(shown), "failures": len(failures), "cells": drows}
            return render("json", [], [], payload), code
        text = render(args.format, dcols, drows)
        return text + f"\n{len(shown)} rows, {len(failures)} failures", code
    if args.format == "json":
        payload = [dict(s, raw={k: v for k, v in r.items() if k != "report"})
                   | ({"report": r["report"]} if "report" in r else {})
                   for s, r in zip(shown, raw)]
        return render("json", [], [], payload), code
    return render(args.format, cols, shown), code


def cmd_quadrature(args) -> tuple[str, int]:
    rule = quadrature_rule(args.n, args.k, args.ell)
    d = rule.to_dict()
    if args.format == "json":
        return json.dumps(d, indent=2, sort_keys=True), EXIT_OK
    rows = [{"node": x, "weight": w} for x, w in zip(d["nodes"], d["weights"])]
    return render(args.format, ["node", "weight"], rows), EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    if (args.file is None) == (args.builtin is None):
        raise UsageError("give exactly one of --file and --builtin")
    ps = load_pointset(args.file) if args.file else builtin_design(args.builtin)
    v = verify_strength(ps, args.tau, seed=args.seed)
    row = {"points": len(ps), "dimension": ps.dimension, "antipodal": ps.antipodal,
           "tau": args.tau, "verdict": "pass" if v.passed else "fail",
           "worst_residual": v.worst_residual, "worst_degree": v.worst_degree}
    if args.measure:
        rho, y = deep_hole(ps, seed=args.seed)
        row["rho"] = rho
        row["attaining"] = attaining_points(ps, y)
    return render(args.format, list(row), [row], row), EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "md"], default=None,
                        help="output format (default: json for quadrature, md otherwise)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=None, help="iteration tolerance")
    common.add_argument("--budget", type=int, default=None,
                        help="objective evaluations per optimization")
    common.add_argument("--ell", type=float, default=-0.97)

    p = argparse.ArgumentParser(prog="covbounds",
                                description="Covering radius bounds for spherical designs.")
    sub = p.add_subparsers(dest="command", required=True)

    def design_args(sp):
        sp.add_argument("--n", type=int, required=True, help="dimension")
        sp.add_argument("--tau", type=int, required=True, help="strength")
        sp.add_argument("--m", "--cardinality", dest="m", type=int, required=True,
                        help="number of points")

    sp = sub.add_parser("lower", parents=[common], help="lower bounds on rho(C)")
    design_args(sp)
    sp.add_argument("--assume-ell-le-t1", action="store_true",
                    help="report the bound valid when ell <= t_1(y)")
    sp.set_defaults(func=cmd_lower)

    sp = sub.add_parser("upper", parents=[common], help="upper bounds on rho(C)")
    design_args(sp)
    sp.add_argument("--antipodal", action="store_true")
    sp.set_defaults(func=cmd_upper)

    sp = sub.add_parser("table", parents=[common], help="regenerate a reference table")
    sp.add_argument("which", type=int, choices=[1, 2])
    sp.add_argument("--diff", action="store_true", help="compare against the reference values")
    sp.add_argument("--workers", type=int, default=None, help="processes for table 2 rows")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("quadrature", parents=[common], help="dump the adjacent quadrature rule")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(func=cmd_quadrature)

    sp = sub.add_parser("verify", parents=[common], help="check the strength of a point set")
    sp.add_argument("--file", default=None, help="text file: 'n m' header, then m rows")
    sp.add_argument("--builtin", default=None, help="e.g. 'cross-polytope(4)' or 'icosahedron'")
    sp.add_argument("--tau", type=int, required=True)
    sp.add_argument("--measure", action="store_true", help="also measure rho(C)")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.format is None:
        args.format = "json" if args.command == "quadrature" else "md"
    try:
        text, code = args.func(args)
    except (InvalidSpec, ValidityError, UsageError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
