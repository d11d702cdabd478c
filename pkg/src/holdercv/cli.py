"""Command-line front end.

Subcommands: eval, solve, classify, sweep, table1. Problems are read from
a JSON spec file; results go to stdout (or ``--out``) as CSV or JSON.

Exit codes: 0 ok, 2 spec error, 3 evaluation error, 4 solver diverged,
5 table mismatch.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .bvp import SolverConfig, SolveReport, solve_bvp
from .centrality import centrality_alpha_sweep
from .core import VariationalProblem
from .errors import HolderCVError, SolverDiverged, SpecError
from .problems import (
    TABLE1_ROWS,
    CatalogEntry,
    catalog_entry,
    constrained_slope,
    fig1_bundle,
    fit_closed_form,
    line,
    table1_matrix,
)
from .variational import classify

EXIT_OK, EXIT_SPEC, EXIT_EVAL, EXIT_DIVERGED, EXIT_MISMATCH = 0, 2, 3, 4, 5

SPEC_KEYS = {"problem", "a", "b", "ua", "ub", "alpha", "params", "solver"}
REQUIRED_KEYS = ("problem", "a", "b", "ua", "ub", "alpha")
PARAM_KEYS = {
    "arclength": set(),
    "brachistochrone": set(),
    "snell_linear": set(),
    "snell_logistic": {"beta", "x0"},
    "custom": {"hook"},
}


@dataclass(frozen=True)
class ProblemSpec:
    entry: CatalogEntry
    problem: VariationalProblem
    solver: SolverConfig
    sha256: str


def load_spec(path) -> ProblemSpec:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise SpecError(f"{path}: {exc.strerror}") from None
    try:
        data = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise SpecError(f"{path}: not UTF-8 ({exc.reason})") from None
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise SpecError(f"{path}: top level must be a JSON object")
    unknown = set(data) - SPEC_KEYS
    if unknown:
        raise SpecError(f"{path}: unknown keys {sorted(unknown)}")
    missing = [k for k in REQUIRED_KEYS if k not in data]
    if missing:
        raise SpecError(f"{path}: missing keys {missing}")
    name = data["problem"]
    if not isinstance(name, str) or name.lower() not in PARAM_KEYS:
        raise SpecError(f"{path}: unknown problem {name!r}; choose from {sorted(PARAM_KEYS)}")
    params = data.get("params", {}) or {}
    if not isinstance(params, dict):
        raise SpecError(f"{path}: params must be an object")
    bad = set(params) - PARAM_KEYS[name.lower()]
    if bad:
        raise SpecError(f"{path}: unknown params {sorted(bad)} for {name}")
    nums = {}
    for k in ("a", "b", "ua", "ub", "alpha"):
        v = data[k]
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not np.isfinite(v):
            raise SpecError(f"{path}: {k} must be a finite number")
        nums[k] = float(v)
    solver = data.get("solver", {}) or {}
    if not isinstance(solver, dict):
        raise SpecError(f"{path}: solver must be an object")
    known = {f.name for f in fields(SolverConfig)}
    bad = set(solver) - known
    if bad:
        raise SpecError(f"{path}: unknown solver keys {sorted(bad)}")
    try:
        entry = catalog_entry(name, **params)
        problem = VariationalProblem(entry.feature, **nums)
        config = SolverConfig(**solver)
    except SpecError:
        raise
    except (TypeError, ValueError) as exc:
        raise SpecError(f"{path}: {exc}") from None
    return ProblemSpec(entry, problem, config, hashlib.sha256(raw).hexdigest())


# output helpers ---------------------------------------------------------------


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(stream, header, rows):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])


def csv_text(header, rows):
    buf = io.StringIO()
    write_csv(buf, header, rows)
    return buf.getvalue()


def json_text(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(args, header, rows, extra=None):
    if args.format == "json":
        obj = {"columns": list(header), "rows": [list(r) for r in rows]}
        if extra:
            obj.update(extra)
        text = json_text(obj)
    else:
        text = csv_text(header, rows)
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _parse_alphas(args, default):
    if args.alphas:
        try:
            return [float(t) for t in args.alphas.split(",") if t.strip()]
        except ValueError:
            raise SpecError(f"bad --alphas list {args.alphas!r}") from None
    if args.alpha is not None:
        return [args.alpha]
    return [default]


def select_curve(spec: ProblemSpec, name: str):
    """``chord``, ``line:S[,D]`` (u = S x + D) or a closed-form family name."""
    p = spec.problem
    if name == "chord":
        return p.chord()
    if name.startswith("line:"):
        try:
            nums = [float(t) for t in name[5:].split(",")]
        except ValueError:
            raise SpecError(f"bad line curve {name!r}") from None
        if len(nums) not in (1, 2):
            raise SpecError(f"line curve takes S or S,D, got {name!r}")
        s, d = nums[0], nums[1] if len(nums) == 2 else p.ua - nums[0] * p.a
        return line(p.a, p.b, s, d)
    return fit_closed_form(spec.entry, name, p)


# commands -----------------------------------------------------------------------


def cmd_eval(args):
    spec = load_spec(args.spec)
    alphas = sorted(_parse_alphas(args, spec.problem.alpha))
    curve = select_curve(spec, args.curve)
    rows = centrality_alpha_sweep(spec.problem, curve, alphas, nodes=args.grid)
    _emit(args, ("alpha", "C_alpha"), rows)
    return EXIT_OK


def cmd_sweep(args):
    if args.fig1:
        _emit(args, ("alpha", "slope", "intercept"), fig1_bundle())
        return EXIT_OK
    if args.spec is None:
        raise SpecError("sweep needs --spec (or --fig1)")
    if args.steps < 2:
        raise SpecError("--steps must be >= 2")
    spec = load_spec(args.spec)
    alphas = np.linspace(args.alpha_min, args.alpha_max, args.steps).tolist()
    curve = select_curve(spec, args.curve)
    values = centrality_alpha_sweep(spec.problem, curve, alphas, nodes=args.grid)
    rows = []
    prev = None
    for a, c in values:
        slope = constrained_slope(a) if a < 1 else None
        # equality within 1e-12 is the constant-feature case
        rows.append((a, c, slope, prev is None or c >= prev - 1e-12 * abs(prev)))
        prev = c
    _emit(args, ("alpha", "C_alpha", "constrained_slope", "monotone"), rows)
    return EXIT_OK


def _classification_rows(cls):
    return [(i, v, cls.verdict.value) for i, v in enumerate(cls.sample_values)]


def cmd_classify(args):
    spec = load_spec(args.spec)
    curve = select_curve(spec, args.curve)
    cls = classify(spec.problem, curve, seed=args.seed, nodes=args.grid)
    _emit(
        args,
        ("sample", "second_variation", "verdict"),
        _classification_rows(cls),
        extra={"verdict": cls.verdict.value, "tolerance": cls.tolerance, "seed": args.seed},
    )
    return EXIT_OK


def report_dict(report: SolveReport, spec: ProblemSpec, config: SolverConfig, seed: int):
    p = report.problem
    return {
        "converged": report.converged,
        "iterations": report.iterations,
        "final_residual_rms": report.final_residual_rms,
        "trace": list(report.trace),
        "classification": report.classification.to_dict() if report.classification else None,
        "problem": {
            "name": spec.entry.name,
            "params": dict(spec.entry.params),
            "a": p.a,
            "b": p.b,
            "ua": p.ua,
            "ub": p.ub,
            "alpha": p.alpha,
        },
        "provenance": {"spec_sha256": spec.sha256, "seed": seed, "config": config.to_dict()},
    }


def cmd_solve(args):
    spec = load_spec(args.spec)
    config = spec.solver
    if args.grid is not None:
        try:
            config = SolverConfig(**{**config.to_dict(), "grid_points": args.grid})
        except ValueError as exc:
            raise SpecError(str(exc)) from None
    code = EXIT_OK
    try:
        report = solve_bvp(spec.problem, config, seed=args.seed)
    except SolverDiverged as exc:
        from .bvp import effective_problem

        report = SolveReport(
            exc.best, exc.residual_rms, exc.iterations, False, None,
            effective_problem(spec.problem, config), tuple(exc.trace),
        )
        print(f"solver diverged: {exc}", file=sys.stderr)
        code = EXIT_DIVERGED
    x, u = report.curve.values()
    curve_csv = csv_text(("x", "u"), zip(x.tolist(), u.tolist()))
    report_json = json_text(report_dict(report, spec, config, args.seed))
    if args.out:
        out = Path(args.out)
        out.write_text(report_json, encoding="utf-8")
        out.with_suffix(".csv").write_text(curve_csv, encoding="utf-8")
    else:
        sys.stdout.write(curve_csv if args.format == "csv" else report_json)
    return code


def cmd_table1(args):
    rows = []
    mismatch = False
    for row, case in table1_matrix():
        cls = classify(case.problem(), case.curve(), seed=args.seed)
        ok = cls.verdict == case.expected
        mismatch |= not ok
        rows.append((case.alpha, case.branch, case.slope, case.expected.value, cls.verdict.value, ok))
    for row in TABLE1_ROWS:
        if row.space == "Complex":
            rows.append((row.alpha_range, row.ode_branch, row.slope_condition, row.expected_verdict, "not-executed", None))
    _emit(args, ("alpha", "branch", "slope", "expected", "computed", "match"), rows)
    return EXIT_MISMATCH if mismatch else EXIT_OK


# parser ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="holdercv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec_required=True):
        p.add_argument("--spec", required=spec_required, help="problem spec JSON file")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--grid", type=int, default=None, help="quadrature nodes / solver grid points")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("eval", help="evaluate C_alpha on a curve")
    common(p)
    p.add_argument("--alpha", type=float)
    p.add_argument("--alphas", help="comma-separated alpha list")
    p.add_argument("--curve", default="chord", help="chord, line:S[,D], or a closed-form family name")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("solve", help="solve the boundary value problem")
    common(p)
    p.set_defaults(func=cmd_solve, format="json")

    p = sub.add_parser("classify", help="second-variation test on a curve")
    common(p)
    p.add_argument("--curve", default="chord")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sweep", help="C_alpha over an alpha range")
    common(p, spec_required=False)
    p.add_argument("--alpha-min", type=float, default=-5.0)
    p.add_argument("--alpha-max", type=float, default=5.0)
    p.add_argument("--steps", type=int, default=21)
    p.add_argument("--curve", default="chord")
    p.add_argument("--fig1", action="store_true", help="emit the slope-constrained line bundle through (1, 2)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("table1", help="reproduce the shortest-path classification table")
    common(p, spec_required=False)
    p.set_defaults(func=cmd_table1)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except (HolderCVError, ValueError) as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVAL


if __name__ == "__main__":
    sys.exit(main())
