"""Command-line front end.

Every subcommand writes one structured document (JSON by default) to
standard output or to ``--output``. Exit codes: 0 success, 1 usage error,
2 data error, 3 numeric error. On failure nothing is written to standard
output and a diagnostic goes to standard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import chart
from .decomposition import Constraints, Decomposition, LinearFit, decompose, fit_linear
from .errors import DataError, NumericError, UsageError, XPointError
from .intervention import compare, plan_target
from .model import AffineFunction, NonlinearChoiceModel, solve_argmax, xpoint_affine
from .studies import (
    BUILTIN_CASES,
    CaseStudyParams,
    SyntheticSpec,
    builtin_case,
    format_dataset,
    generate_synthetic,
    load_case_params,
    load_dataset,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3
SIGNIFICANT_DIGITS = 9


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _num(value):
    """Round floats to 9 significant digits, recursively."""
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return float(f"{value:.{SIGNIFICANT_DIGITS}g}") + 0.0
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, dict):
        return {k: _num(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_num(v) for v in value]
    return value


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    return str(value)


def _flatten(doc, prefix=""):
    if isinstance(doc, dict):
        for k, v in doc.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(doc, list):
        for i, v in enumerate(doc):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, doc


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _pretty(doc) -> str:
    width = max((len(k) for k, _ in _flatten(doc)), default=0)
    return "".join(f"{k:<{width}}  {_fmt(v)}\n" for k, v in _flatten(doc))


def _render(args, doc, table=None) -> str:
    doc = _num(doc)
    if args.format == "table":
        if table is not None:
            return _csv(*table)
        return _csv(("key", "value"), _flatten(doc))
    if args.pretty:
        return _pretty(doc)
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _write(path, text) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc.strerror or exc}") from None


# decomposition sources

def _add_source_flags(p):
    p.add_argument("--case", choices=None, help="built-in case id: " + ", ".join(BUILTIN_CASES))
    p.add_argument("--params", help="case parameter document (JSON)")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--eps-u0", type=float)
    p.add_argument("--eps-n0", type=float)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)


def _resolve_params(ref: str) -> CaseStudyParams:
    if ref in BUILTIN_CASES:
        return builtin_case(ref)
    path = Path(ref)
    if path.suffix and path.exists():
        try:
            return load_case_params(path)
        except OSError as exc:
            raise DataError(f"cannot read {path}: {exc}") from None
    return builtin_case(ref)


def _source(args) -> tuple[dict, Decomposition]:
    base = {}
    if args.case:
        base = builtin_case(args.case).to_dict()
    elif args.params:
        base = _resolve_params(args.params).to_dict()
    for key in ("alpha", "beta", "eps_u0", "eps_n0"):
        value = getattr(args, key)
        if value is not None:
            base[key] = value
    missing = [k for k in ("alpha", "beta", "eps_u0", "eps_n0") if k not in base]
    if missing:
        flags = ", ".join("--" + k.replace("_", "-") for k in missing)
        raise UsageError(f"need --case, --params, or all of: {flags}")
    dec = decompose(LinearFit(base["alpha"], base["beta"]),
                    Constraints(base["eps_u0"], base["eps_n0"], args.lam))
    source = {"id": base.get("id", "custom"), "alpha": base["alpha"], "beta": base["beta"],
              "eps_u0": base["eps_u0"], "eps_n0": base["eps_n0"], "lambda": args.lam}
    return source, dec


def _rules(dec: Decomposition) -> dict:
    c = dec.constraints
    return {
        "utility_slope": f"{_fmt(c.lam)}*(eps - {_fmt(c.eps_u0)})/({_fmt(c.eps_n0)} - {_fmt(c.eps_u0)})",
        "norm_slope": f"{_fmt(c.lam)}*(eps - {_fmt(c.eps_n0)})/({_fmt(c.eps_n0)} - {_fmt(c.eps_u0)})",
        "utility_intercept": "0",
        "norm_intercept": f"{_fmt(c.lam)}*({_fmt(dec.alpha)}*eps + {_fmt(dec.beta)})",
    }


def _evaluate(dec: Decomposition, eps: float) -> dict:
    u, n = dec.affine_at(eps)
    return {"eps": eps, "u_slope": u.slope, "u_intercept": u.intercept,
            "n_slope": n.slope, "n_intercept": n.intercept, "xpoint": xpoint_affine(u, n)}


def _coefficients(dec: Decomposition) -> dict:
    c = dec.coefficients
    return {"kappa_u": c.kappa_u, "lambda_u": c.lambda_u,
            "kappa_n": c.kappa_n, "lambda_n": c.lambda_n}


EVAL_COLUMNS = ("eps", "u_slope", "u_intercept", "n_slope", "n_intercept", "xpoint")


# subcommands

def cmd_fit(args):
    try:
        dataset = load_dataset(args.input, args.env_col, args.action_col, args.delimiter,
                               smoothing_weights=args.smooth)
    except OSError as exc:
        raise DataError(f"cannot read {args.input}: {exc.strerror or exc}") from None
    f = fit_linear(dataset)
    doc = {"command": "fit", "alpha": f.alpha, "beta": f.beta, "r_squared": f.r_squared,
           "residual_sse": f.residual_sse, "n_samples": f.n_samples}
    return _render(args, doc)


def cmd_decompose(args):
    source, dec = _source(args)
    evaluations = [_evaluate(dec, e) for e in args.eps or ()]
    doc = {"command": "decompose", "source": source, "coefficients": _coefficients(dec),
           "rules": _rules(dec), "evaluations": evaluations}
    table = (EVAL_COLUMNS, [[ev[k] for k in EVAL_COLUMNS] for ev in evaluations])
    return _render(args, doc, table)


def cmd_xpoint(args):
    u = AffineFunction(args.u_slope, args.u_intercept)
    n = AffineFunction(args.n_slope, args.n_intercept)
    x = xpoint_affine(u, n)
    doc = {"command": "xpoint", "xpoint": x, "value": u(x)}
    return _render(args, doc)


def cmd_argmax(args):
    # x - na >= 10 and x >= 10 force the FOC negative, so this always brackets
    upper = args.upper if args.upper is not None else max(args.na, args.lower) + 10.0
    if args.lower >= upper:
        raise UsageError(f"inverted or empty bracket: lower={args.lower} upper={upper}")
    model = NonlinearChoiceModel(args.ua, args.nb, args.na, args.noff, args.lower, upper)
    res = solve_argmax(model, xtol=args.xtol)
    u = model.utility(res.x)
    n = model.norm(res.x)
    doc = {"command": "argmax", "x_vmax": res.x, "foc_residual": res.foc_residual,
           "relative_residual": res.relative_residual, "bracket": list(res.bracket),
           "iterations": res.iterations, "utility": u, "norm": n, "value": u + n}
    return _render(args, doc)


def cmd_compare(args):
    before = _resolve_params(args.before)
    after = _resolve_params(args.after)
    report = compare(before.decomposition(args.lam), after.decomposition(args.lam),
                     args.eps_ref, rtol=args.tolerance)
    doc = {"command": "compare", "before_case": before.id, "after_case": after.id}
    doc.update(report.as_dict())
    return _render(args, doc)


def cmd_plan(args):
    source, dec = _source(args)
    plan = plan_target(dec, args.target_alpha, args.target_beta, args.eps_ref,
                       args.target_u_slope, args.target_n_slope)
    doc = {"command": "plan", "source": source}
    doc.update(plan.as_dict())
    return _render(args, doc)


def cmd_simulate(args):
    if args.grid_values:
        grid = args.grid_values
    else:
        start, stop, num = args.grid
        if num != int(num) or num < 2:
            raise UsageError("--grid NUM must be an integer >= 2")
        grid = np.linspace(start, stop, int(num)).tolist()
    spec = SyntheticSpec(args.alpha, args.beta, tuple(grid), args.eps_u0, args.eps_n0,
                         args.lam, args.noise_sd, args.seed)
    dataset = generate_synthetic(spec)
    if args.format == "table":
        return format_dataset(dataset)
    doc = {"command": "simulate", "alpha": spec.alpha, "beta": spec.beta,
           "noise_sd": spec.noise_sd, "seed": spec.seed,
           "samples": [list(s) for s in dataset.samples]}
    return _render(args, doc)


def reproduce_document(lam: float = 1.0) -> dict:
    """Both case studies end to end: decompositions and comparisons."""
    cases = {}
    for case_id, params in BUILTIN_CASES.items():
        dec = params.decomposition(lam)
        cases[case_id] = {
            "description": params.description,
            "alpha": params.alpha, "beta": params.beta,
            "eps_u0": params.eps_u0, "eps_n0": params.eps_n0,
            "env_unit": params.env_unit, "action_unit": params.action_unit,
            "coefficients": _coefficients(dec),
            "rules": _rules(dec),
            "at_eps_ref": _evaluate(dec, params.eps_ref_default),
        }
    comparisons = []
    for before, after in (("power-before", "power-after"), ("co2-high", "co2-low")):
        b, a = BUILTIN_CASES[before], BUILTIN_CASES[after]
        report = compare(b.decomposition(lam), a.decomposition(lam), b.eps_ref_default)
        entry = {"before_case": before, "after_case": after}
        entry.update(report.as_dict())
        comparisons.append(entry)
    return {"command": "reproduce", "lambda": lam, "cases": cases, "comparisons": comparisons}


def cmd_reproduce(args):
    return _render(args, reproduce_document(args.lam))


def cmd_plot(args):
    source, dec = _source(args)
    if not args.eps:
        raise UsageError("plot needs at least one --eps value")
    try:
        series = chart.line_series(dec, args.eps, args.x_min, args.x_max, args.points)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "svg":
        body = chart.render_svg(series, title=f"utility and norm lines: {source['id']}")
    elif args.format == "table":
        body = _csv(("eps", "x", "u", "n"), chart.table_rows(series))
    else:
        body = json.dumps(_num({"command": "plot", "source": source, "series": [
            {"eps": s["eps"], "xpoint": s["xpoint"], "x": s["x"].tolist(),
             "u": s["u_values"].tolist(), "n": s["n_values"].tolist()} for s in series]}),
            indent=2) + "\n"
    if args.output is None:
        return body
    _write(args.output, body)
    summary = {"command": "plot", "output": str(args.output), "format": args.format,
               "markers": [{"eps": s["eps"], "xpoint": s["xpoint"]} for s in series]}
    args.output = None
    args.format = "doc"
    return _render(args, summary)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--output", help="write the result here instead of stdout")
    common.add_argument("--tolerance", type=float, default=1e-9,
                        help="relative tolerance for 'unchanged' verdicts (default 1e-9)")
    common.add_argument("--pretty", action="store_true", help="human-readable key/value listing")
    fmt = _Parser(add_help=False)
    fmt.add_argument("--format", choices=("doc", "table"), default="doc")

    parser = _Parser(prog="xpoint", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fit", parents=[common, fmt], help="least-squares action line from a file")
    p.add_argument("input")
    p.add_argument("--env-col", required=True)
    p.add_argument("--action-col", required=True)
    p.add_argument("--delimiter", default=",")
    p.add_argument("--smooth", type=float, nargs="+", metavar="W",
                   help="weights for a trailing moving average of the environment column")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("decompose", parents=[common, fmt], help="utility/norm decomposition")
    _add_source_flags(p)
    p.add_argument("--eps", type=float, nargs="+", action="extend")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("xpoint", parents=[common, fmt], help="intersection of two lines")
    p.add_argument("--u-slope", type=float, required=True)
    p.add_argument("--u-intercept", type=float, default=0.0)
    p.add_argument("--n-slope", type=float, required=True)
    p.add_argument("--n-intercept", type=float, default=0.0)
    p.set_defaults(func=cmd_xpoint)

    p = sub.add_parser("argmax", parents=[common, fmt], help="maximise the nonlinear value function")
    p.add_argument("--ua", type=float, required=True, help="utility exponent, in (0, 1)")
    p.add_argument("--nb", type=float, required=True, help="norm exponent, > 1")
    p.add_argument("--na", type=float, default=0.0, help="norm peak location")
    p.add_argument("--noff", type=float, default=0.0, help="norm offset")
    p.add_argument("--lower", type=float, default=0.0)
    p.add_argument("--upper", type=float, default=None,
                   help="upper end of the action domain (default: max(na, lower) + 10)")
    p.add_argument("--xtol", type=float, default=1e-12)
    p.set_defaults(func=cmd_argmax)

    p = sub.add_parser("compare", parents=[common, fmt], help="classify a before/after change")
    p.add_argument("before", help="case id or parameter document")
    p.add_argument("after", help="case id or parameter document")
    p.add_argument("--eps-ref", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("plan", parents=[common, fmt], help="single-lever moves to a target line")
    _add_source_flags(p)
    p.add_argument("--target-alpha", type=float, required=True)
    p.add_argument("--target-beta", type=float, required=True)
    p.add_argument("--eps-ref", type=float, required=True)
    p.add_argument("--target-u-slope", type=float)
    p.add_argument("--target-n-slope", type=float)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("simulate", parents=[common], help="synthetic samples on a noisy line")
    p.add_argument("--format", choices=("doc", "table"), default="table")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--eps-u0", type=float, default=0.0)
    p.add_argument("--eps-n0", type=float, default=1.0)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    grid = p.add_mutually_exclusive_group(required=True)
    grid.add_argument("--grid", type=float, nargs=3, metavar=("START", "STOP", "NUM"))
    grid.add_argument("--grid-values", type=float, nargs="+")
    p.add_argument("--noise-sd", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reproduce", parents=[common, fmt], help="run both built-in case studies")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("plot", parents=[common], help="plot data or SVG chart of the lines")
    _add_source_flags(p)
    p.add_argument("--format", choices=("doc", "table", "svg"), default="table")
    p.add_argument("--eps", type=float, nargs="+", action="extend", required=True)
    p.add_argument("--x-min", type=float)
    p.add_argument("--x-max", type=float)
    p.add_argument("--points", type=int, default=101)
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        text = args.func(args)
        if args.output is not None:
            _write(args.output, text)
        else:
            sys.stdout.write(text)
    except UsageError as exc:
        print(f"xpoint: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"xpoint: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NumericError, XPointError) as exc:
        print(f"xpoint: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
