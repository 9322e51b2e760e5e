"""Command-line interface.

Four subcommands: ``fit`` estimates the symmetric relationship from a CSV
file, ``compare`` puts the estimators side by side in solved form,
``bootstrap`` attaches percentile confidence intervals, and ``simulate``
generates lattice data or runs a Monte Carlo study from a JSON config.

Exit codes: 0 on success, 1 for data or domain errors, 2 for usage errors.
Text output prints every number with 12 significant digits, matching the
values in the JSON document exactly to that precision.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from impartial._backend import BACKEND
from impartial.data import parse_csv, summarize
from impartial.diagnostics import diagnostics_report
from impartial.errors import ImpartialError
from impartial.fit import impartial_fit, ols_single, orthogonal_fit, solve_for
from impartial.resample import bootstrap
from impartial.simulate import SimConfig, generate_lattice, monte_carlo

# condition estimates above this trigger a near-singularity warning
NEAR_SINGULAR_CONDITION = 1e10


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _num(x: float):
    # JSON value: finite floats pass through, NaN and infinities become null
    x = float(x)
    return x if math.isfinite(x) else None


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _seed_int(text: str) -> int:
    return int(text, 0)


def _fit_warnings(f) -> list[str]:
    warnings = []
    if f.exact:
        warnings.append(
            "variables satisfy the relationship exactly; coefficients are "
            "the unit null direction of the covariance matrix"
        )
    if not f.sign_consistent:
        warnings.append(
            "precision-matrix rows imply contradictory coefficient signs; "
            "reported signs follow the reference row"
        )
    if math.isfinite(f.condition_estimate) and f.condition_estimate > NEAR_SINGULAR_CONDITION:
        warnings.append(
            "covariance matrix is near-singular "
            f"(condition estimate {f.condition_estimate:.3g})"
        )
    return warnings


def _solved_mapping(solved) -> dict:
    return {
        "intercept": _num(solved.intercept),
        "slopes": {nm: _num(v) for nm, v in zip(solved.names, solved.slopes)},
    }


def _diagnostics_mapping(f, report) -> dict:
    doc = {
        "exact": f.exact,
        "reference": f.names[f.reference_row],
        "sign_consistent": f.sign_consistent,
        "condition_estimate": _num(f.condition_estimate),
        "precision_diagonal": None,
        "r_squared": None,
        "residual_variances": None,
        "coeff_times_residual_sd": None,
        "partial_correlations": None,
        "sign_violations": [list(pair) for pair in report.sign_violations],
    }
    if f.precision_diag is not None:
        doc["precision_diagonal"] = {
            nm: _num(v) for nm, v in zip(f.names, f.precision_diag)
        }
    if report.r_squared is not None:
        doc["r_squared"] = {nm: _num(v) for nm, v in zip(f.names, report.r_squared)}
    if report.residual is not None:
        doc["residual_variances"] = {
            nm: _num(v) for nm, v in zip(f.names, report.residual.residual_variances)
        }
        doc["coeff_times_residual_sd"] = {
            nm: _num(v)
            for nm, v in zip(f.names, report.residual.coeff_times_residual_sd)
        }
    if report.partial_correlations is not None:
        full = report.partial_correlations.to_array()
        doc["partial_correlations"] = {
            "names": list(f.names),
            "matrix": [[_num(v) for v in row] for row in full],
        }
    return doc


def _print_mapping(label: str, mapping: dict | None, out) -> None:
    if mapping is None:
        print(f"{label}: (not defined)", file=out)
        return
    print(f"{label}:", file=out)
    for key, value in mapping.items():
        text = _fmt(value) if isinstance(value, float) else value
        print(f"  {key}: {text}", file=out)


def _emit_fit_text(doc: dict, out) -> None:
    print(f"command: {doc['command']}", file=out)
    print(f"n: {doc['n']}", file=out)
    print(f"p: {doc['p']}", file=out)
    form = doc["symmetric_form"]
    print("symmetric form (sum of coefficient * variable = constant):", file=out)
    for nm, coef in zip(form["names"], form["coefficients"]):
        print(f"  {nm}: {_fmt(coef)}", file=out)
    print(f"  constant: {_fmt(form['constant'])}", file=out)
    diag = doc["diagnostics"]
    print(f"reference variable: {diag['reference']}", file=out)
    print(f"sign consistent: {'yes' if diag['sign_consistent'] else 'no'}", file=out)
    cond = diag["condition_estimate"]
    print(
        f"condition estimate: {_fmt(cond) if cond is not None else 'infinite'}",
        file=out,
    )
    _print_mapping("precision diagonal", diag["precision_diagonal"], out)
    _print_mapping("R^2", diag["r_squared"], out)
    _print_mapping("residual variances", diag["residual_variances"], out)
    _print_mapping("coefficient * residual sd", diag["coeff_times_residual_sd"], out)
    pc = diag["partial_correlations"]
    if pc is None:
        print("partial correlations: (not defined)", file=out)
    else:
        print("partial correlations:", file=out)
        names = pc["names"]
        for i in range(len(names)):
            for j in range(i + 1, len(names)):
                print(f"  {names[i]}~{names[j]}: {_fmt(pc['matrix'][i][j])}", file=out)
    if diag["sign_violations"]:
        pairs = ", ".join(f"{a}~{b}" for a, b in diag["sign_violations"])
        print(f"sign violations: {pairs}", file=out)
    for target, solved in doc["solved"].items():
        print(f"solved for {target}:", file=out)
        print(f"  intercept: {_fmt(solved['intercept'])}", file=out)
        for nm, v in solved["slopes"].items():
            print(f"  {nm}: {_fmt(v)}", file=out)
    _emit_warnings(doc, out)


def _emit_warnings(doc: dict, out) -> None:
    if doc["warnings"]:
        print("warnings:", file=out)
        for w in doc["warnings"]:
            print(f"  - {w}", file=out)
    else:
        print("warnings: (none)", file=out)


def _emit(doc: dict, args, text_renderer) -> int:
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        text_renderer(doc, sys.stdout)
    return 0


def _cmd_fit(args) -> int:
    d = parse_csv(_read_input(args.input))
    s = summarize(d)
    f = impartial_fit(s)
    report = diagnostics_report(f, s)
    solved = {}
    if args.solve_for is not None:
        solved[args.solve_for] = _solved_mapping(solve_for(f, args.solve_for))
    doc = {
        "command": "fit",
        "n": s.n,
        "p": s.p,
        "symmetric_form": {
            "names": list(f.names),
            "coefficients": [_num(v) for v in f.coefficients],
            "constant": _num(f.constant),
        },
        "solved": solved,
        "diagnostics": _diagnostics_mapping(f, report),
        "warnings": _fit_warnings(f),
        "seed": None,
    }
    return _emit(doc, args, _emit_fit_text)


def _emit_compare_text(doc: dict, out) -> None:
    print(f"command: {doc['command']}", file=out)
    print(f"n: {doc['n']}", file=out)
    print(f"p: {doc['p']}", file=out)
    print(f"solve for: {doc['solve_for']}", file=out)
    for est, solved in doc["estimates"].items():
        print(f"{est}:", file=out)
        print(f"  intercept: {_fmt(solved['intercept'])}", file=out)
        for nm, v in solved["slopes"].items():
            print(f"  {nm}: {_fmt(v)}", file=out)
    print("least-squares bounds (directed regressions):", file=out)
    for nm, pair in doc["ols_bounds"].items():
        if pair is None:
            print(f"  {nm}: (undefined)", file=out)
        else:
            print(f"  {nm}: [{_fmt(pair[0])}, {_fmt(pair[1])}]", file=out)
    _emit_warnings(doc, out)


def _cmd_compare(args) -> int:
    d = parse_csv(_read_input(args.input))
    s = summarize(d)
    f = impartial_fit(s)
    target = args.solve_for
    solved_imp = solve_for(f, target)
    t = s.index_of(target)
    fit_ols = ols_single(s, target)
    solved_orth = solve_for(orthogonal_fit(s), target)

    bounds = {}
    for pos, nm in enumerate(fit_ols.names):
        forward = float(fit_ols.slopes[pos])
        rev = ols_single(s, nm)
        coef = float(rev.slopes[rev.names.index(target)])
        if coef == 0.0:
            bounds[nm] = None
        else:
            reverse = 1.0 / coef
            bounds[nm] = [min(forward, reverse), max(forward, reverse)]

    doc = {
        "command": "compare",
        "n": s.n,
        "p": s.p,
        "solve_for": s.names[t],
        "estimates": {
            "impartial": _solved_mapping(solved_imp),
            "ols": {
                "intercept": _num(fit_ols.intercept),
                "slopes": {
                    nm: _num(v) for nm, v in zip(fit_ols.names, fit_ols.slopes)
                },
            },
            "orthogonal": _solved_mapping(solved_orth),
        },
        "ols_bounds": bounds,
        "warnings": _fit_warnings(f),
        "seed": None,
    }
    return _emit(doc, args, _emit_compare_text)


def _emit_bootstrap_text(doc: dict, out) -> None:
    print(f"command: {doc['command']}", file=out)
    print(f"n: {doc['n']}", file=out)
    print(f"p: {doc['p']}", file=out)
    print(f"replicates: {doc['replicates']}", file=out)
    print(f"level: {_fmt(doc['level'])}", file=out)
    print(f"seed: {doc['seed']}", file=out)
    print(f"failed: {doc['failed']}", file=out)
    print(f"unreliable: {'yes' if doc['unreliable'] else 'no'}", file=out)
    for name, row in doc["intervals"].items():
        print(f"{name}:", file=out)
        print(f"  point: {_fmt(row['point'])}", file=out)
        print(f"  lower: {_fmt(row['lower'])}", file=out)
        print(f"  upper: {_fmt(row['upper'])}", file=out)
    _emit_warnings(doc, out)


def _cmd_bootstrap(args) -> int:
    d = parse_csv(_read_input(args.input))
    result = bootstrap(
        d,
        replicates=args.replicates,
        level=args.level,
        seed=args.seed,
        target=args.solve_for,
    )
    warnings = []
    if result.unreliable:
        warnings.append(
            f"{result.failed} of {result.replicates} replicates failed "
            "(at least 1 in 20); intervals may be unreliable"
        )
    intervals = {
        name: {
            "point": _num(result.point[i]),
            "lower": _num(result.lower[i]),
            "upper": _num(result.upper[i]),
        }
        for i, name in enumerate(result.parameters)
    }
    doc = {
        "command": "bootstrap",
        "n": d.n,
        "p": d.p,
        "replicates": result.replicates,
        "level": result.level,
        "failed": result.failed,
        "unreliable": result.unreliable,
        "intervals": intervals,
        "warnings": warnings,
        "seed": result.seed,
    }
    return _emit(doc, args, _emit_bootstrap_text)


def _cmd_simulate(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        cfg = SimConfig.from_mapping(json.load(fh))
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.monte_carlo is not None:
        cfg = replace(cfg, replicates=args.monte_carlo)
        result = monte_carlo(cfg)
        print("command: simulate")
        print(f"replicates: {result.replicates}")
        print(f"seed: {result.seed}")
        print(f"target: {result.target}")
        for est, stats in result.estimators.items():
            print(f"{est}: (failed {stats.failed})")
            for i, nm in enumerate(stats.parameters):
                print(f"  {nm}: mean {_fmt(stats.mean[i])} sd {_fmt(stats.sd[i])}")
        print("reliability:")
        for nm, v in zip(result.names, result.reliability_mean):
            print(f"  {nm}: {_fmt(v)}")
        return 0
    sample = generate_lattice(cfg, stream=0)
    print(",".join(sample.observed.names))
    for row in sample.observed.values:
        print(",".join(repr(float(v)) for v in row))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="impartial",
        description=(
            "Fit a linear relationship to noisy data without privileging "
            f"any variable (kernel backend: {BACKEND})"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="estimate the symmetric relationship")
    p_fit.add_argument("--input", required=True, help="CSV file ('-' for stdin)")
    p_fit.add_argument("--solve-for", help="also report the form solved for this variable")
    p_fit.add_argument("--format", choices=("text", "json"), default="text")
    p_fit.set_defaults(handler=_cmd_fit)

    p_cmp = sub.add_parser("compare", help="compare estimators in solved form")
    p_cmp.add_argument("--input", required=True, help="CSV file ('-' for stdin)")
    p_cmp.add_argument("--solve-for", required=True, help="variable to isolate")
    p_cmp.add_argument("--format", choices=("text", "json"), default="text")
    p_cmp.set_defaults(handler=_cmd_compare)

    p_boot = sub.add_parser("bootstrap", help="percentile confidence intervals")
    p_boot.add_argument("--input", required=True, help="CSV file ('-' for stdin)")
    p_boot.add_argument("--replicates", required=True, type=int)
    p_boot.add_argument("--level", type=float, default=0.95)
    p_boot.add_argument("--seed", type=_seed_int, default=0)
    p_boot.add_argument("--solve-for", help="report the solved form instead")
    p_boot.add_argument("--format", choices=("text", "json"), default="text")
    p_boot.set_defaults(handler=_cmd_bootstrap)

    p_sim = sub.add_parser("simulate", help="lattice data or Monte Carlo study")
    p_sim.add_argument("--config", required=True, help="JSON config file")
    p_sim.add_argument("--seed", type=_seed_int, default=None)
    p_sim.add_argument(
        "--monte-carlo",
        type=int,
        default=None,
        metavar="R",
        help="run R replicates and compare estimators instead of emitting data",
    )
    p_sim.set_defaults(handler=_cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ImpartialError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyError as exc:
        print(f"error: unknown variable {exc.args[0]!r}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
