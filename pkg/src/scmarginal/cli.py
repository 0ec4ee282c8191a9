"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 statistically inconsistent
marginals, 3 counterfactually (or LP) infeasible.

Instance files are ``key = value`` text. Numbers may be written as ``p/q``
(exact) or as decimals (rounded to 1e-6). Two forms are accepted::

    # marginal form
    p_z0_given_x0 = 1/2
    p_z0_given_x1 = 2/5
    p_z0_given_y0 = 1/12
    p_z0_given_y1 = 1
    p_x1 = 1/2
    p_y1 = 2/5

    # joint form: P(X=1), P(Y=1), P(Z=1 | X=x, Y=y)
    theta_x = 1/2
    theta_y = 3/4
    theta_z_00 = 0
    theta_z_01 = 0
    theta_z_10 = 0
    theta_z_11 = 1

Confounded inputs use ``alpha_ij = P(X=i, Z=j)`` and ``beta_ij = P(Y=i, Z=j)``;
do-files use ``z0_do0, z1_do0, z0_do1, z1_do1`` for ``P(Z=j | do(cause=i))``.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import sys
from fractions import Fraction

from . import experiments
from .analysis import and_model_reference, bounds_report, prop1_witness
from .confounded import confounded_polytope, bounds_over, parse_objective
from .errors import (
    CounterfactuallyInfeasible,
    DegenerateCause,
    LambdaOutOfRange,
    StatisticallyInconsistent,
    ThetaOutOfRange,
    UnidentifiableQuery,
)
from .merge import build_merge_problem, observations_from_joint
from .rational import fmt, fmt_decimal, to_rational
from .scm import MarginalObservation, response_vector

EXIT_OK, EXIT_INPUT, EXIT_STATISTICAL, EXIT_INFEASIBLE = 0, 1, 2, 3

MARGINAL_KEYS = ("p_z0_given_x0", "p_z0_given_x1", "p_z0_given_y0", "p_z0_given_y1", "p_x1", "p_y1")
JOINT_KEYS = ("theta_x", "theta_y", "theta_z_00", "theta_z_01", "theta_z_10", "theta_z_11")
CONFOUNDED_KEYS = ("alpha_00", "alpha_01", "alpha_10", "alpha_11",
                   "beta_00", "beta_01", "beta_10", "beta_11")
DO_KEYS = ("z0_do0", "z1_do0", "z0_do1", "z1_do1")


class InputError(Exception):
    pass


# --- input files -------------------------------------------------------------------


def read_key_values(path: str) -> dict[str, Fraction]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string("[instance]\n" + text)
    except configparser.Error as exc:
        raise InputError(f"{path}: {exc}") from exc
    values = {}
    for key, raw in parser["instance"].items():
        try:
            values[key] = to_rational(raw)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise InputError(f"{path}: bad number for {key}: {raw!r}") from exc
    return values


def _pick(values: dict, keys, path: str) -> list[Fraction]:
    missing = [k for k in keys if k not in values]
    if missing:
        raise InputError(f"{path}: missing keys {', '.join(missing)}")
    return [values[k] for k in keys]


def load_instance(path: str) -> tuple[MarginalObservation, MarginalObservation]:
    values = read_key_values(path)
    if any(k in values for k in JOINT_KEYS):
        tx, ty, *tz = _pick(values, JOINT_KEYS, path)
        for k, v in zip(JOINT_KEYS, [tx, ty, *tz]):
            if not 0 <= v <= 1:
                raise InputError(f"{path}: {k} must lie in [0, 1]")
        return observations_from_joint(tx, ty, tz)
    zx0, zx1, zy0, zy1, px, py = _pick(values, MARGINAL_KEYS, path)
    return MarginalObservation(zx0, zx1, px), MarginalObservation(zy0, zy1, py)


def load_do_table(path: str | None):
    if path is None:
        return None
    return tuple(_pick(read_key_values(path), DO_KEYS, path))


# --- rendering ---------------------------------------------------------------------


def _interval(iv) -> str:
    return f"[{fmt(iv[0])}, {fmt(iv[1])}]"


def _vec(v) -> str:
    return "(" + ", ".join(fmt(x) for x in v) + ")"


def report_dict(problem, report) -> dict:
    witness = prop1_witness(problem.obs_x, problem.obs_y)
    fa, fb = problem.family_a, problem.family_b
    return {
        "lambda_a_prior": [fmt(x) for x in report.lambda_a_prior],
        "lambda_b_prior": [fmt(x) for x in report.lambda_b_prior],
        "lambda_a_merged": [fmt(x) for x in report.lambda_a_merged],
        "lambda_b_merged": [fmt(x) for x in report.lambda_b_merged],
        "response_a": [[fmt(x) for x in response_vector(fa, lam)] for lam in report.lambda_a_merged],
        "response_b": [[fmt(x) for x in response_vector(fb, lam)] for lam in report.lambda_b_merged],
        "polygon": [[fmt(x), fmt(y)] for x, y in report.polygon.vertices],
        "polygon_area": fmt(report.polygon.area),
        "prior_area": fmt(report.prior_box.area),
        "box_ratio": fmt(report.area_ratio_box),
        "polygon_ratio": fmt(report.area_ratio_polygon),
        "gamma_a": [fmt(x) for x in report.gamma_a],
        "gamma_b": [fmt(x) for x in report.gamma_b],
        "prop1_member": report.prop1_member,
        "prop1_witness": [fmt(x) for x in witness],
        "n_vertices": len(report.vertices),
    }


def render_pretty(problem, report) -> str:
    fa, fb = problem.family_a, problem.family_b
    lines = [
        f"lambda_a prior   {_interval(report.lambda_a_prior)}",
        f"lambda_a merged  {_interval(report.lambda_a_merged)}",
        f"lambda_b prior   {_interval(report.lambda_b_prior)}",
        f"lambda_b merged  {_interval(report.lambda_b_merged)}",
    ]
    for name, fam, iv in (("a", fa, report.lambda_a_merged), ("b", fb, report.lambda_b_merged)):
        if iv[0] == iv[1]:
            lines.append(f"response {name} (unique)  {_vec(response_vector(fam, iv[0]))}")
        else:
            lines.append(f"response {name} at ends   {_vec(response_vector(fam, iv[0]))} .. "
                         f"{_vec(response_vector(fam, iv[1]))}")
    lines += [
        f"gamma_x bounds   {_interval(report.gamma_a)}",
        f"gamma_y bounds   {_interval(report.gamma_b)}",
        f"region vertices  {report.polygon}",
        f"region area      {fmt(report.polygon.area)} (prior {fmt(report.prior_box.area)})",
        f"box ratio        {fmt(report.area_ratio_box)} ~ {fmt_decimal(report.area_ratio_box)}",
        f"polygon ratio    {fmt(report.area_ratio_polygon)} ~ {fmt_decimal(report.area_ratio_polygon)}",
        f"upper corner in region: {report.prop1_member}",
    ]
    return "\n".join(lines) + "\n"


def render_csv_rows(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _exact_and_decimal(name: str, value):
    return [(name, fmt(value)), (name + "_dec", fmt_decimal(value))]


def _write(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- commands ------------------------------------------------------------------------


def cmd_merge(args) -> int:
    obs_x, obs_y = load_instance(args.input)
    problem = build_merge_problem(obs_x, obs_y)
    report = bounds_report(problem, method=args.method)
    if args.format == "csv":
        d = report_dict(problem, report)
        header = ["lambda_a_prior_lo", "lambda_a_prior_hi", "lambda_a_merged_lo", "lambda_a_merged_hi",
                  "lambda_b_prior_lo", "lambda_b_prior_hi", "lambda_b_merged_lo", "lambda_b_merged_hi",
                  "box_ratio", "polygon_ratio", "polygon", "prop1_member"]
        row = [*d["lambda_a_prior"], *d["lambda_a_merged"], *d["lambda_b_prior"], *d["lambda_b_merged"],
               d["box_ratio"], d["polygon_ratio"], str(report.polygon), d["prop1_member"]]
        _write(render_csv_rows(header, [row]), args.output)
    else:
        _write(render_pretty(problem, report), args.output)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report_dict(problem, report), fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def default_and_thetas(count: int = 20) -> list[Fraction]:
    """``count`` linearly spaced values strictly inside (1/2, 1)."""
    return [Fraction(1, 2) + Fraction(k, 2 * (count + 1)) for k in range(1, count + 1)]


def cmd_example_and(args) -> int:
    thetas = [to_rational(t) for t in args.theta] if args.theta else default_and_thetas()
    header = ["theta", "lambda_b_star", "lambda_a_prior_lo", "lambda_a_prior_hi",
              "lambda_a_merged_lo", "lambda_a_merged_hi", "lambda_a_merged_lo_dec", "reference_match"]
    rows = []
    from .merge import and_model_observations

    for theta in thetas:
        lam_b, _, ref = and_model_reference(theta)
        problem = build_merge_problem(*and_model_observations(theta))
        report = bounds_report(problem)
        match = report.lambda_a_merged == ref and report.lambda_b_merged == (lam_b, lam_b)
        rows.append([fmt(theta), fmt(lam_b), *[fmt(x) for x in report.lambda_a_prior],
                     *[fmt(x) for x in report.lambda_a_merged],
                     fmt_decimal(report.lambda_a_merged[0]), match])
    _write(render_csv_rows(header, rows), args.output)
    return EXIT_OK


def trial_row(rec, timing: bool) -> list[tuple[str, str]]:
    inst, rep = rec.instance, rec.report
    cols = [("seed", str(rec.seed)), ("trial", str(rec.trial))]
    cols += _exact_and_decimal("theta_x", inst.theta_x)
    cols += _exact_and_decimal("theta_y", inst.theta_y)
    for name, v in zip(("00", "01", "10", "11"), inst.theta_z):
        cols += _exact_and_decimal(f"theta_z_{name}", v)
    for label, iv in (("lambda_a_prior", rep.lambda_a_prior), ("lambda_b_prior", rep.lambda_b_prior),
                      ("lambda_a_merged", rep.lambda_a_merged), ("lambda_b_merged", rep.lambda_b_merged)):
        cols += _exact_and_decimal(label + "_lo", iv[0])
        cols += _exact_and_decimal(label + "_hi", iv[1])
    cols += _exact_and_decimal("box_ratio", rep.area_ratio_box)
    cols += _exact_and_decimal("polygon_ratio", rep.area_ratio_polygon)
    cols += [("polygon", str(rep.polygon)), ("prop1_member", str(rec.prop1_member)),
             ("witness_valid", str(rec.witness_valid)), ("nested", str(rep.nested))]
    if timing:
        cols.append(("wall_time", f"{rec.wall_time:.6f}"))
    return cols


SUMMARY_COLUMNS = ("frac_box_lt1", "frac_polygon_lt1", "mean_box_reduction", "mean_polygon_reduction")


def experiment_csv(records, timing: bool = False) -> str:
    rows = [trial_row(r, timing) for r in records]
    header = [k for k, _ in rows[0]] + list(SUMMARY_COLUMNS)
    body = [[v for _, v in row] + [""] * len(SUMMARY_COLUMNS) for row in rows]
    s = experiments.summarize(records)
    summary = {name: getattr(s, name) for name in SUMMARY_COLUMNS}
    last = [""] * len(header)
    last[header.index("seed")] = str(records[0].seed)
    last[header.index("trial")] = "summary"
    last[header.index("prop1_member")] = str(s.all_prop1)
    for name, value in summary.items():
        last[header.index(name)] = fmt_decimal(value)
    return render_csv_rows(header, body + [last])


def cmd_experiment_cdf(args) -> int:
    records = experiments.run_trials(args.n, args.alpha, args.beta, seed=args.seed, workers=args.workers)
    _write(experiment_csv(records, timing=args.timing), args.output)
    return EXIT_OK


def _conditionals(spec: str):
    if spec == "generic":
        return experiments.GENERIC_CONDITIONALS
    if spec == "xor":
        return experiments.XOR_CONDITIONALS
    parts = spec.split(",")
    if len(parts) != 4:
        raise InputError("--conditionals needs 'generic', 'xor' or four comma-separated values")
    values = tuple(to_rational(p) for p in parts)
    if any(not 0 <= v <= 1 for v in values):
        raise InputError("conditionals must lie in [0, 1]")
    return values


def cmd_sweep(args) -> int:
    theta_z = _conditionals(args.conditionals)
    lines = []
    for frame, (tx, ty, rep) in enumerate(experiments.sweep(theta_z, args.grid)):
        lines.append(json.dumps({
            "frame": frame,
            "p_x1": fmt(tx),
            "p_y1": fmt(ty),
            "theta_z": [fmt(v) for v in theta_z],
            "prior": [[fmt(x), fmt(y)] for x, y in rep.prior_box.vertices],
            "region": [[fmt(x), fmt(y)] for x, y in rep.polygon.vertices],
            "region_equals_prior": rep.polygon == rep.prior_box,
        }))
    _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_confounded(args) -> int:
    values = read_key_values(args.input)
    table = _pick(values, CONFOUNDED_KEYS, args.input)
    alpha, beta = table[:4], table[4:]
    try:
        objective = parse_objective(args.objective)
    except UnidentifiableQuery:
        raise
    except ValueError as exc:
        raise InputError(f"bad objective: {exc}") from exc
    problem = confounded_polytope(alpha, beta, load_do_table(args.do_x), load_do_table(args.do_y),
                                  (args.monotonic_x, args.monotonic_y))
    low, high = bounds_over(problem, objective)
    counts = ", ".join(f"{k}={v}" for k, v in problem.row_counts.items())
    text = (f"status feasible\nobjective {args.objective}\n"
            f"bounds [{fmt(low)}, {fmt(high)}] ~ [{fmt_decimal(low)}, {fmt_decimal(high)}]\n"
            f"constraints {counts}\n")
    _write(text, args.output)
    return EXIT_OK


# --- entry point ---------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 1; argparse's default 2 is taken by the exit-code contract."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="scmarginal", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("merge", help="merge two marginal datasets and report bounds")
    p.add_argument("input")
    p.add_argument("--format", choices=("pretty", "csv"), default="pretty")
    p.add_argument("--method", choices=("hull", "support"), default="hull")
    p.add_argument("--report", help="also write a JSON report to this file")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("example-and", help="AND-model example over a range of P(Y=1)")
    p.add_argument("--theta", nargs="*", help="values in [1/2, 1); default 20 evenly spaced")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_example_and)

    p = sub.add_parser("experiment-cdf", help="random-instance area-ratio experiment")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--alpha", default="1")
    p.add_argument("--beta", default="1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="add a wall_time column (not reproducible)")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_experiment_cdf)

    p = sub.add_parser("sweep", help="frames over a grid of cause marginals")
    p.add_argument("--conditionals", default="generic",
                   help="'generic', 'xor' or P(Z=1|x,y) for cells 00,01,10,11")
    p.add_argument("--grid", type=int, default=9)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("confounded", help="bounds under unobserved confounding")
    p.add_argument("input")
    p.add_argument("--objective", required=True)
    p.add_argument("--monotonic-x", action="store_true")
    p.add_argument("--monotonic-y", action="store_true")
    p.add_argument("--do-x")
    p.add_argument("--do-y")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_confounded)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "n", 1) < 1:
            raise InputError("--n must be at least 1")
        if getattr(args, "grid", 1) < 1:
            raise InputError("--grid must be at least 1")
        return args.func(args)
    except StatisticallyInconsistent as exc:
        print(f"error: statistically inconsistent: {exc}", file=sys.stderr)
        return EXIT_STATISTICAL
    except CounterfactuallyInfeasible as exc:
        print(f"error: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (InputError, UnidentifiableQuery, DegenerateCause, ThetaOutOfRange,
            LambdaOutOfRange, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
