"""Command-line driver.

Subcommands
-----------
gap        structured gap form + curve table
pmax       direct largest-eigenvalue density form + curve table
pmin       smallest-eigenvalue density (reflected parameters) + curve
circular   circular-ensemble gap form + curve over the gap angle
mc         matrix-model sampling: raw samples + empirical curve
verify     invariant suite (sum rules, oracle, statistical gate) + report
report     curve rendered to a figure file alongside the delimited output

Parameters are exact rational strings ("7/8", "-3/4"); floats are
rejected on the exact inputs.  Exit codes: 0 success, 1 invalid
parameters, 2 numeric failure, 3 verification failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import mpmath
import numpy as np
from gmpy2 import mpq

from .circular import circ_gap_integer_beta
from .errors import NumericError, ParameterError, ResonanceError, VerificationError
from .io_utils import write_curve_csv, write_curve_json, write_json, write_samples_csv
from .quadrature import quadrature_gap
from .scalars import rat, rat_str
from .solvers import (CASE1, CASE2, CASE3, HypGapForm, JacobiParams,
                      gap_auto, gap_case1, gap_case2, gap_case3_frobenius,
                      gap_case3_nested, pmax_auto, pmin_form)
from .verification import EmpiricalCDF, mc_gap_check, sample_lambda_max


def _parse_grid(text: str, circular: bool = False):
    parts = text.split(":")
    if len(parts) != 3:
        raise ParameterError("grid must be start:stop:points, got %r" % text)

    def num(tok):
        tok = tok.strip().lower()
        if tok in ("2pi", "2*pi"):
            return 2 * math.pi
        if tok == "pi":
            return math.pi
        return float(tok)

    start, stop, points = num(parts[0]), num(parts[1]), int(parts[2])
    hi = 2 * math.pi + 1e-9 if circular else 1.0
    if points < 2 or not (0 <= start < stop <= hi):
        raise ParameterError("grid %r outside the admissible window" % text)
    return [start + (stop - start) * i / (points - 1) for i in range(points)]


def _params_from(args) -> JacobiParams:
    lambda1 = rat(args.lambda1)
    beta = rat(args.beta)
    if args.lambda2 is None and args.k is None:
        raise ParameterError("give either --lambda2 or --k")
    if args.lambda2 is not None:
        lambda2 = rat(args.lambda2)
    else:
        lambda2 = -beta / 2 + int(args.k)
    return JacobiParams(args.n, lambda1, lambda2, beta)


def _gap_form(params: JacobiParams, scheme: str, k_arg):
    if scheme == "case2" and k_arg is not None:
        return gap_case2(params.lambda1, params.beta, int(k_arg), params.n)
    return gap_auto(params, scheme)


def _curve_values(form, grid, endpoint_eps: float):
    xs, ys = [], []
    for s in grid:
        if isinstance(form, HypGapForm) and s >= 1.0 - 1e-15:
            s_eff = 1.0 - endpoint_eps
        else:
            s_eff = s
        xs.append(s)
        ys.append(float(form.value(mpq(s_eff))))
    return xs, ys


def _write_outputs(prefix, form, xs, ys, fmt):
    write_json(prefix + ".form.json", form.to_json())
    if fmt == "json":
        write_curve_json(prefix + ".curve.json", xs, ys)
        return [prefix + ".form.json", prefix + ".curve.json"]
    write_curve_csv(prefix + ".csv", xs, ys)
    return [prefix + ".form.json", prefix + ".csv"]


# ---------------------------------------------------------------------------
# subcommand bodies
# ---------------------------------------------------------------------------

def cmd_gap(args) -> int:
    params = _params_from(args)
    form = _gap_form(params, args.scheme, args.k)
    grid = _parse_grid(args.grid)
    xs, ys = _curve_values(form, grid, args.endpoint_eps)
    for path in _write_outputs(args.output, form, xs, ys, args.format):
        print("wrote", path)
    return 0


def cmd_pmax(args) -> int:
    params = _params_from(args)
    form = pmax_auto(params, k=int(args.k) if args.k is not None else None)
    grid = _parse_grid(args.grid)
    xs, ys = [], []
    for s in grid:
        # densities can diverge at the interval ends; stay a step inside
        s_eff = min(max(s, args.endpoint_eps), 1 - args.endpoint_eps)
        xs.append(s)
        ys.append(float(form.value(mpq(s_eff))))
    for path in _write_outputs(args.output, form, xs, ys, args.format):
        print("wrote", path)
    return 0


def cmd_pmin(args) -> int:
    params = _params_from(args)
    form = pmin_form(params)
    grid = _parse_grid(args.grid)
    xs, ys = [], []
    for s in grid:
        s_eff = min(max(s, args.endpoint_eps), 1 - args.endpoint_eps)
        xs.append(s)
        ys.append(float(form.value(mpq(s_eff))))
    for path in _write_outputs(args.output, form, xs, ys, args.format):
        print("wrote", path)
    return 0


def cmd_circular(args) -> int:
    beta = rat(args.beta)
    if beta.denominator != 1 or beta < 1:
        raise ParameterError("the circular ensemble needs a positive "
                             "integer beta")
    form = circ_gap_integer_beta(args.n, int(beta))
    grid = _parse_grid(args.grid, circular=True)
    xs = grid
    ys = [float(form.value(x, 40)) for x in xs]
    write_json(args.output + ".form.json", form.to_json())
    if args.format == "json":
        write_curve_json(args.output + ".curve.json", xs, ys,
                         header=("phi", "value"))
        print("wrote", args.output + ".curve.json")
    else:
        write_curve_csv(args.output + ".csv", xs, ys, header=("phi", "value"))
        print("wrote", args.output + ".csv")
    print("wrote", args.output + ".form.json")
    return 0


def cmd_mc(args) -> int:
    params = _params_from(args)
    lam_max = sample_lambda_max(params, args.samples, args.seed)
    write_samples_csv(args.output + ".samples.csv", lam_max)
    grid = _parse_grid(args.grid)
    ec = EmpiricalCDF(lam_max)
    write_curve_csv(args.output + ".empirical.csv", grid, ec.at(grid))
    print("wrote", args.output + ".samples.csv")
    print("wrote", args.output + ".empirical.csv")
    return 0


def cmd_verify(args) -> int:
    params = _params_from(args)
    reports = run_verification_suite(params, samples=args.samples,
                                     seed=args.seed)
    write_json(args.output + ".report.json", reports)
    ok = True
    for r in reports:
        print("%-28s statistic=%-12.4g threshold=%-12.4g %s"
              % (r["test"], r["statistic"], r["threshold"],
                 "pass" if r["pass"] else "FAIL"))
        ok = ok and r["pass"]
    print("wrote", args.output + ".report.json")
    if not ok:
        raise VerificationError("verification suite failed")
    return 0


def cmd_report(args) -> int:
    from .plotting import render_curve, thin_overlay
    params = _params_from(args)
    form = _gap_form(params, args.scheme, args.k)
    grid = _parse_grid(args.grid)
    xs, ys = _curve_values(form, grid, args.endpoint_eps)
    overlay = None
    if args.samples:
        lam_max = sample_lambda_max(params, args.samples, args.seed)
        overlay = thin_overlay(lam_max)
    write_curve_csv(args.output + ".csv", xs, ys)
    title = "n=%d  lambda1=%s  lambda2=%s  beta=%s" % (
        params.n, rat_str(params.lambda1), rat_str(params.lambda2),
        rat_str(params.beta))
    render_curve(args.output + ".png", xs, ys, mc_overlay=overlay, title=title)
    print("wrote", args.output + ".csv")
    print("wrote", args.output + ".png")
    return 0


# ---------------------------------------------------------------------------
# the verification suite
# ---------------------------------------------------------------------------

def run_verification_suite(params: JacobiParams, samples: int = 10 ** 5,
                           seed: int = 1) -> list[dict]:
    reports = []
    cases = params.admissible_cases()
    if not cases:
        raise ParameterError("parameters fit no computable range; "
                             + params.describe_ranges())
    primary = None

    if CASE1 in cases:
        form = gap_case1(params)
        primary = primary or form
        defect = abs(float(sum(form.gamma, mpq(0)) - 1))
        reports.append({"test": "case1_sum_rule", "statistic": defect,
                        "threshold": 0.0, "pass": defect == 0})

    if CASE2 in cases:
        form2 = gap_case2(params.lambda1, params.beta, params.case2_k, params.n)
        primary = primary or form2
        with mpmath.workdps(60):
            v = form2.value(1 - mpmath.mpf("1e-6"), form2._dps() + 20)
            defect = abs(float(v - 1))
        reports.append({"test": "case2_endpoint_rule", "statistic": defect,
                        "threshold": 1e-6, "pass": defect <= 1e-6})

    if CASE3 in cases:
        nested = gap_case3_nested(params)
        primary = primary or nested
        defect = nested.sum_rule_defect()
        stat = abs(float(defect))
        reports.append({"test": "case3_sum_rule", "statistic": stat,
                        "threshold": 0.0 if nested.exact else 1e-10,
                        "pass": (defect == 0) if nested.exact
                        else stat <= 1e-10})
        try:
            frob = gap_case3_frobenius(params)
            same = frob.exact and nested.exact \
                and frob.gamma_tilde == nested.gamma_tilde
            reports.append({"test": "case3_scheme_agreement",
                            "statistic": 0.0 if same else 1.0,
                            "threshold": 0.0, "pass": same})
        except (ResonanceError, ParameterError):
            reports.append({"test": "case3_nested_only",
                            "statistic": 0.0, "threshold": 0.0, "pass": True})

    if CASE1 in cases and CASE2 in cases:
        f1 = gap_case1(params)
        f2 = gap_case2(params.lambda1, params.beta, params.case2_k, params.n)
        worst = 0.0
        with mpmath.workdps(50):
            for j in range(1, 20):
                s = mpq(j, 20)
                worst = max(worst, abs(float(f1.value(s, 50) - f2.value(s, 50))))
        reports.append({"test": "case1_case2_agreement", "statistic": worst,
                        "threshold": 1e-10, "pass": worst <= 1e-10})

    from .solvers import check_gap_monotone
    mono = check_gap_monotone(primary)
    reports.append({"test": "gap_monotone_in_range",
                    "statistic": 0.0 if mono else 1.0,
                    "threshold": 0.0, "pass": mono})

    if params.n <= 3:
        worst = 0.0
        for s in (mpq(1, 5), mpq(1, 2), mpq(4, 5)):
            worst = max(worst, abs(float(primary.value(s))
                                   - quadrature_gap(params, s)))
        reports.append({"test": "quadrature_oracle", "statistic": worst,
                        "threshold": 1e-8, "pass": worst <= 1e-8})

    reports.append(mc_gap_check(params, primary, n_samples=samples, seed=seed))
    return reports


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _add_common(sp, density=False, circular=False):
    sp.add_argument("--n", type=int, required=True, help="matrix size")
    if not circular:
        sp.add_argument("--lambda1", required=True,
                        help="exact rational, e.g. -3/4")
        sp.add_argument("--lambda2", default=None,
                        help="exact rational; or give --k instead")
        sp.add_argument("--k", default=None,
                        help="integer shift for the -beta/2 + k regime")
    sp.add_argument("--beta", required=True, help="exact rational > 0")
    default_grid = "0:2pi:101" if circular else "0:1:101"
    sp.add_argument("--grid", default=default_grid,
                    help="curve grid start:stop:points "
                         "(default %s)" % default_grid)
    sp.add_argument("--output", default="jacobi_edge_out",
                    help="output path prefix")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--endpoint-eps", type=float, default=1e-6,
                    help="offset used where an assembled form is "
                         "evaluated short of an endpoint")
    if not circular:
        sp.add_argument("--scheme", default="auto",
                        choices=("auto", "case1", "case2",
                                 "case3-frobenius", "case3-nested"))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="jacobi-edge",
        description="Extreme-eigenvalue distributions of the beta-Jacobi "
                    "ensemble by exact recursion, with a matrix-model "
                    "sampler and verification harness.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("gap", help="gap probability form and curve")
    _add_common(sp)
    sp.set_defaults(func=cmd_gap)

    sp = sub.add_parser("pmax", help="largest-eigenvalue density")
    _add_common(sp, density=True)
    sp.set_defaults(func=cmd_pmax)

    sp = sub.add_parser("pmin", help="smallest-eigenvalue density")
    _add_common(sp, density=True)
    sp.set_defaults(func=cmd_pmin)

    sp = sub.add_parser("circular", help="circular-ensemble gap")
    _add_common(sp, circular=True)
    sp.set_defaults(func=cmd_circular)

    sp = sub.add_parser("mc", help="matrix-model sampling")
    _add_common(sp)
    sp.add_argument("--samples", type=int, default=10 ** 5)
    sp.add_argument("--seed", type=int, default=1)
    sp.set_defaults(func=cmd_mc)

    sp = sub.add_parser("verify", help="run the invariant suite")
    _add_common(sp)
    sp.add_argument("--samples", type=int, default=10 ** 5)
    sp.add_argument("--seed", type=int, default=1)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("report", help="curve + figure rendering")
    _add_common(sp)
    sp.add_argument("--samples", type=int, default=0,
                    help="overlay sample count (0 disables the overlay)")
    sp.add_argument("--seed", type=int, default=1)
    sp.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print("parameter error:", exc, file=sys.stderr)
        return 1
    except (NumericError, ArithmeticError) as exc:
        print("numeric failure:", exc, file=sys.stderr)
        return 2
    except VerificationError as exc:
        print("verification failure:", exc, file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
