"""Command-line front end.

Exit codes: 0 success, 1 a verification/admissibility check failed,
2 invalid input (the error class name is printed on stderr).
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import errors
from . import io as hio
from .construction import check_pair_condition, classify_pair, exponential_partner, sum_family
from .envelope import (
    closedness_check,
    degenerate_nodes,
    generate_envelope,
    integrate_t,
    invariant_report,
    make_family,
)
from .heisenberg import (
    Curve,
    contact_normality,
    horizontal_tolerance,
    horizontality_residual,
    p_curvature,
)
from .lines import FamilySpec
from .recovery import oracle_distance, oracle_envelope, recover_family, tangency_check, fd_compatibility_residual
from .support import TWO_PI, parse_preset
from .tolerances import current as current_tolerances

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _emit(obj, out_path=None):
    text = hio.dumps(obj)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _support_arg(text, periodic="auto"):
    """A preset string or the path of a ``theta,p`` CSV."""
    if os.path.exists(text):
        return hio.read_support_csv(text, periodic)
    return parse_preset(text)


def _family_arg(text, n, t0, periodic="auto"):
    """A ``theta,p,t`` CSV path, or a preset integrated with t(0) = t0."""
    if os.path.exists(text):
        return hio.read_family_csv(text, periodic)
    return make_family(parse_preset(text), t0, n)


# ---------------------------------------------------------------------------


def cmd_generate(args):
    if args.input:
        cols = hio.read_columns(args.input, hio.SUPPORT_COLUMNS, ("t",))
        periodic = {"auto": "auto", "yes": True, "no": False}[args.periodic]
        support = hio.support_from_samples(cols["theta"], cols["p"], periodic)
        t0 = args.t0 if args.t0 is not None else float(cols["t"][0]) if "t" in cols else 0.0
        grid = np.linspace(0.0, TWO_PI, args.n)
    else:
        support = parse_preset(args.preset)
        t0 = 0.0 if args.t0 is None else args.t0
        grid = np.linspace(support.domain[0], support.domain[1], args.n)
    fam = FamilySpec(support, integrate_t(support, t0, grid), grid)
    curve = generate_envelope(fam)
    report = invariant_report(fam, curve).to_dict()
    closed = closedness_check(support, fam.height).closed if support.periodic else False
    report.update(
        {
            "support": support.label,
            "kind": support.kind,
            "periodic": support.periodic,
            "n": int(grid.size),
            "t0": t0,
            "closed": closed,
            "degenerate_nodes": int(np.sum(degenerate_nodes(support, grid))),
        }
    )
    hio.write_curve_csv(f"{args.out}.curve.csv", curve)
    hio.write_family_csv(f"{args.out}.family.csv", fam)
    hio.write_json(f"{args.out}.report.json", report)
    if args.json_curve:
        hio.write_curve_json(f"{args.out}.curve.json", curve)
    if args.svg:
        hio.write_svg(f"{args.out}.svg", curve, fam)
    return EXIT_OK


def _curve_checks(curve: Curve):
    """Residuals from the curve's own derivatives and from finite differences of its points."""
    checks = {}
    if curve.derivative_source != "fd":
        res = np.abs(horizontality_residual(curve))
        checks["supplied"] = {"residual_sup": float(res.max()), "tolerance": horizontal_tolerance(curve)}
    fd_curve = Curve.from_points(curve.theta, curve.points)
    res = np.abs(horizontality_residual(fd_curve))
    checks["finite_difference"] = {"residual_sup": float(res.max()), "tolerance": horizontal_tolerance(fd_curve)}
    return checks


def cmd_verify(args):
    curve = hio.read_curve_json(args.curve) if args.curve.endswith(".json") else hio.read_curve_csv(args.curve)
    checks = _curve_checks(curve)
    horizontal = all(c["residual_sup"] <= c["tolerance"] for c in checks.values())
    report = {
        "n": len(curve),
        "horizontal": horizontal,
        "horiz_residual_sup": max(c["residual_sup"] for c in checks.values()),
        "checks": checks,
    }
    try:
        k = p_curvature(curve)
        report["k_min"] = float(k.min())
        report["k_max"] = float(k.max())
        report["tau_sup"] = float(np.max(np.abs(contact_normality(curve))))
        report["horizontally_regular"] = True
    except errors.NotHorizontallyRegular:
        report["horizontally_regular"] = False
    if args.family:
        fam = hio.read_family_csv(args.family, check=False)
        report["tangency_sup"] = float(np.max(tangency_check(fam, curve)))
    _emit(report, args.report)
    return EXIT_OK if horizontal else EXIT_FAIL


def cmd_sum(args):
    f1 = _family_arg(args.family1, args.n, args.t0)
    f2 = _family_arg(args.family2, args.n, args.t0)
    summed = sum_family(f1, f2)
    report = check_pair_condition(f1.support, f2.support, f1.grid).to_dict()
    compat = np.abs(summed.compatibility_residual())
    report["sum_compatible"] = bool(compat.max() <= summed.compatibility_tolerance())
    report["sum_compat_residual_sup"] = float(compat.max())
    if args.out:
        hio.write_family_csv(f"{args.out}.family.csv", summed)
        if report["sum_compatible"]:
            hio.write_curve_csv(f"{args.out}.curve.csv", generate_envelope(summed))
    _emit(report, args.report)
    return EXIT_OK if report["admissible"] else EXIT_FAIL


def cmd_classify(args):
    p2 = _support_arg(args.p2)
    if args.partner:
        p1 = exponential_partner(p2, args.p1_at_a, (args.a, args.b))
    elif args.p1:
        p1 = _support_arg(args.p1)
    else:
        raise errors.InvalidParameter("classify needs --p1 or --partner")
    report = classify_pair(p1, p2, (args.a, args.b), n=args.n).to_dict()
    _emit(report, args.report)
    return EXIT_FAIL if report["violations"] else EXIT_OK


def cmd_recover(args):
    curve = hio.read_curve_json(args.curve) if args.curve.endswith(".json") else hio.read_curve_csv(args.curve)
    fam = recover_family(curve)
    residual = fd_compatibility_residual(fam)
    tol = fam.compatibility_tolerance()
    report = {
        "n": int(fam.grid.size),
        "periodic": fam.support.periodic,
        "fd_compat_residual": residual,
        "tolerance": tol,
        "compatible": residual <= tol,
    }
    hio.write_family_csv(f"{args.out}.family.csv", fam)
    hio.write_json(f"{args.out}.recover.json", report)
    _emit(report)
    return EXIT_OK if report["compatible"] else EXIT_FAIL


def cmd_oracle(args):
    fam = _family_arg(args.family, args.n, args.t0)
    oracle = oracle_envelope(fam)
    dist = oracle_distance(fam, oracle)
    report = {"n": int(fam.grid.size), "max_distance": dist, "tolerance": args.tol, "agrees": dist <= args.tol}
    if args.out:
        hio.write_curve_csv(f"{args.out}.oracle.csv", oracle, with_derivatives=False)
    _emit(report, args.report)
    return EXIT_OK if report["agrees"] else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="heisenvelope", description="Horizontal envelopes of line families in H1")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="envelope from a preset or sampled support function")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", help="constant:c | trig:a0,a1,b1,... | exp:c,a")
    src.add_argument("--input", help="CSV with columns theta,p (an optional t column sets t0)")
    g.add_argument("--n", type=int, default=1024, help="grid size (default 1024)")
    g.add_argument("--t0", type=float, default=None, help="height at the first node (default 0)")
    g.add_argument("--out", default="envelope", help="output prefix")
    g.add_argument("--svg", action="store_true", help="also write <out>.svg")
    g.add_argument("--json-curve", action="store_true", help="also write <out>.curve.json")
    g.add_argument("--periodic", choices=("auto", "yes", "no"), default="auto")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="check horizontality and invariants of a curve file")
    v.add_argument("--curve", required=True)
    v.add_argument("--family", help="optional theta,p,t file for the tangency check")
    v.add_argument("--report", help="also write the JSON report here")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sum", help="sum two families and test p1 p2 = p1' p2'")
    s.add_argument("--family1", required=True, help="theta,p,t CSV or preset")
    s.add_argument("--family2", required=True, help="theta,p,t CSV or preset")
    s.add_argument("--n", type=int, default=1024)
    s.add_argument("--t0", type=float, default=0.0)
    s.add_argument("--out", help="write <out>.family.csv (and <out>.curve.csv if compatible)")
    s.add_argument("--report")
    s.set_defaults(func=cmd_sum)

    c = sub.add_parser("classify", help="sign classification of an admissible pair on [a, b]")
    c.add_argument("--p1", help="theta,p CSV or preset")
    c.add_argument("--p2", required=True, help="theta,p CSV or preset")
    c.add_argument("--partner", action="store_true", help="build p1 from p2 by the exponential formula")
    c.add_argument("--p1-at-a", type=float, default=1.0)
    c.add_argument("--a", type=float, required=True)
    c.add_argument("--b", type=float, required=True)
    c.add_argument("--n", type=int, default=2001)
    c.add_argument("--report")
    c.set_defaults(func=cmd_classify)

    r = sub.add_parser("recover", help="tangent-line family of a horizontal curve")
    r.add_argument("--curve", required=True)
    r.add_argument("--out", default="recovered")
    r.set_defaults(func=cmd_recover)

    o = sub.add_parser("oracle", help="line-intersection envelope versus the closed form")
    o.add_argument("--family", required=True, help="theta,p,t CSV or preset")
    o.add_argument("--n", type=int, default=1024)
    o.add_argument("--t0", type=float, default=0.0)
    o.add_argument("--tol", type=float, default=1e-4)
    o.add_argument("--out")
    o.add_argument("--report")
    o.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        current_tolerances()
        return args.func(args)
    except (errors.EnvelopeError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
