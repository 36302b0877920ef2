"""Command-line front end: every operation as a subcommand.

Exit codes: 0 success, 1 invariant-suite violation, 2 argument errors,
3 numerical failure (integration, bracketing, lifetime).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import geometry as geo
from .closure import (RationalTarget, find_tau_for_angular_period,
                      half_period_classification, necklace, verify_closed)
from .geometry.export import report_to_json
from .ode_engine import EventError, IntegrationError, Tolerances
from .periods import (partial_periods_quadrature, period_ode, pthat_quadrature,
                      verify_psi_constraint)
from .twisted_curve import AdmissiblePair, TwistParam, f_poly, solve_w
from .variation import check_asymptotics, dpthat_dtau_cross_check, solve_Q

TOL_PRESETS = {
    "fast": Tolerances(abs_tol=1e-9, rel_tol=1e-9, event_tol=1e-10),
    "standard": Tolerances(abs_tol=1e-12, rel_tol=1e-12, event_tol=1e-13),
    "strict": Tolerances(abs_tol=5e-13, rel_tol=5e-13, event_tol=5e-14),
}


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.json:
        out = report_to_json(payload)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(out + "\n")
        else:
            print(out)
    else:
        body = "\n".join(text_lines)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(body + "\n")
        else:
            print(body)


def _param(args) -> TwistParam:
    pair = AdmissiblePair(args.p, args.q)
    if args.tau is None:
        raise SystemExit2("--tau required for this subcommand")
    return TwistParam(pair, args.tau)


class SystemExit2(Exception):
    """Argument-level error discovered after parsing."""


def _parse_target(text: str) -> RationalTarget:
    try:
        a, b = text.split("/")
        return RationalTarget(int(a), int(b))
    except (ValueError, TypeError) as exc:
        raise SystemExit2(f"bad --target {text!r}: expected a/b in lowest terms: {exc}")


# -- subcommands ---------------------------------------------------------------


def cmd_solve(args) -> int:
    param = _param(args)
    tol = TOL_PRESETS[args.tol]
    if args.tau != 0.0:
        data = period_ode(param, tol)
        half_window = args.window if args.window else 2.0 * data.p_tau
    else:
        half_window = args.window if args.window else 5.0
    traj = solve_w(param, (-half_window, half_window), tol)
    ts = np.linspace(-half_window, half_window, args.samples)
    if args.format == "csv" and args.out:
        geo.trajectory_csv(param, traj, ts, args.out)
        print(f"wrote {args.out}")
        return 0
    payload = {"p": args.p, "q": args.q, "tau": args.tau,
               "window": half_window, "drift": traj.drift}
    _emit(args, payload, [f"drift over [-{half_window}, {half_window}]: "
                          + ", ".join(f"{k}={v:.3e}" for k, v in traj.drift.items())])
    return 0


def cmd_periods(args) -> int:
    param = _param(args)
    tol = TOL_PRESETS[args.tol]
    data = period_ode(param, tol)
    qp, qm = partial_periods_quadrature(param)
    payload = dataclasses.asdict(data)
    payload.update({
        "p_plus_quadrature": qp, "p_minus_quadrature": qm,
        "pthat_quadrature": pthat_quadrature(param),
        "route_gap_p_tau": abs(qp + qm - data.p_tau),
    })
    _emit(args, payload, [
        f"p_tau   = {data.p_tau!r}   (quadrature gap {abs(qp + qm - data.p_tau):.2e})",
        f"p_plus  = {data.p_plus!r}",
        f"p_minus = {data.p_minus!r}",
        f"pthat   = {data.pthat!r}",
    ])
    return 0


def cmd_closure(args) -> int:
    pair = AdmissiblePair(args.p, args.q)
    if args.target is None:
        raise SystemExit2("closure requires --target a/b")
    target = _parse_target(args.target)
    tol = TOL_PRESETS[args.tol]
    tau = find_tau_for_angular_period(pair, target, tol=tol)
    report = half_period_classification(pair, target)
    param = TwistParam(pair, tau)
    data = period_ode(param, tol)
    check = verify_closed(param, report.k0, samples=args.samples or 20,
                          tol=tol, data=data)
    payload = {"tau": tau, "pthat_error": abs(data.pthat - target.angle),
               "report": dataclasses.asdict(report),
               "closure_residual": check.closure_residual,
               "rotation_residual": check.rotation_residual}
    _emit(args, payload, [
        f"tau = {tau!r}  (pthat error {abs(data.pthat - target.angle):.2e})",
        f"k0 = {report.k0}, topology {report.topology}",
        f"generator {report.per_generator}, half-period type {report.half_period_type}",
        f"closure residual {check.closure_residual:.2e}, "
        f"rotation residual {check.rotation_residual:.2e}",
    ])
    return 0


def cmd_necklace(args) -> int:
    pair = AdmissiblePair(args.p, args.q)
    if args.m is None:
        raise SystemExit2("necklace requires --m")
    tol = TOL_PRESETS[args.tol]
    tau, k0 = necklace(pair, args.m, tol)
    param = TwistParam(pair, tau)
    data = period_ode(param, tol)
    check = verify_closed(param, k0, samples=args.samples or 20, tol=tol, data=data)
    payload = {"tau": tau, "k0": k0, "p_tau": data.p_tau, "pthat": data.pthat,
               "closure_residual": check.closure_residual}
    _emit(args, payload, [
        f"tau = {tau!r}",
        f"k0 = {k0}  (closes after {2 * k0} half-periods, "
        f"t-period {2 * k0 * data.p_tau!r})",
        f"closure residual {check.closure_residual:.2e}",
    ])
    return 0


def cmd_torque(args) -> int:
    param = _param(args)
    pair = param.pair
    reports = []
    tgen = geo.t_generator(pair)
    for t0 in (0.3, 1.1):
        reports.append(geo.torque(param, tgen, meridian_t=t0))
    offdiag = geo.SuBasisElement(kind="rotation", indices=(0, pair.n - 1))
    reports.append(geo.torque(param, offdiag, meridian_t=0.3))
    payload = {"reports": [dataclasses.asdict(r) for r in reports],
               "meridian_gap": abs(reports[0].numeric - reports[1].numeric)}
    _emit(args, payload, [
        f"t-generator flux {reports[0].numeric!r} vs closed form "
        f"{reports[0].closed_form!r} (abs err {reports[0].abs_error:.2e})",
        f"meridian independence gap {abs(reports[0].numeric - reports[1].numeric):.2e}",
        f"off-diagonal flux {reports[2].numeric:.2e}",
    ])
    return 0


def cmd_asymptotics(args) -> int:
    pair = AdmissiblePair(args.p, args.q)
    taus = [float(t) for t in (args.tau_list or "1e-2,1e-3,1e-4").split(",")]
    reports = check_asymptotics(pair, taus)
    payload = {"reports": [dataclasses.asdict(r) for r in reports]}
    lines = [f"{r.law_id:12s} tau={r.tau:<8g} measured={r.measured:<12.6g} "
             f"predicted={r.predicted:<12.6g} ratio={r.ratio:.4f}" for r in reports]
    _emit(args, payload, lines)
    return 0


def cmd_neck(args) -> int:
    param = _param(args)
    b = args.window or 2.0
    comp = geo.neck_rescale(param, args.waist, b)
    payload = {"beta": comp.beta, "max_error": comp.max_error,
               "window": comp.window, "waist_index": comp.waist_index,
               "waist_kind": comp.waist_kind, "catenoid_degree": comp.catenoid_degree}
    _emit(args, payload, [
        f"waist {comp.waist_index} (kind {comp.waist_kind}), "
        f"degree-{comp.catenoid_degree} catenoid, beta = {comp.beta!r}",
        f"max |profile - catenoid| over [-{b}, {b}] = {comp.max_error!r}",
    ])
    return 0


def cmd_export(args) -> int:
    param = _param(args)
    if args.out is None:
        raise SystemExit2("export requires --out")
    n_samples = args.samples or 64
    if args.format == "csv":
        tol = TOL_PRESETS[args.tol]
        w = args.window or 5.0
        traj = solve_w(param, (-w, w), tol)
        geo.trajectory_csv(param, traj, np.linspace(-w, w, n_samples), args.out)
    elif args.format == "obj":
        if (args.p, args.q) != (1, 2):
            raise SystemExit2("obj export supports the (1,2) surface case only")
        w = args.window or 3.0
        sampler = geo.immersion_sampler(param, (-w, w))
        geo.export(sampler, (n_samples, n_samples), "obj", args.out)
    elif args.format == "json":
        data = period_ode(param, TOL_PRESETS[args.tol])
        with open(args.out, "w") as fh:
            fh.write(report_to_json(data, kind="PeriodData") + "\n")
    else:
        raise SystemExit2(f"unsupported export format {args.format!r}")
    print(f"wrote {args.out}")
    return 0


def cmd_verify(args) -> int:
    param = _param(args)
    pair = param.pair
    tol = TOL_PRESETS[args.tol]
    failures = []
    checks: list[tuple[str, float, float]] = []

    data = period_ode(param, tol)
    traj = solve_w(param, (-10.0 * data.p_tau, 10.0 * data.p_tau), tol)
    drift = traj.drift
    checks.append(("I1 drift", drift.get("I1", 0.0), 1e-9))
    checks.append(("I2 drift", drift.get("I2", 0.0), 1e-9))

    ts = np.linspace(-10.0 * data.p_tau, 10.0 * data.p_tau, 400)
    energy = max(abs(traj.ydot(t) ** 2 - 4.0 * f_poly(pair, traj.y(t))
                     + 16.0 * param.tau**2) for t in ts)
    checks.append(("energy residual", energy, 1e-8))

    qp, qm = partial_periods_quadrature(param)
    checks.append(("period route gap", abs(qp + qm - data.p_tau), 1e-8))
    checks.append(("pthat route gap", abs(pthat_quadrature(param) - data.pthat), 1e-8))
    checks.append(("Psi(2p) residual",
                   abs(pair.p * data.psi1_2p + pair.q * data.psi2_2p), 1e-9))
    checks.append(("psi constraint", verify_psi_constraint(param, 100), 1e-8))

    sol = solve_Q(param, tol)
    checks.append(("Wronskian drift", sol.wronskian_drift, 1e-8))
    cross = dpthat_dtau_cross_check(param)
    checks.append(("dpthat/dtau rel gap", cross["rel_err"], 1e-6))

    sym = geo.symmetry_residuals(param, data=data)
    for key, val in sym.items():
        checks.append((f"symmetry {key}", val, 1e-8))

    tq = geo.torque(param, geo.t_generator(pair))
    checks.append(("torque t-generator", tq.abs_error, 1e-8))
    off = geo.torque(param, geo.SuBasisElement(kind="rotation", indices=(0, pair.n - 1)))
    checks.append(("torque off-diagonal", abs(off.numeric), 1e-10))

    sampler = geo.immersion_sampler(param, (-0.8 * data.p_tau, 0.8 * data.p_tau))
    checks.append(("legendrian residual", geo.legendrian_residual(sampler, 100), 1e-6))

    lines = []
    payload = {}
    for name, value, bound in checks:
        ok = value <= bound
        if not ok:
            failures.append(name)
        lines.append(f"{'PASS' if ok else 'FAIL'}  {name:24s} {value:.3e} (limit {bound:.0e})")
        payload[name] = {"value": value, "limit": bound, "pass": ok}
    _emit(args, {"checks": payload, "failures": failures}, lines)
    return 1 if failures else 0


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sltwist",
        description="twisted special Legendrian curve laboratory")
    sub = ap.add_subparsers(dest="command", required=True)
    commands = {
        "solve": cmd_solve, "periods": cmd_periods, "closure": cmd_closure,
        "necklace": cmd_necklace, "torque": cmd_torque,
        "asymptotics": cmd_asymptotics, "neck": cmd_neck,
        "export": cmd_export, "verify": cmd_verify,
    }
    for name, fn in commands.items():
        p = sub.add_parser(name)
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--tau", type=float, default=None)
        p.add_argument("--target", type=str, default=None,
                       help="rational angular-period target a/b (times pi)")
        p.add_argument("--m", type=int, default=None)
        p.add_argument("--tol", choices=sorted(TOL_PRESETS), default="standard")
        p.add_argument("--json", action="store_true")
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--format", type=str, default="csv",
                       choices=("csv", "json", "obj"))
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--window", type=float, default=None)
        p.add_argument("--waist", type=int, default=1)
        p.add_argument("--tau-list", type=str, default=None, dest="tau_list")
        p.set_defaults(fn=fn)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (IntegrationError, EventError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
