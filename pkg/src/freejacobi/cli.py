"""Command-line front end: density and moment tables, verification suites
with JSON reports, and the random-matrix simulator.

Exit codes are the contract for scripting: 0 when every check passed (or the
requested data was written), 1 when a tolerance was violated, 2 on numerical
non-convergence or invalid input.  The default seed is the FJL_SEED
environment variable when set, 0 otherwise; given identical arguments and
seed, every output file is byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

import numpy as np

from .errors import ConvergenceError, PositivityError
from .fock import build_fock, vacuum_moments
from .martingale import (FlowConstants, flow_K_ode_residual,
                         flow_Z_ode_residual, martingale_residual)
from .measures import (JacobiParams, cdf_grid, moments, mu_lambda_theta,
                       nu_lambda, nu_lambda_theta, xi_lambda)
from .recurrence import extract_from_measure
from .renorm import (RenormKernel, certify_product_dependence, family_gram,
                     rho_trig, u_combination)
from .simulator import (evolve_unitary_bm, jacobi_spectrum, ks_distance,
                        make_state, trace_martingale_series)

REPORT_SCHEMA = "freejacobi/report-v1"

_MEASURE_FAMILIES = ("mu", "nu", "nu_theta", "xi")
_POLY_FAMILIES = ("Q_lambda", "P_lambda", "Q_lambda_theta")


def _measure(family, lam, theta):
    if family == "mu":
        return mu_lambda_theta(JacobiParams(lam, theta))
    if family == "nu":
        return nu_lambda(lam)
    if family == "nu_theta":
        return nu_lambda_theta(JacobiParams(lam, theta))
    if family == "xi":
        return xi_lambda(lam)
    raise ValueError(f"unknown measure family {family!r}")


def _family_measure(family, lam, theta):
    """The orthogonality measure of a named polynomial family."""
    if family == "Q_lambda":
        return nu_lambda(lam)
    if family == "P_lambda":
        return xi_lambda(lam)
    if family == "Q_lambda_theta":
        return nu_lambda_theta(JacobiParams(lam, theta))
    raise ValueError(f"unknown polynomial family {family!r}")


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _write_csv(out, header, rows, head_comments=(), tail_comments=()):
    lines = [f"# {c}" for c in head_comments]
    lines.append(",".join(header))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    lines.extend(f"# {c}" for c in tail_comments)
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _emit_report(report, out):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


# -- subcommands --------------------------------------------------------------

def cmd_density(args):
    m = _measure(args.family, args.lam, args.theta)
    lo, hi = m.support
    i = np.arange(args.npoints)
    xs = lo + (hi - lo) * (i + 0.5) / args.npoints
    dens = np.asarray(m.density(xs), dtype=float)
    head = [f"family = {args.family}, lambda = {_fmt(args.lam)}, "
            f"theta = {_fmt(args.theta)}",
            f"support = [{_fmt(lo)}, {_fmt(hi)}]"]
    tail = [f"atom, {_fmt(x)}, {_fmt(w)}" for x, w in m.atoms]
    _write_csv(args.out, ("x", "density"), zip(xs, dens), head, tail)
    return 0


def cmd_moments(args):
    m = _measure(args.family, args.lam, args.theta)
    mom = moments(m, args.nmax)
    head = [f"family = {args.family}, lambda = {_fmt(args.lam)}, "
            f"theta = {_fmt(args.theta)}"]
    _write_csv(args.out, ("n", "moment"),
               ((n, float(mom[n])) for n in range(args.nmax + 1)), head)
    return 0


def _suite_orthogonality(args):
    tol = 1e-9 if args.tol is None else args.tol
    families = _POLY_FAMILIES if args.family == "all" else (args.family,)
    entries = []
    ok = True
    for fam in families:
        measure = _family_measure(fam, args.lam, args.theta)
        beta, gamma = u_combination(fam, args.lam, args.theta)
        gram = family_gram(measure, beta, gamma, args.nmax)
        diag = np.diag(gram)
        max_off = float(np.max(np.abs(gram - np.diag(diag))))
        min_norm = float(np.min(diag))
        entries.append({"family": fam, "max_offdiag": max_off,
                        "min_norm": min_norm})
        ok = ok and max_off < tol and min_norm > 0.0
    return {"suite": "orthogonality", "lambda": args.lam, "theta": args.theta,
            "n_max": args.nmax, "tol": tol, "families": entries,
            "verdict": ok}, (0 if ok else 1)


def _suite_renorm(args):
    tol = 1e-10 if args.tol is None else args.tol
    measure = _measure(args.family, args.lam, args.theta)
    rho = rho_trig if args.rho == "trig" else (lambda u: u)
    kern = RenormKernel(measure, rho=rho)
    verdict, rep = certify_product_dependence(kern, tol=tol)
    rep.update({"suite": "renorm", "family": args.family, "rho": args.rho,
                "lambda": args.lam, "theta": args.theta})
    return rep, (0 if verdict else 1)


def _suite_fock(args):
    tol = 1e-8 if args.tol is None else args.tol
    measure = _measure(args.family, args.lam, args.theta)
    dim = args.kmax // 2 + 1
    js = extract_from_measure(measure, dim - 1)
    vac = vacuum_moments(build_fock(js, dim), args.kmax)
    quad = moments(measure, args.kmax)
    diff = float(np.max(np.abs(vac - quad)))
    ok = diff < tol
    return {"suite": "fock", "family": args.family, "lambda": args.lam,
            "theta": args.theta, "k_max": args.kmax, "tol": tol,
            "max_difference": diff, "verdict": ok}, (0 if ok else 1)


def _suite_martingale(args):
    tol = 1e-9 if args.tol is None else args.tol
    rows = []
    worst = 0.0
    for n in range(1, args.nmax + 1):
        r = martingale_residual(args.lam, n, family=args.family,
                                a_variant=args.a_variant)
        rows.append({"n": n, "residual": r})
        worst = max(worst, r)
    ok = worst < tol
    return {"suite": "martingale", "family": args.family,
            "a_variant": args.a_variant, "lambda": args.lam,
            "n_max": args.nmax, "tol": tol, "residuals": rows,
            "max_residual": worst, "verdict": ok}, (0 if ok else 1)


def _suite_flows(args):
    tol_k = 1e-6 if args.tol is None else args.tol
    tol_z = args.tol_z
    p = JacobiParams(args.lam, args.theta)
    fc = FlowConstants.from_params(p, r=args.r)
    rows = []
    worst_z = worst_k = 0.0
    for frac in np.linspace(0.05, 0.95, args.ntimes):
        t = float(frac * fc.t0)
        rz = flow_Z_ode_residual(fc, t)
        rk = flow_K_ode_residual(fc, args.lam, args.theta, t,
                                 variant=args.variant)
        rows.append({"t": t, "z_residual": rz, "k_residual": rk})
        worst_z, worst_k = max(worst_z, rz), max(worst_k, rk)
    ok = worst_z < tol_z and worst_k < tol_k
    return {"suite": "flows", "lambda": args.lam, "theta": args.theta,
            "r": fc.r, "t0": fc.t0, "variant": args.variant,
            "tol_z": tol_z, "tol_k": tol_k, "residuals": rows,
            "max_z_residual": worst_z, "max_k_residual": worst_k,
            "verdict": ok}, (0 if ok else 1)


_SUITES = {
    "orthogonality": _suite_orthogonality,
    "renorm": _suite_renorm,
    "fock": _suite_fock,
    "martingale": _suite_martingale,
    "flows": _suite_flows,
}


def cmd_verify(args):
    report, code = _SUITES[args.suite](args)
    report["schema"] = REPORT_SCHEMA
    _emit_report(report, args.out)
    return code


def cmd_simulate(args):
    times = [float(s) for s in args.times.split(",")] if args.times else []
    spectra = []
    state = None
    for i in range(args.trials):
        rng = np.random.default_rng([args.seed, i])
        state = make_state(args.lam, args.theta, args.d, rng)
        if args.t > 0.0:
            steps = int(round(args.t / args.dt))
            y = evolve_unitary_bm(state.Y, args.dt, steps, rng)
            state = replace(state, Y=y)
        spectra.append(jacobi_spectrum(state))
    pooled = np.concatenate(spectra)
    lam_r, th_r = state.realized_params()

    ks = None
    try:
        xs, cdf = cdf_grid(mu_lambda_theta(JacobiParams(lam_r, th_r)))
        ks = ks_distance(pooled, xs, cdf)
    except ValueError:
        pass          # realized parameters outside the measure's domain

    counts, edges = np.histogram(pooled, bins=args.bins,
                                 range=(0.0, 1.0 + 1e-9))
    base = args.out if args.out is not None else "simulate"
    _write_csv(f"{base}_spectrum.csv", ("bin_left", "bin_right", "count"),
               ((float(edges[i]), float(edges[i + 1]), int(counts[i]))
                for i in range(counts.size)),
               [f"d = {args.d}, trials = {args.trials}, t = {_fmt(args.t)}"])

    if times:
        series = trace_martingale_series(
            args.lam, args.n, times, args.trials, args.d, seed=args.seed,
            theta=args.theta, dt=args.dt, family=args.family,
            a_variant=args.a_variant)
        _write_csv(f"{base}_series.csv", ("t", "mean", "stderr"), series,
                   [f"family = {args.family}, n = {args.n}, "
                    f"d = {args.d}, trials = {args.trials}"])

    manifest = {
        "schema": REPORT_SCHEMA,
        "lambda": args.lam, "theta": args.theta,
        "realized_lambda": lam_r, "realized_theta": th_r,
        "d": args.d, "p_rank": state.p_rank, "q_rank": state.q_rank,
        "trials": args.trials, "dt": args.dt, "seed": args.seed,
        "t": args.t, "times": times, "n": args.n,
        "family": args.family, "a_variant": args.a_variant,
        "ks_distance": ks,
        "files": [f"{base}_spectrum.csv"] +
                 ([f"{base}_series.csv"] if times else []),
    }
    _emit_report(manifest, f"{base}_manifest.json")
    if ks is not None:
        print(f"KS distance to stationary law: {ks:.6f}")
    return 0


# -- parser -------------------------------------------------------------------

def _add_common(p, *, theta_default=0.5):
    p.add_argument("--lambda", dest="lam", type=float, required=True,
                   help="spectral parameter lambda in (0, 1]")
    p.add_argument("--theta", type=float, default=theta_default,
                   help="projection ratio theta (default %(default)s)")
    p.add_argument("--out", default=None,
                   help="output path (default: stdout)")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="freejacobi",
        description="Spectral measures, orthogonal families, flow ODEs and "
                    "Monte Carlo checks for the stationary compressed "
                    "unitary process.")
    sub = parser.add_subparsers(dest="command", required=True)
    seed_default = int(os.environ.get("FJL_SEED", "0"))

    d = sub.add_parser("density", help="tabulate a spectral density")
    d.add_argument("--family", choices=_MEASURE_FAMILIES, default="mu")
    d.add_argument("--npoints", type=int, default=512)
    _add_common(d)
    d.set_defaults(func=cmd_density)

    mo = sub.add_parser("moments", help="tabulate moments of a measure")
    mo.add_argument("--family", choices=_MEASURE_FAMILIES, default="mu")
    mo.add_argument("--nmax", type=int, default=16)
    _add_common(mo)
    mo.set_defaults(func=cmd_moments)

    v = sub.add_parser("verify", help="run a verification suite")
    vs = v.add_subparsers(dest="suite", required=True)

    vo = vs.add_parser("orthogonality",
                       help="pairwise orthogonality of the three families")
    vo.add_argument("--family", choices=_POLY_FAMILIES + ("all",),
                    default="all")
    vo.add_argument("--nmax", type=int, default=12)
    vo.add_argument("--tol", type=float, default=None)
    _add_common(vo)
    vo.set_defaults(func=cmd_verify)

    vr = vs.add_parser("renorm",
                       help="product-dependence certification of the "
                            "renormalized kernel")
    vr.add_argument("--family", choices=_MEASURE_FAMILIES, default="nu")
    vr.add_argument("--rho", choices=("trig", "id"), default="trig",
                    help="renormalizing map: 2u/(1+u^2) or the identity "
                         "negative control")
    vr.add_argument("--tol", type=float, default=None)
    _add_common(vr)
    vr.set_defaults(func=cmd_verify)

    vf = vs.add_parser("fock",
                       help="tridiagonal vacuum moments vs quadrature")
    vf.add_argument("--family", choices=_MEASURE_FAMILIES, default="mu")
    vf.add_argument("--kmax", type=int, default=16)
    vf.add_argument("--tol", type=float, default=None)
    _add_common(vf)
    vf.set_defaults(func=cmd_verify)

    vm = vs.add_parser("martingale",
                       help="drift-cancellation residuals of a family")
    vm.add_argument("--family", choices=("P_lambda", "Q_lambda"),
                    default="P_lambda")
    vm.add_argument("--a-variant", choices=("sqrt", "rational"),
                    default="sqrt")
    vm.add_argument("--nmax", type=int, default=15)
    vm.add_argument("--tol", type=float, default=None)
    _add_common(vm)
    vm.set_defaults(func=cmd_verify)

    vl = vs.add_parser("flows", help="ODE residuals of the closed-form flow")
    vl.add_argument("--variant", choices=("displayed", "ode"),
                    default="displayed")
    vl.add_argument("--r", type=float, default=None,
                    help="flow parameter r in (0, 4 lambda theta^2]")
    vl.add_argument("--ntimes", type=int, default=10)
    vl.add_argument("--tol", type=float, default=None,
                    help="tolerance for the K residual (default 1e-6)")
    vl.add_argument("--tol-z", dest="tol_z", type=float, default=1e-7)
    _add_common(vl)
    vl.set_defaults(func=cmd_verify)

    s = sub.add_parser("simulate", help="random-matrix Monte Carlo run")
    s.add_argument("--d", type=int, default=200)
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--t", type=float, default=0.0,
                   help="evolution time for the pooled spectra")
    s.add_argument("--times", default="0,0.2,0.4",
                   help="comma-separated times for the trace series "
                        "(empty string skips it)")
    s.add_argument("--n", type=int, default=2,
                   help="degree of the trace statistic")
    s.add_argument("--dt", type=float, default=1e-2)
    s.add_argument("--bins", type=int, default=40)
    s.add_argument("--family", choices=("P_lambda", "Q_lambda"),
                   default="P_lambda")
    s.add_argument("--a-variant", choices=("sqrt", "rational"),
                   default="sqrt")
    s.add_argument("--seed", type=int, default=seed_default)
    _add_common(s)
    s.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConvergenceError, PositivityError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
