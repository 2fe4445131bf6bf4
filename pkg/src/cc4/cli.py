"""Command-line front end.

    cc4 solve    --s S --t T [--lambda L] [--json | --plain]
    cc4 special  --lambda L (--m2 M | --m4 M)
    cc4 scan     [--smin --smax --tmin --tmax --res N [N] --lambda L] --out FILE.csv
    cc4 curves   --curve p1|p2|p4|all [--n N] --out FILE.csv
    cc4 simulate --s S --t T [--lambda L --periods P --steps-per-period K] --out FILE.csv

Exit codes: 0 ok, 2 usage, 3 infeasible, 4 degenerate, 5 io,
6 verification failed.  CC4_EPS_SIGN overrides the sign tolerance.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import core, dynamics, regions, verify
from .errors import DegenerateDenominator, InfeasibleMass, InvalidInput, LabelAbsent

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_DEGENERATE = 4
EXIT_IO = 5
EXIT_VERIFY = 6

DRIFT_THRESHOLD = 1e-6
RESIDUAL_TOL = 1e-9

CSV_HEADER_SCAN = ["s", "t", "label", "p1", "p2", "p3", "p4", "p5", "m1", "m3", "m4", "c_y"]
CSV_HEADER_CURVES = ["curve", "s", "t", "defect"]
DEFAULT_CURVE_RANGES = {"p1": (0.01, 1.7), "p2": (0.0, 1.7), "p4": (0.01, 2.5)}


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """Shortest round-trip text for a float; empty for NaN."""
    x = float(x)
    return "" if math.isnan(x) else repr(x)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def envelope(command: str, inputs: dict, result, warnings=()) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": _jsonable(inputs),
        "result": _jsonable(result),
        "warnings": list(warnings),
    }


def _emit(env: dict, plain: bool = False, stream=None) -> None:
    stream = stream or sys.stdout
    if not plain:
        stream.write(json.dumps(env, indent=2, sort_keys=False, allow_nan=False) + "\n")
        return

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k, v in obj.items():
                walk(f"{prefix}{k}.", v)
        elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
            for i, v in enumerate(obj):
                walk(f"{prefix}{i}.", v)
        else:
            value = obj if not isinstance(obj, float) else fmt(obj)
            stream.write(f"{prefix[:-1]}: {value}\n")

    walk("", {k: env[k] for k in ("command", "result", "warnings")})


def _eps_sign() -> float:
    raw = os.environ.get("CC4_EPS_SIGN")
    if raw is None:
        return core.EPS_SIGN
    try:
        eps = float(raw)
    except ValueError:
        raise UsageError(f"CC4_EPS_SIGN must be a number, got {raw!r}") from None
    if not (math.isfinite(eps) and eps >= 0):
        raise UsageError(f"CC4_EPS_SIGN must be >= 0, got {raw!r}")
    return eps


def _positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise UsageError(f"--{name} must be positive, got {value!r}")
    return value


def _shape(args) -> core.ShapeParams:
    try:
        return core.ShapeParams(args.s, args.t)
    except InvalidInput as exc:
        raise UsageError(str(exc)) from None


def _residual_for(params, masses):
    config = verify.symmetric_config(params, masses)
    return verify.cc_residual(config, RESIDUAL_TOL)


# -- commands ----------------------------------------------------------------


def cmd_solve(args) -> int:
    eps = _eps_sign()
    params = _shape(args)
    lam = _positive("lambda", args.lam)
    inputs = {"s": params.s, "t": params.t, "lambda": lam, "eps_sign": eps}
    label = regions.classify(params.s, params.t, eps)
    try:
        sol = core.solve_masses(params, lam, eps)
    except DegenerateDenominator as exc:
        profile = core.sign_profile(params, eps)
        result = {"sign_profile": profile.as_dict(), "region": label.value, "masses": None, "residual": None}
        _emit(envelope("solve", inputs, result, [str(exc)]), args.plain)
        return EXIT_DEGENERATE

    warnings = []
    report = None
    if sol.feasible:
        report = _residual_for(params, sol.masses)
    else:
        warnings.append("some mass is not positive; the shape has no central configuration with positive masses")
    result = {
        "masses": sol.as_dict(),
        "sign_profile": sol.profile.as_dict(),
        "region": label.value,
        "residual": report.as_dict() if report else None,
    }
    _emit(envelope("solve", inputs, result, warnings), args.plain)
    if not sol.feasible:
        return EXIT_INFEASIBLE
    return EXIT_OK if report.is_central else EXIT_VERIFY


def cmd_special(args) -> int:
    lam = _positive("lambda", args.lam)
    inputs = {"lambda": lam, "m2": args.m2, "m4": args.m4}
    warnings = []
    try:
        if args.m2 is not None:
            m2 = _positive("m2", args.m2)
            sol = core.solve_q4_centered(lam, m2)
        else:
            m4 = _positive("m4", args.m4)
            # m4 = (8/9) sqrt3 lam - (sqrt3/3) m2, solved for m2
            m2 = ((8.0 / 9.0) * core.SQRT3 * lam - m4) / (core.SQRT3 / 3.0)
            if not m2 > 0:
                raise InfeasibleMass(f"lambda={lam!r} and m4={m4!r} force m2 = {m2!r} <= 0")
            lam_rt = core.lambda_for_target_m4(m2, m4)
            sol = core.solve_q4_centered(lam_rt, m2)
            warnings.append(f"m2 = {fmt(m2)} derived from lambda and m4; lambda round trip {fmt(lam_rt)}")
    except InfeasibleMass as exc:
        _emit(envelope("special", inputs, None, [str(exc)]), args.plain)
        return EXIT_INFEASIBLE
    report = _residual_for(sol.params, sol.masses)
    result = {"solution": sol.as_dict(), "residual": report.as_dict()}
    _emit(envelope("special", inputs, result, warnings), args.plain)
    return EXIT_OK if report.is_central else EXIT_VERIFY


def _open_out(path: str):
    return open(path, "w", newline="", encoding="utf-8")


def _scan_summary(raster: regions.RegionRaster) -> dict:
    _, n_all = regions.all_positive_components(raster)
    components, extents = {}, {}
    for lab in (regions.RegionLabel.C, regions.RegionLabel.D, regions.RegionLabel.A, regions.RegionLabel.B):
        try:
            ext = regions.component_extents(raster, lab)
        except LabelAbsent:
            components[lab.value] = 0
            continue
        components[lab.value] = ext.n_components
        extents[lab.value] = ext.as_dict()
    return {
        "all_positive_components": n_all,
        "components": components,
        "extents": extents,
        "counts": raster.counts(),
        "shape": list(raster.shape),
    }


def cmd_scan(args) -> int:
    eps = _eps_sign()
    lam = _positive("lambda", args.lam)
    res = args.res
    if len(res) not in (1, 2):
        raise UsageError("--res takes one or two integers")
    n_s, n_t = (res[0], res[0]) if len(res) == 1 else res
    if n_s < 1 or n_t < 1:
        raise UsageError(f"--res must be positive, got {res!r}")
    if not (args.smin < args.smax and args.tmin < args.tmax):
        raise UsageError("need smin < smax and tmin < tmax")
    inputs = {
        "smin": args.smin, "smax": args.smax, "tmin": args.tmin, "tmax": args.tmax,
        "res": [n_s, n_t], "lambda": lam, "eps_sign": eps, "out": args.out,
    }
    raster = regions.scan((args.smin, args.smax), (args.tmin, args.tmax), (n_s, n_t), lam, eps)
    summary = _scan_summary(raster)
    warnings = []
    if summary["counts"]["Invalid"] == raster.codes.size:
        warnings.append("every cell violates t > s > 0")

    labels = np.array([lab.value for lab in regions.RegionLabel])[raster.codes]
    sidecar = Path(args.out).with_suffix(".json")
    try:
        with _open_out(args.out) as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER_SCAN)
            for i, t in enumerate(raster.t):
                for j, s in enumerate(raster.s):
                    w.writerow([
                        fmt(s), fmt(t), labels[i, j],
                        *(fmt(raster.p[k, i, j]) for k in range(5)),
                        fmt(raster.m1[i, j]), fmt(raster.m3[i, j]), fmt(raster.m4[i, j]),
                        fmt(raster.c_y[i, j]),
                    ])
        with _open_out(str(sidecar)) as fh:
            json.dump(envelope("scan", inputs, summary, warnings), fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        print(f"cc4 scan: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    _emit(envelope("scan", inputs, dict(summary, sidecar=str(sidecar)), warnings), args.plain)
    return EXIT_OK


def cmd_curves(args) -> int:
    if args.n < 2:
        raise UsageError(f"--n must be at least 2, got {args.n}")
    which = ["p1", "p2", "p4"] if args.curve == "all" else [args.curve]
    tracers = {"p1": regions.trace_p1, "p2": regions.trace_p2, "p4": regions.trace_p4}
    rows, maxima = [], {}
    for name in which:
        lo, hi = DEFAULT_CURVE_RANGES[name]
        lo = lo if args.smin is None else args.smin
        hi = hi if args.smax is None else args.smax
        try:
            line = tracers[name](lo, hi, args.n)
        except InvalidInput as exc:
            raise UsageError(str(exc)) from None
        maxima[name] = line.max_defect
        rows.extend((name, s, t, d) for (s, t), d in zip(line.samples, line.defects))
    ts, tt = regions.triple_intersection()
    p1, p2, _, p4, _ = core.discriminants(ts, tt)
    triple_defect = max(abs(float(p1)), abs(float(p2)), abs(float(p4)))
    rows.append(("triple", ts, tt, triple_defect))
    try:
        with _open_out(args.out) as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER_CURVES)
            for name, s, t, d in rows:
                w.writerow([name, fmt(s), fmt(t), fmt(d)])
    except OSError as exc:
        print(f"cc4 curves: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    inputs = {"curve": args.curve, "n": args.n, "smin": args.smin, "smax": args.smax, "out": args.out}
    result = {"max_defect": maxima, "triple_point": [ts, tt], "triple_defect": triple_defect, "rows": len(rows)}
    _emit(envelope("curves", inputs, result), args.plain)
    return EXIT_OK


def cmd_simulate(args) -> int:
    params = _shape(args)
    lam = _positive("lambda", args.lam)
    if args.periods < 0:
        raise UsageError(f"--periods must be >= 0, got {args.periods}")
    if args.steps_per_period < 1:
        raise UsageError(f"--steps-per-period must be positive, got {args.steps_per_period}")
    if args.every < 1:
        raise UsageError(f"--every must be positive, got {args.every}")
    inputs = {
        "s": params.s, "t": params.t, "lambda": lam, "periods": args.periods,
        "steps_per_period": args.steps_per_period, "every": args.every, "out": args.out,
    }
    try:
        sol = core.solve_masses(params, lam, _eps_sign())
        state = dynamics.launch_relative_equilibrium(sol)
    except InfeasibleMass as exc:
        _emit(envelope("simulate", inputs, None, [str(exc)]), args.plain)
        return EXIT_INFEASIBLE
    except DegenerateDenominator as exc:
        _emit(envelope("simulate", inputs, None, [str(exc)]), args.plain)
        return EXIT_DEGENERATE

    n_steps = args.periods * args.steps_per_period
    dt = dynamics.rotation_period(lam) / args.steps_per_period
    report = dynamics.DriftReport(0.0, 0.0, 0.0, 0, dt)
    n_bodies = len(state.masses)
    header = ["step", "time"] + [f"{c}{i}" for i in range(1, n_bodies + 1) for c in "xy"]
    header += ["energy_drift", "L_drift", "maxdist_drift"]

    def row(step, st, rep):
        return [str(step), fmt(st.time), *(fmt(v) for v in st.positions.ravel()),
                fmt(rep.energy_drift), fmt(rep.angular_momentum_drift), fmt(rep.distance_drift)]

    try:
        with _open_out(args.out) as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            if n_steps > 0:
                w.writerow(row(0, state, report))
            for k, st, report in dynamics.trajectory(state, dt, n_steps):
                if k % args.every == 0 or k == n_steps:
                    w.writerow(row(k, st, report))
    except OSError as exc:
        print(f"cc4 simulate: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    ok = max(report.energy_drift, report.angular_momentum_drift, report.distance_drift) < DRIFT_THRESHOLD
    result = {"masses": sol.as_dict(), "drift": report.as_dict(), "threshold": DRIFT_THRESHOLD, "passed": ok}
    _emit(envelope("simulate", inputs, result), args.plain)
    return EXIT_OK if ok else EXIT_VERIFY


# -- parser ------------------------------------------------------------------


def _add_format(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="plain", action="store_false", help="JSON envelope on stdout (default)")
    g.add_argument("--plain", dest="plain", action="store_true", help="key: value lines on stdout")
    p.set_defaults(plain=False)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cc4", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="masses, signs, region and residual at one shape")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    _add_format(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("special", help="the configuration centered on body 4")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--m2", type=float)
    g.add_argument("--m4", type=float)
    _add_format(p)
    p.set_defaults(func=cmd_special)

    p = sub.add_parser("scan", help="classify a raster of shapes; writes CSV plus a JSON sidecar")
    p.add_argument("--smin", type=float, default=0.01)
    p.add_argument("--smax", type=float, default=2.5)
    p.add_argument("--tmin", type=float, default=0.02)
    p.add_argument("--tmax", type=float, default=4.5)
    p.add_argument("--res", type=int, nargs="+", default=[512])
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--out", required=True)
    _add_format(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("curves", help="sample the boundary curves p1 = 0, p2 = 0, p4 = 0")
    p.add_argument("--curve", choices=["p1", "p2", "p4", "all"], default="all")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--smin", type=float)
    p.add_argument("--smax", type=float)
    p.add_argument("--out", required=True)
    _add_format(p)
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("simulate", help="integrate the relative equilibrium at one shape")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--periods", type=int, default=1)
    p.add_argument("--steps-per-period", type=int, default=dynamics.STEPS_PER_PERIOD)
    p.add_argument("--every", type=int, default=100, help="write every k-th step")
    p.add_argument("--out", required=True)
    _add_format(p)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"cc4 {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
