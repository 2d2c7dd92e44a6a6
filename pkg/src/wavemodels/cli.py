"""Command-line interface.

Subcommands:
  run         execute a scenario config, writing snapshots and a manifest
  compare     run two scenarios on shared initial data and report L2 gaps
  dispersion  emit phase/group velocity curves as CSV
  solitary    compute traveling-wave profiles and amplitude-speed sweeps
  shocktime   print the wavebreaking time of a velocity profile
  classify    print the well-posedness verdict of abcd parameters

Exit codes: 0 success, 1 invalid input, 2 physical halt (breaking or
cavitation) with partial output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .dispersive import AbcdParams, classify_abcd
from .errors import ConvergenceError
from .hyperbolic import breaking_time
from .linear import group_velocity, phase_velocity
from .physics import PhysicalParams
from .scenarios import InitialData, ScenarioError, compare, load_scenario, run
from .spectral import Grid, SpectralField
from .traveling import (
    boussinesq_solitary_solve,
    kdv_soliton,
    petviashvili_solve,
    suggested_domain_length,
)

_FMT = "{:.17g}"


def _fmt(value: float) -> str:
    return _FMT.format(value)


def _add_physical_args(parser):
    parser.add_argument("--g", type=float, default=9.81, help="gravity [m/s^2]")
    parser.add_argument("--H", type=float, default=1.0, help="still-water depth [m]")


def _out_stream(path):
    if path is None:
        return sys.stdout, False
    return open(path, "w", newline="\n"), True


def _cmd_run(args) -> int:
    scenario = load_scenario(args.config)
    result = run(scenario, output_dir=args.outdir)
    print(f"manifest: {result.manifest_path}")
    if result.halt is not None:
        print(f"halted: {result.halt.reason} at t = {_fmt(result.halt.time)}")
    return result.exit_code


def _cmd_compare(args) -> int:
    sa = load_scenario(args.config_a)
    sb = load_scenario(args.config_b)
    with open(args.initial) as fh:
        ini = InitialData.from_dict(json.load(fh))
    report = compare(sa, sb, ini)
    stream, close = _out_stream(args.out)
    json.dump(report.to_dict(), stream, indent=2, sort_keys=True)
    stream.write("\n")
    if close:
        stream.close()
    return 0


def _cmd_dispersion(args) -> int:
    p = PhysicalParams(args.g, args.H)
    xi = np.linspace(0.0, args.ximax, args.samples)
    cp = phase_velocity(xi, p)
    cg = group_velocity(xi, p)
    stream, close = _out_stream(args.out)
    if args.quantity == "phase":
        stream.write("xi_per_m,cp_m_per_s\n")
        for row in zip(xi, cp):
            stream.write(",".join(_fmt(v) for v in row) + "\n")
    elif args.quantity == "group":
        stream.write("xi_per_m,cg_m_per_s\n")
        for row in zip(xi, cg):
            stream.write(",".join(_fmt(v) for v in row) + "\n")
    else:
        stream.write("xi_per_m,cp_m_per_s,cg_m_per_s\n")
        for row in zip(xi, cp, cg):
            stream.write(",".join(_fmt(v) for v in row) + "\n")
    if close:
        stream.close()
    return 0


def _solitary_grid(args, p, speed) -> Grid:
    if args.length is not None:
        length = args.length
    else:
        length = max(suggested_domain_length(speed, p), 100.0)
    return Grid(length, args.nodes)


def _solve_solitary(model, speed, p, grid, abcd):
    if model == "kdv":
        return kdv_soliton(speed, p, grid)
    if model == "whitham":
        return petviashvili_solve("whitham", speed, p, grid)
    return boussinesq_solitary_solve(abcd, speed, p, grid)


def _cmd_solitary(args) -> int:
    p = PhysicalParams(args.g, args.H)
    abcd = None
    if args.model == "boussinesq":
        abcd = AbcdParams(args.a, args.b, args.c, args.d)
    if args.speed is None and args.speeds is None:
        print("solitary requires --speed R or --speeds R1,R2,...", file=sys.stderr)
        return 1
    speeds = [args.speed] if args.speeds is None else [float(s) for s in args.speeds.split(",")]
    if args.speeds is not None:
        # amplitude-speed sweep: one row per speed
        stream, close = _out_stream(args.out)
        stream.write("speed_m_per_s,amplitude_m,residual,iterations\n")
        for s in speeds:
            sol = _solve_solitary(args.model, s, p, _solitary_grid(args, p, s), abcd)
            stream.write(
                ",".join(
                    [_fmt(s), _fmt(sol.amplitude), _fmt(sol.residual), str(sol.iterations)]
                )
                + "\n"
            )
        if close:
            stream.close()
        return 0

    grid = _solitary_grid(args, p, args.speed)
    sol = _solve_solitary(args.model, args.speed, p, grid, abcd)
    stream, close = _out_stream(args.out)
    stream.write("x_m,zeta_m\n")
    xs = grid.axis_coordinates(0)
    for xv, zv in zip(xs, sol.profile_zeta.values):
        stream.write(f"{_fmt(xv)},{_fmt(zv)}\n")
    if close:
        stream.close()
    meta = {
        "model": args.model,
        "speed": sol.speed,
        "amplitude": sol.amplitude,
        "residual": sol.residual,
        "iterations": sol.iterations,
    }
    print(json.dumps(meta, sort_keys=True), file=sys.stderr)
    return 0


_BUILTIN_PROFILES = ("minus-sine", "gaussian-bump")


def _cmd_shocktime(args) -> int:
    if args.builtin is None and args.profile is None:
        print("shocktime requires --profile FILE or --builtin NAME", file=sys.stderr)
        return 1
    if args.builtin is not None:
        if args.builtin == "minus-sine":
            grid = Grid(2.0 * math.pi, args.nodes)
            u0 = SpectralField.from_function(grid, lambda x: -args.amplitude * np.sin(x))
        else:
            grid = Grid(args.length, args.nodes)
            u0 = SpectralField.from_function(
                grid, lambda x: args.amplitude * np.exp(-((args.width * x) ** 2))
            )
    else:
        data = np.genfromtxt(args.profile, delimiter=",", names=True)
        xs = np.asarray(data["x_m"], dtype=float)
        length = float(xs[-1] - xs[0] + (xs[1] - xs[0]))
        grid = Grid(length, xs.size)
        u0 = SpectralField(grid, np.asarray(data["u_m_per_s"], dtype=float))
    print(_fmt(breaking_time(u0)))
    return 0


def _cmd_classify(args) -> int:
    p = PhysicalParams(args.g, args.H)
    verdict = classify_abcd(AbcdParams(args.a, args.b, args.c, args.d), p)
    print(
        json.dumps(
            {
                "verdict": verdict.verdict,
                "witness_wavenumber": verdict.witness_wavenumber,
                "omega_squared_min": verdict.omega_squared_min,
            },
            sort_keys=True,
        )
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavemodels", description="Shallow-water wave model experiments"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario config")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--outdir", default=None, help="output directory override")
    p_run.set_defaults(func=_cmd_run)

    p_cmp = sub.add_parser("compare", help="compare two models on shared data")
    p_cmp.add_argument("--config-a", required=True)
    p_cmp.add_argument("--config-b", required=True)
    p_cmp.add_argument("--initial", required=True, help="shared InitialData JSON")
    p_cmp.add_argument("--out", default=None)
    p_cmp.set_defaults(func=_cmd_compare)

    p_disp = sub.add_parser("dispersion", help="phase/group velocity curves")
    p_disp.add_argument("--ximax", type=float, required=True)
    p_disp.add_argument("--samples", type=int, required=True)
    p_disp.add_argument("--quantity", choices=("phase", "group", "both"), default="both")
    p_disp.add_argument("--out", default=None)
    _add_physical_args(p_disp)
    p_disp.set_defaults(func=_cmd_dispersion)

    p_sol = sub.add_parser("solitary", help="traveling-wave profiles and sweeps")
    p_sol.add_argument("--model", choices=("kdv", "whitham", "boussinesq"), required=True)
    p_sol.add_argument("--speed", type=float, default=None)
    p_sol.add_argument("--speeds", default=None, help="comma-separated sweep speeds")
    p_sol.add_argument("--length", type=float, default=None)
    p_sol.add_argument("--nodes", type=int, default=1024)
    p_sol.add_argument("--a", type=float, default=-1.0 / 3.0)
    p_sol.add_argument("--b", type=float, default=1.0 / 3.0)
    p_sol.add_argument("--c", type=float, default=0.0)
    p_sol.add_argument("--d", type=float, default=1.0 / 3.0)
    p_sol.add_argument("--out", default=None)
    _add_physical_args(p_sol)
    p_sol.set_defaults(func=_cmd_solitary)

    p_shock = sub.add_parser("shocktime", help="wavebreaking time of a profile")
    p_shock.add_argument("--profile", default=None, help="CSV with x_m,u_m_per_s columns")
    p_shock.add_argument("--builtin", choices=_BUILTIN_PROFILES, default=None)
    p_shock.add_argument("--amplitude", type=float, default=1.0)
    p_shock.add_argument("--width", type=float, default=1.0)
    p_shock.add_argument("--length", type=float, default=80.0)
    p_shock.add_argument("--nodes", type=int, default=1024)
    p_shock.set_defaults(func=_cmd_shocktime)

    p_cls = sub.add_parser("classify", help="well-posedness of abcd parameters")
    p_cls.add_argument("--a", type=float, required=True)
    p_cls.add_argument("--b", type=float, required=True)
    p_cls.add_argument("--c", type=float, required=True)
    p_cls.add_argument("--d", type=float, required=True)
    _add_physical_args(p_cls)
    p_cls.set_defaults(func=_cmd_classify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, ValueError, ConvergenceError, FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
