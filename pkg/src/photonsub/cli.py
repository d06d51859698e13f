"""Command-line front end.

Subcommands:
    wigner         sample a Wigner function on a grid (CSV or JSON)
    qseries        Mandel Q versus dimensionless time for one decoherence channel
    witness-sweep  Q and A3 across a range of squeezing strengths

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 I/O failure.
``PHOTONSUB_OUTPUT_DIR`` sets the directory for default output file names.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import gridio
from .errors import DegenerateStateError, PhotonSubError
from .fock import Channel
from .observables import bisect_sign_change, mandel_q_timeseries, state_for_moments, subtracted_witnesses
from .phase_space import GridSpec, make_evaluator, negativity_analysis
from .states import DEFAULT_TOL, SqueezeParams

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3
OUTPUT_DIR_ENV = "PHOTONSUB_OUTPUT_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    command: str
    r: float = 0.31
    theta: float = 0.0
    p: int = 1
    channel: str = "none"
    times: tuple = (0.0,)
    grid: int = 256
    window: float = 3.0
    fmt: str = "csv"
    output: Path | None = None
    tol: float = DEFAULT_TOL
    gnuplot_hint: bool = False
    sweep_var: str = "xi"
    sweep: tuple = (0.1, 0.9, 0.01)

    def validate(self) -> RunConfig:
        def bad(msg):
            raise UsageError(msg)

        if not (math.isfinite(self.r) and self.r >= 0):
            bad(f"--r must be finite and >= 0, got {self.r}")
        if not math.isfinite(self.theta):
            bad("--theta must be finite")
        if self.p < 0:
            bad(f"--p must be >= 0, got {self.p}")
        if self.channel not in {c.value for c in Channel}:
            bad(f"unknown channel {self.channel!r}")
        if not self.tol > 0:
            bad("--tol must be positive")
        if self.command != "witness-sweep" and self.p >= 1 and self.r == 0:
            bad("--p >= 1 with --r 0 annihilates the vacuum (zero-norm state)")
        if any(not (t >= 0) for t in self.times):
            bad("times must be non-negative")
        if list(self.times) != sorted(self.times):
            bad("times must be sorted")
        if self.fmt not in ("csv", "json"):
            bad(f"--format must be csv or json, got {self.fmt!r}")
        if self.command == "wigner":
            if not (math.isfinite(self.window) and self.window > 0):
                bad(f"--window must be a positive half-width, got {self.window}")
            if self.grid < 64:
                bad(f"--grid must be >= 64 cells, got {self.grid}")
            if self.channel == "none" and self.times[0] != 0:
                bad("--kt given without --channel")
            if self.channel == "amplitude" and not math.isfinite(self.times[0]):
                bad("--kt must be finite for the amplitude channel")
        if self.command == "qseries":
            if self.channel == "none":
                bad("qseries requires --channel amplitude or phase")
            if not all(math.isfinite(t) for t in self.times):
                bad("qseries times must be finite")
        if self.command == "witness-sweep":
            lo, hi, step = self.sweep
            if not (step > 0 and hi >= lo >= 0):
                bad("sweep needs 0 <= min <= max and step > 0")
            if self.sweep_var == "xi" and hi >= 1:
                bad("|xi| sweep must stay below 1")
        return self

    def params(self) -> SqueezeParams:
        return SqueezeParams(self.r, self.theta)


def _default_path(name: str) -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, ".")) / name


def _tag(v: float) -> str:
    return format(v, "g")


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------

def cmd_wigner(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    t = cfg.times[0]
    out_path = cfg.output or _default_path(
        f"wigner_r{_tag(cfg.r)}_theta{_tag(cfg.theta)}_p{cfg.p}_{cfg.channel}_kt{_tag(t)}.{cfg.fmt}"
    )
    evaluator = make_evaluator(cfg.params(), cfg.p, cfg.channel, t, cfg.tol)
    report = negativity_analysis(evaluator, GridSpec.square(cfg.window, cfg.grid))
    grid = report.grid
    meta = dict(grid.metadata)
    meta.update({"route": evaluator.route, "window": cfg.window, "cells": cfg.grid})
    grid = type(grid)(grid.x, grid.p, grid.values, meta)
    gridio.write_grid(grid, out_path, cfg.fmt)
    loc = report.min_location
    print(f"route: {evaluator.route}", file=out)
    print(f"min_w: {gridio.fmt(report.min_value)}", file=out)
    print(f"min_location: x={gridio.fmt(loc.real)} p={gridio.fmt(loc.imag)}", file=out)
    print(f"grid_min_w: {gridio.fmt(report.grid_min_value)}", file=out)
    print(f"negative_volume: {gridio.fmt(report.negative_volume)}", file=out)
    print(f"integral: {gridio.fmt(grid.integral())}", file=out)
    print(f"zero_contours: {len(report.contours)}", file=out)
    print(f"wrote: {out_path}", file=out)
    if cfg.gnuplot_hint:
        print(_gnuplot_hint(out_path, cfg.fmt), file=out)
    return EXIT_OK


def _gnuplot_hint(path: Path, fmt_name: str) -> str:
    if fmt_name == "json":
        return (
            "# JSON grids: convert first, e.g.\n"
            f"#   python -c \"from photonsub.gridio import *; import sys; "
            f"sys.stdout.write(grid_to_csv(read_grid_json('{path}')))\" > grid.csv\n"
            "set datafile separator ','\n"
            "set pm3d map\n"
            "splot 'grid.csv' every ::1 using 1:2:3 with pm3d notitle"
        )
    return (
        "set datafile separator ','\n"
        "set xlabel 'x'; set ylabel 'p'\n"
        "set pm3d map\n"
        f"splot '{path}' every ::1 using 1:2:3 with pm3d notitle"
    )


def cmd_qseries(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    out_path = cfg.output or _default_path(
        f"qseries_r{_tag(cfg.r)}_theta{_tag(cfg.theta)}_p{cfg.p}_{cfg.channel}.csv"
    )
    state = state_for_moments(cfg.params(), cfg.p, cfg.tol, order=2)
    series = mandel_q_timeseries(state, cfg.channel, cfg.times)
    Path(out_path).write_text(gridio.table_to_csv(["kt", "q"], series), encoding="utf-8", newline="\n")
    q = series[:, 1]
    print(f"q0: {gridio.fmt(q[0])}", file=out)
    print(f"q_final: {gridio.fmt(q[-1])} at kt={gridio.fmt(series[-1, 0])}", file=out)
    if cfg.channel == "amplitude":
        monotone = bool(np.all(np.diff(np.abs(q)) <= 1e-15))
        print(f"summary: amplitude decay, |Q| {'decays monotonically' if monotone else 'is NOT monotone'} toward 0",
              file=out)
    else:
        constant = bool(np.all(q == q[0]))
        print(f"summary: phase damping, Q {'constant' if constant else 'NOT constant'} in time", file=out)
    print(f"wrote: {out_path}", file=out)
    return EXIT_OK


def _sweep_points(cfg: RunConfig) -> np.ndarray:
    lo, hi, step = cfg.sweep
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(count), 12)


def cmd_witness_sweep(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    out_path = cfg.output or _default_path(f"witness_sweep_p{cfg.p}_theta{_tag(cfg.theta)}.csv")
    values = _sweep_points(cfg)
    xis = np.tanh(values) if cfg.sweep_var == "r" else values

    def witnesses(xi):
        return subtracted_witnesses(SqueezeParams.from_xi(float(xi), cfg.theta), cfg.p)

    rows = []
    for xi in xis:
        rep = witnesses(xi)
        rows.append((xi, rep.q, rep.a3))
    Path(out_path).write_text(gridio.table_to_csv(["xi", "q", "a3"], rows), encoding="utf-8", newline="\n")

    def report(name, col, fn):
        found = False
        for (x0, *v0), (x1, *v1) in zip(rows, rows[1:]):
            a, b = v0[col], v1[col]
            if a is None or b is None or (a < 0) == (b < 0):
                continue
            found = True
            lo, hi = bisect_sign_change(fn, float(x0), float(x1), 1e-4)
            print(f"{name}_sign_change: [{x0:.6g}, {x1:.6g}] "
                  f"refined [{lo:.6f}, {hi:.6f}] r~{math.atanh(0.5 * (lo + hi)):.4f}", file=out)
        if not found:
            signs = {("negative" if v[col] < 0 else "positive") for _, *v in rows if v[col] is not None}
            print(f"{name}_sign_change: none ({'/'.join(sorted(signs)) or 'undefined'} throughout)", file=out)

    def a3_fn(xi):
        a3 = witnesses(xi).a3
        if a3 is None:
            raise DegenerateStateError("A3 undefined")
        return a3

    report("q", 0, lambda xi: witnesses(xi).q)
    report("a3", 1, a3_fn)
    print(f"wrote: {out_path}", file=out)
    return EXIT_OK


# --------------------------------------------------------------------------
# Argument parsing
# --------------------------------------------------------------------------

def _state_args(p: argparse.ArgumentParser, default_p: int = 1):
    p.add_argument("--r", type=float, default=0.31, help="squeezing magnitude r >= 0")
    p.add_argument("--theta", type=float, default=0.0, help="squeezing phase in radians")
    p.add_argument("--p", type=int, default=default_p, help="number of subtracted photons")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="Fock truncation tolerance")
    p.add_argument("--output", type=Path, default=None, help=f"output file (default: ${OUTPUT_DIR_ENV} or cwd)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="photonsub", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    w = sub.add_parser("wigner", help="sample a Wigner function on a grid")
    _state_args(w)
    w.add_argument("--channel", choices=[c.value for c in Channel], default="none")
    w.add_argument("--kt", type=float, default=0.0, help="kappa*t (amplitude) or kappa_p*t (phase)")
    w.add_argument("--grid", type=int, default=256, help="cells per axis (nodes = cells + 1)")
    w.add_argument("--window", type=float, default=3.0, help="half-width of the square window")
    w.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")
    w.add_argument("--gnuplot-hint", action="store_true", help="print a gnuplot snippet for the output")

    q = sub.add_parser("qseries", help="Mandel Q versus time")
    _state_args(q)
    q.add_argument("--channel", choices=["amplitude", "phase"], required=True)
    q.add_argument("--kt", type=float, nargs="+", default=None, help="explicit sorted time list")
    q.add_argument("--kt-max", type=float, default=10.0)
    q.add_argument("--num", type=int, default=101, help="number of equally spaced times from 0 to --kt-max")

    s = sub.add_parser("witness-sweep", help="Q and A3 over a squeezing sweep")
    _state_args(s)
    s.add_argument("--xi-min", type=float, default=None)
    s.add_argument("--xi-max", type=float, default=None)
    s.add_argument("--xi-step", type=float, default=None)
    s.add_argument("--r-min", type=float, default=None)
    s.add_argument("--r-max", type=float, default=None)
    s.add_argument("--r-step", type=float, default=None)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    common = dict(command=args.command, r=args.r, theta=args.theta, p=args.p, tol=args.tol, output=args.output)
    if args.command == "wigner":
        return RunConfig(**common, channel=args.channel, times=(args.kt,), grid=args.grid,
                         window=args.window, fmt=args.fmt, gnuplot_hint=args.gnuplot_hint)
    if args.command == "qseries":
        if args.kt is not None:
            times = tuple(args.kt)
        else:
            if args.num < 2 or not args.kt_max > 0:
                raise UsageError("--num must be >= 2 and --kt-max > 0")
            times = tuple(float(v) for v in np.linspace(0.0, args.kt_max, args.num))
        return RunConfig(**common, channel=args.channel, times=times)
    r_given = [v is not None for v in (args.r_min, args.r_max, args.r_step)]
    xi_given = [v is not None for v in (args.xi_min, args.xi_max, args.xi_step)]
    if any(r_given) and any(xi_given):
        raise UsageError("give either --xi-* or --r-* sweep bounds, not both")
    if any(r_given):
        if not all(r_given):
            raise UsageError("--r-min, --r-max and --r-step are required together")
        return RunConfig(**common, sweep_var="r", sweep=(args.r_min, args.r_max, args.r_step))
    lo = 0.1 if args.xi_min is None else args.xi_min
    hi = 0.9 if args.xi_max is None else args.xi_max
    step = 0.01 if args.xi_step is None else args.xi_step
    return RunConfig(**common, sweep_var="xi", sweep=(lo, hi, step))


COMMANDS = {"wigner": cmd_wigner, "qseries": cmd_qseries, "witness-sweep": cmd_witness_sweep}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(args).validate()
    except UsageError as exc:
        print(f"photonsub {args.command}: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[cfg.command](cfg)
    except PhotonSubError as exc:
        print(f"photonsub {cfg.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"photonsub {cfg.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
