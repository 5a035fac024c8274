"""Command-line front end.

Subcommands: classify, compose, simulate, sweep, figure.  Single results
print as JSON, sweeps as CSV; diagnostics go to stderr.  Exit codes: 0 on
success, 1 on input or validation errors, 2 on numerical failures.

Games are given as comma-separated win probabilities (decimal or "a/b"),
as inline JSON, or as a path to a JSON file.  Cycles take semicolon-
separated games via --games, mixtures two games via --mix plus --weights.
All outputs are deterministic given the flags; simulate is keyed by --seed.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from .classify import classify_kernel, classify_schedule
from .errors import NUMERICAL_ERRORS, ParrondoError
from .games import PeriodicGame
from .kernels import (
    DeterministicSchedule,
    EnvironmentKernel,
    StochasticSchedule,
    compose_cycle,
    lift,
    mix,
)
from .simulate import simulate
from .sweep import (
    count_sign_changes,
    crossings_csv,
    figure_family,
    grid_csv,
    sweep_grid,
    trace_csv,
    trace_fairness,
)


class CliInputError(ParrondoError):
    """Bad command line; maps to exit code 1 like other validation errors."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliInputError(message)


def _parse_game(text: str) -> PeriodicGame:
    text = text.strip()
    if text.startswith("{"):
        return PeriodicGame.from_json(text)
    if os.path.isfile(text):
        with open(text) as fh:
            return PeriodicGame.from_json(fh.read())
    return PeriodicGame.of(*[part.strip() for part in text.split(",")])


def _parse_games(text: str) -> list[PeriodicGame]:
    return [_parse_game(part) for part in text.split(";") if part.strip()]


def _read_kernel(path: str) -> EnvironmentKernel:
    if path == "-":
        return EnvironmentKernel.from_json(sys.stdin.read())
    with open(path) as fh:
        return EnvironmentKernel.from_json(fh.read())


def _add_input_flags(parser: _Parser, with_kernel: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--game", help="single game: comma-separated win probabilities")
    group.add_argument("--games", help="deterministic cycle: semicolon-separated games")
    group.add_argument("--mix", help="stochastic mixture: exactly two games, 'P;Q'")
    if with_kernel:
        group.add_argument("--kernel", help="environment kernel JSON file ('-' for stdin)")
    parser.add_argument("--phase", type=int, default=0,
                        help="start residue for deterministic cycles (default 0)")
    parser.add_argument("--weights", help="mixture weights, one per residue: 'g0,g1,...'")


def _schedule_from_args(args) -> Optional[object]:
    if args.games is not None:
        return DeterministicSchedule(tuple(_parse_games(args.games)), args.phase)
    if args.mix is not None:
        games = _parse_games(args.mix)
        if len(games) != 2:
            raise CliInputError("--mix needs exactly two games separated by ';'")
        if args.weights is None:
            raise CliInputError("--mix requires --weights")
        weights = tuple(w.strip() for w in args.weights.split(","))
        return StochasticSchedule(games[0], games[1], weights)
    return None


def _kernel_from_args(args) -> EnvironmentKernel:
    if getattr(args, "kernel", None) is not None:
        return _read_kernel(args.kernel)
    if args.game is not None:
        return lift(_parse_game(args.game))
    schedule = _schedule_from_args(args)
    if isinstance(schedule, DeterministicSchedule):
        return compose_cycle(schedule.games, schedule.phase)
    return lift(mix(schedule.first, schedule.second, schedule.weights))


def _figure_kwargs(args) -> dict:
    fixed = {}
    for name in ("p1", "q1", "q0", "q", "r", "g0"):
        value = getattr(args, name, None)
        if value is not None:
            fixed[name] = value
    return fixed


def _add_figure_flags(parser: _Parser) -> None:
    parser.add_argument("--p1", help="first game's odd-residue entry (families 2, 5, 6)")
    parser.add_argument("--q1", help="second game's odd-residue entry (families 2, 3, 5)")
    parser.add_argument("--q0", help="second game's even-residue entry (families 3, 6)")
    parser.add_argument("--q", help="second game's leading entry (families 7-10)")
    parser.add_argument("--r", help="third game's leading entry (families 7-10)")
    parser.add_argument("--g0", help="fix the even-residue weight (family 2)")
    parser.add_argument("--resolution", type=int, default=None,
                        help="grid points per axis (default 1001 grid / 101 curve)")
    parser.add_argument("--out", help="write output to a file instead of stdout")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


CURVE_FIGURES = (3, 5, 6)


def _run_figure(fig_id: int, fixed: dict, resolution: Optional[int],
                mode: Optional[str], tol: float, out: Optional[str]) -> None:
    if fig_id == 2 and mode in (None, "grid") and "g0" not in fixed:
        fixed["g0"] = "0"
    family = figure_family(fig_id, **fixed)
    if mode is None:
        mode = "curve" if fig_id in CURVE_FIGURES else "grid"
    if mode == "grid":
        res = resolution if resolution is not None else 1001
        _emit(grid_csv(family, sweep_grid(family, res, tol)), out)
    elif mode == "curve":
        res = resolution if resolution is not None else 101
        _emit(trace_csv(family, trace_fairness(family, res, tol=tol)), out)
    elif mode == "crossings":
        res = resolution if resolution is not None else 1001
        _emit(crossings_csv(count_sign_changes(family, res, tol)), out)
    else:
        raise CliInputError(f"unknown sweep mode {mode!r}")


def build_parser() -> _Parser:
    parser = _Parser(prog="parrondo",
                     description="Compose periodic games, classify the resulting "
                                 "walks, and sweep parameter families.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_classify = sub.add_parser("classify", help="winning/fair/losing verdict as JSON")
    _add_input_flags(p_classify)
    p_classify.add_argument("--tol", type=float, default=1e-9,
                            help="fair band half-width on ln_c (default 1e-9)")

    p_compose = sub.add_parser("compose", help="emit the composite environment kernel as JSON")
    _add_input_flags(p_compose, with_kernel=False)
    p_compose.add_argument("--out", help="write output to a file instead of stdout")

    p_sim = sub.add_parser("simulate", help="Monte Carlo drift estimate as JSON")
    _add_input_flags(p_sim)
    p_sim.add_argument("--steps", type=int, default=100_000)
    p_sim.add_argument("--reps", type=int, default=16)
    p_sim.add_argument("--seed", type=int, default=0)

    p_figure = sub.add_parser("figure", help="reproduce a built-in family's data as CSV")
    p_figure.add_argument("--id", type=int, required=True,
                          help="family id: one of 2, 3, 5, 6, 7, 8, 9, 10")
    _add_figure_flags(p_figure)
    p_figure.add_argument("--tol", type=float, default=1e-9)

    p_sweep = sub.add_parser("sweep", help="run a grid/curve/crossings sweep over a family")
    p_sweep.add_argument("--figure", type=int, required=True, dest="id",
                         help="family id: one of 2, 3, 5, 6, 7, 8, 9, 10")
    p_sweep.add_argument("--mode", choices=("grid", "curve", "crossings"), default="grid")
    _add_figure_flags(p_sweep)
    p_sweep.add_argument("--tol", type=float, default=1e-9)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Dispatch a command line; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "classify":
            schedule = None if args.game or args.kernel else _schedule_from_args(args)
            if schedule is not None:
                report = classify_schedule(schedule, args.tol)
            else:
                report = classify_kernel(_kernel_from_args(args), args.tol)
            print(report.to_json())
        elif args.command == "compose":
            _emit(_kernel_from_args(args).to_json() + "\n", args.out)
        elif args.command == "simulate":
            estimate = simulate(_kernel_from_args(args), args.steps, args.reps, args.seed)
            print(estimate.to_json())
        elif args.command == "figure":
            _run_figure(args.id, _figure_kwargs(args), args.resolution, None,
                        args.tol, args.out)
        elif args.command == "sweep":
            _run_figure(args.id, _figure_kwargs(args), args.resolution, args.mode,
                        args.tol, args.out)
        return 0
    except NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except ParrondoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
