#!/usr/bin/env python3
"""Emit the data behind every built-in parameter family as CSV files.

Writes one file per family/caption-series combination into --outdir:
grid CSVs (parameter, ln_c, verdict, method) for the 1-parameter families
and fairness-curve CSVs (x, y, status) for the randomized families, plus
the crossing list of family 9.  Output is deterministic, so repeated runs
produce byte-identical files.

Usage:
    PYTHONPATH=src python scripts/reproduce_figures.py --outdir figures_out
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), os.pardir, "src"))

from parrondo.sweep import (  # noqa: E402
    count_sign_changes,
    crossings_csv,
    figure_family,
    grid_csv,
    sweep_grid,
    trace_csv,
    trace_fairness,
)

GRID_SERIES = {
    2: ("g0", ["0", "1/8", "1/2", "1"]),
    7: ("r", ["3/4", "1/2", "1/4", "1/8", "1/16"]),
    8: ("r", ["3/4", "5/8", "1/2", "3/8"]),
    9: ("r", ["1/2", "5/8", "3/4", "7/8"]),
    10: ("r", ["3/4", "1/2", "3/8", "1/4"]),
}

CURVE_SERIES = {
    3: ("q0", ["0", "0.075", "0.125", "0.175", "0.225", "0.25"]),
    5: ("q1", ["1/6", "1/3", "2/3", "5/6"]),
    6: ("q0", ["1/12", "1/6", "1/3", "2/3", "5/6", "11/12"]),
}


def slug(value: str) -> str:
    return value.replace("/", "over").replace(".", "p")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", default="figures_out")
    parser.add_argument("--resolution", type=int, default=1001,
                        help="grid points for 1-parameter families (default 1001)")
    parser.add_argument("--curve-resolution", type=int, default=101,
                        help="columns for fairness-curve families (default 101)")
    args = parser.parse_args()
    os.makedirs(args.outdir, exist_ok=True)

    written = []
    for fig_id, (name, values) in sorted(GRID_SERIES.items()):
        for value in values:
            family = figure_family(fig_id, **{name: value})
            rows = sweep_grid(family, args.resolution)
            path = os.path.join(args.outdir, f"family{fig_id}_{name}_{slug(value)}.csv")
            with open(path, "w") as fh:
                fh.write(grid_csv(family, rows))
            written.append(path)

    for fig_id, (name, values) in sorted(CURVE_SERIES.items()):
        for value in values:
            family = figure_family(fig_id, **{name: value})
            result = trace_fairness(family, args.curve_resolution)
            path = os.path.join(args.outdir, f"family{fig_id}_{name}_{slug(value)}_curve.csv")
            with open(path, "w") as fh:
                fh.write(trace_csv(family, result))
            written.append(path)

    scan = count_sign_changes(figure_family(9, r="5/8"), args.resolution)
    path = os.path.join(args.outdir, "family9_crossings.csv")
    with open(path, "w") as fh:
        fh.write(crossings_csv(scan))
    written.append(path)

    for path in written:
        print(path)
    print(f"{len(written)} files written to {args.outdir}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
