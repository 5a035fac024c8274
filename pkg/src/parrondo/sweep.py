"""Parameter-family engine: grids, fairness curves, and verdict transitions.

A family binds an ordered list of free parameters to a composition schedule.
Grids use a half-step inset so sweeps over (0, 1)^k never evaluate the
degenerate endpoints while still approximating the full range: axis
(lo, hi) at resolution n evaluates lo + (hi - lo) * (k + 0.5) / n.

Built-in families (ids 2, 3, 5, 6, 7, 8, 9, 10) are classic parameter
studies of composite games:

    2   two fair 2-periodic games, randomized; mixture fairness vs weights
    3   two losing 2-periodic games, randomized; fairness curve in (g1, g0)
    5   two fair 3-periodic games (matched odd residues); curve in (g1, g0)
    6   same but with the second game "shifted" (q0 = q2)
    7/8 three fair 3-periodic games played cyclically; ln_c vs p
    9/10 three losing 3-periodic games played cyclically; ln_c vs p
        (family 9 shows three verdict transitions along a single parameter)

Each binding freezes its caption constants (fair completions, damping
scales 0.8/0.8/0.9, or 0.8/0.9/0.9 for family 10 whose second damping is
0.9) so a figure is reproducible from its id plus the free choices alone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .classify import DEFAULT_TOL, SpectralReport, classify_schedule
from .errors import ParrondoError, SweepEvaluationError, UnknownFigure
from .games import (
    Classification,
    PeriodicGame,
    Probability,
    _completion_head,
    losing_family_p2,
)
from .kernels import CompositionSchedule, DeterministicSchedule, StochasticSchedule

DEGENERATE_BAND = 1e-11
TRACE_TARGET = 1e-10


@dataclass(frozen=True)
class Family:
    """A named parameter family: free axes plus a binding to schedules."""

    id: str
    free_params: tuple[tuple[str, float, float], ...]
    binding: Callable[[Sequence[float]], CompositionSchedule]


@dataclass(frozen=True)
class SweepRow:
    params: tuple[float, ...]
    ln_c: float
    verdict: Classification
    method: str


@dataclass(frozen=True)
class Crossing:
    param_value: float
    bracket_width: float
    direction: str


@dataclass(frozen=True)
class CrossingScan:
    crossings: tuple[Crossing, ...]
    degenerate: bool


@dataclass(frozen=True)
class TraceColumn:
    x: float
    y: Optional[float]
    status: str


@dataclass(frozen=True)
class TraceResult:
    columns: tuple[TraceColumn, ...]
    degenerate: bool

    @property
    def points(self) -> list[tuple[float, float]]:
        return [(c.x, c.y) for c in self.columns if c.status == "ok"]

    @property
    def no_crossing(self) -> list[float]:
        return [c.x for c in self.columns if c.status == "no_crossing"]


def axis_points(lo: float, hi: float, resolution: int) -> list[float]:
    """Open-box grid: resolution points inset half a step from each end."""
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    span = hi - lo
    return [lo + span * (k + 0.5) / resolution for k in range(resolution)]


def evaluate_at(family: Family, params: Sequence[float],
                tol: float = DEFAULT_TOL) -> SweepRow:
    try:
        report: SpectralReport = classify_schedule(family.binding(params), tol)
    except ParrondoError as exc:
        names = ", ".join(f"{n}={v:.17g}" for (n, _, _), v in zip(family.free_params, params))
        raise SweepEvaluationError(f"family {family.id} at ({names}): {exc}") from exc
    return SweepRow(tuple(params), report.ln_c, report.verdict, report.method)


def sweep_grid(family: Family, resolution, tol: float = DEFAULT_TOL) -> list[SweepRow]:
    """Classify every grid point of the open parameter box, lexicographically."""
    axes_res = ([int(resolution)] * len(family.free_params)
                if isinstance(resolution, int) else [int(r) for r in resolution])
    if len(axes_res) != len(family.free_params):
        raise ValueError("one resolution per free parameter required")
    axes = [axis_points(lo, hi, r) for (_, lo, hi), r in zip(family.free_params, axes_res)]
    return [evaluate_at(family, params, tol) for params in itertools.product(*axes)]


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def count_sign_changes(family: Family, resolution: int,
                       tol: float = DEFAULT_TOL) -> CrossingScan:
    """Bracket and bisect every sign change of ln_c along a 1-parameter family."""
    if len(family.free_params) != 1:
        raise ValueError("count_sign_changes needs exactly one free parameter")
    (_, lo, hi) = family.free_params[0]
    rows = sweep_grid(family, resolution, tol)
    if all(abs(r.ln_c) <= DEGENERATE_BAND for r in rows):
        return CrossingScan((), degenerate=True)
    target_width = (hi - lo) / 1e6

    def ln_c(x: float) -> float:
        return evaluate_at(family, (x,), tol).ln_c

    crossings = []
    last_x = None
    last_sign = 0
    for row in rows:
        s = _sign(row.ln_c)
        if s == 0:
            continue
        if last_sign != 0 and s != last_sign:
            a, b = last_x, row.params[0]
            while b - a > target_width:
                mid = 0.5 * (a + b)
                sm = _sign(ln_c(mid))
                if sm == 0:
                    a = b = mid
                elif sm == last_sign:
                    a = mid
                else:
                    b = mid
            direction = "LosingToWinning" if s > 0 else "WinningToLosing"
            crossings.append(Crossing(0.5 * (a + b), b - a, direction))
        last_x, last_sign = row.params[0], s
    return CrossingScan(tuple(crossings), degenerate=False)


def trace_fairness(family: Family, x_resolution: int, y_probes: int = 33,
                   tol: float = DEFAULT_TOL) -> TraceResult:
    """Trace the ln_c = 0 curve: for each x, bisect in y until |ln_c| < 1e-10.

    Families that are fair along the whole probe grid are flagged degenerate
    instead of traced; columns without a sign change are recorded as
    ``no_crossing`` and are not fatal.
    """
    if len(family.free_params) != 2:
        raise ValueError("trace_fairness needs exactly two free parameters")
    (_, x_lo, x_hi), (_, y_lo, y_hi) = family.free_params
    xs = axis_points(x_lo, x_hi, x_resolution)
    ys = axis_points(y_lo, y_hi, y_probes)

    probe_xs = axis_points(x_lo, x_hi, 5)
    probe_ys = axis_points(y_lo, y_hi, 5)
    if all(abs(evaluate_at(family, (x, y), tol).ln_c) <= DEGENERATE_BAND
           for x in probe_xs for y in probe_ys):
        columns = tuple(TraceColumn(x, None, "degenerate") for x in xs)
        return TraceResult(columns, degenerate=True)

    columns = []
    for x in xs:
        values = [evaluate_at(family, (x, y), tol).ln_c for y in ys]
        bracket = None
        for (y_a, v_a), (y_b, v_b) in zip(zip(ys, values), zip(ys[1:], values[1:])):
            if _sign(v_a) != 0 and _sign(v_b) != 0 and _sign(v_a) != _sign(v_b):
                bracket = (y_a, v_a, y_b)
                break
        if bracket is None:
            columns.append(TraceColumn(x, None, "no_crossing"))
            continue
        a, v_a, b = bracket
        y_mid = 0.5 * (a + b)
        for _ in range(200):
            y_mid = 0.5 * (a + b)
            v_mid = evaluate_at(family, (x, y_mid), tol).ln_c
            if abs(v_mid) < TRACE_TARGET:
                break
            if _sign(v_mid) == _sign(v_a):
                a, v_a = y_mid, v_mid
            else:
                b = y_mid
        else:
            columns.append(TraceColumn(x, None, "no_crossing"))
            continue
        columns.append(TraceColumn(x, y_mid, "ok"))
    return TraceResult(tuple(columns), degenerate=False)


# ------------------------------------------------------------------ built-in families

def _prob(value) -> Probability:
    p = Probability.of(value)
    if not p.is_valid:
        raise UnknownFigure(f"fixed parameter {value!r} is not a probability")
    return p


def _fair_head(*tail) -> Probability:
    f = _completion_head([_prob(t) for t in tail])
    return Probability(float(f), f)


def _fair_pair_2p(odd_entry) -> PeriodicGame:
    t = _prob(odd_entry)
    return PeriodicGame((_fair_head(t), t))


def _fair_triple_flat(t) -> PeriodicGame:
    """(t, t, completion): the fair 3-periodic game with matched leading entries."""
    p = _prob(t)
    return PeriodicGame((p, p, _fair_head(p, p)))


def _losing_triple_flat(t, scale) -> PeriodicGame:
    p = _prob(t)
    return PeriodicGame((p, p, losing_family_p2(p, scale)))


def _take(fixed: dict, name: str, default) -> Probability:
    return _prob(fixed.pop(name, default))


def figure_family(fig_id: int, **fixed) -> Family:
    """A built-in family with its caption constants frozen into the binding.

    Free parameters not pinned by ``fixed`` keep their full open box (0, 1).
    """
    fid = int(fig_id)
    box = (0.0, 1.0)

    if fid == 2:
        p = _fair_pair_2p(_take(fixed, "p1", "1/2"))
        q = _fair_pair_2p(_take(fixed, "q1", "1/4"))
        g0 = fixed.pop("g0", None)
        _reject_unknown(fid, fixed)
        if g0 is None:
            return Family("2", (("g0", *box), ("g1", *box)),
                          lambda v: StochasticSchedule(p, q, (v[0], v[1])))
        g0p = _prob(g0)
        return Family("2", (("g1", *box),),
                      lambda v: StochasticSchedule(p, q, (g0p, v[0])))

    if fid == 3:
        p = PeriodicGame.of("0.675", "0.1")
        q0 = _take(fixed, "q0", "0.25")
        q1 = _take(fixed, "q1", "0.75")
        _reject_unknown(fid, fixed)
        q = PeriodicGame((q0, q1))
        return Family("3", (("g1", *box), ("g0", *box)),
                      lambda v: StochasticSchedule(p, q, (v[1], v[0])))

    if fid in (5, 6):
        p = _fair_triple_flat(_take(fixed, "p1", "1/2"))
        if fid == 5:
            q1 = _take(fixed, "q1", "1/3")
            q = PeriodicGame((_fair_head(q1, q1), q1, q1))
        else:
            q0 = _take(fixed, "q0", "1/6")
            q = PeriodicGame((q0, _fair_head(q0, q0), q0))
        _reject_unknown(fid, fixed)
        return Family(str(fid), (("g1", *box), ("g0", *box)),
                      lambda v: StochasticSchedule(p, q, (v[1], v[0], v[0])))

    if fid in (7, 8):
        q_default = "0.1" if fid == 7 else "3/4"
        r_default = "3/4"
        q = _take(fixed, "q", q_default)
        r = _take(fixed, "r", r_default)
        _reject_unknown(fid, fixed)
        q_game = _fair_triple_flat(q)
        r_game = _fair_triple_flat(r)
        return Family(str(fid), (("p", *box),),
                      lambda v: DeterministicSchedule(
                          (_fair_triple_flat(v[0]), q_game, r_game), 0))

    if fid in (9, 10):
        q_default, q_scale = ("3/4", "0.8") if fid == 9 else ("0.1", "0.9")
        r_default = "5/8" if fid == 9 else "3/4"
        q = _take(fixed, "q", q_default)
        r = _take(fixed, "r", r_default)
        _reject_unknown(fid, fixed)
        q_game = _losing_triple_flat(q, q_scale)
        r_game = _losing_triple_flat(r, "0.9")
        return Family(str(fid), (("p", *box),),
                      lambda v: DeterministicSchedule(
                          (_losing_triple_flat(v[0], "0.8"), q_game, r_game), 0))

    raise UnknownFigure(f"no built-in family with id {fig_id!r}")


def _reject_unknown(fid: int, fixed: dict) -> None:
    if fixed:
        raise UnknownFigure(f"family {fid} does not take parameters {sorted(fixed)}")


# ------------------------------------------------------------------ CSV output

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def grid_csv(family: Family, rows: Sequence[SweepRow]) -> str:
    header = [name for name, _, _ in family.free_params] + ["ln_c", "verdict", "method"]
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join([_fmt(v) for v in row.params]
                              + [_fmt(row.ln_c), row.verdict.value, row.method]))
    return "\n".join(lines) + "\n"


def crossings_csv(scan: CrossingScan) -> str:
    lines = ["param_value,bracket_width,direction"]
    for c in scan.crossings:
        lines.append(f"{_fmt(c.param_value)},{_fmt(c.bracket_width)},{c.direction}")
    return "\n".join(lines) + "\n"


def trace_csv(family: Family, result: TraceResult) -> str:
    x_name = family.free_params[0][0]
    y_name = family.free_params[1][0]
    lines = [f"{x_name},{y_name},status"]
    for col in result.columns:
        y = _fmt(col.y) if col.y is not None else ""
        lines.append(f"{_fmt(col.x)},{y},{col.status}")
    return "\n".join(lines) + "\n"
