from fractions import Fraction

import pytest

from parrondo.classify import classify_schedule
from parrondo.errors import UnknownFigure
from parrondo.games import (
    Classification,
    PeriodicGame,
    fair_completion,
    fairness_constant,
    fairness_constant_exact,
    losing_family_p2,
)
from parrondo.kernels import StochasticSchedule, mix
from parrondo.sweep import (
    Family,
    axis_points,
    count_sign_changes,
    crossings_csv,
    figure_family,
    grid_csv,
    sweep_grid,
    trace_csv,
    trace_fairness,
)

# frozen from the first converged run of this implementation (resolution 1001)
FAMILY9_CROSSINGS = (0.117043601, 0.453393774, 0.761640215)


def diagonal_mixture_family():
    p = PeriodicGame.of(fair_completion(["1/2"]), "1/2")
    q = PeriodicGame.of(fair_completion(["1/4"]), "1/4")
    return Family("diag", (("g", 0.0, 1.0),),
                  lambda v: StochasticSchedule(p, q, (v[0], v[0])))


def test_axis_points_are_inset_and_open():
    pts = axis_points(0.0, 1.0, 4)
    assert pts == [0.125, 0.375, 0.625, 0.875]
    with pytest.raises(ValueError):
        axis_points(0.0, 1.0, 1)


def test_family2_fixed_g0_grid_is_winning_everywhere():
    fam = figure_family(2, g0=0)
    rows = sweep_grid(fam, 101)
    assert len(rows) == 101
    assert all(row.ln_c > 0 for row in rows)
    assert all(row.verdict is Classification.WINNING for row in rows)
    assert all(row.method == "ClosedForm" for row in rows)


def test_family2_surplus_identity_is_exact():
    # at g0 = 0 the mixture's fairness surplus is 4*g1/(3 - g1), exactly
    p = PeriodicGame.of(fair_completion(["1/2"]), "1/2")
    q = PeriodicGame.of(fair_completion(["1/4"]), "1/4")
    for g1 in axis_points(0.0, 1.0, 21):
        g = Fraction(g1)
        c = fairness_constant_exact(mix(p, q, (0, g1)))
        assert c - 1 == 4 * g / (3 - g)


def test_family2_two_parameter_grid_shape():
    rows = sweep_grid(figure_family(2), (3, 5))
    assert len(rows) == 15
    assert [r.params for r in rows] == sorted(r.params for r in rows)


def test_diagonal_mixture_is_degenerate():
    scan = count_sign_changes(diagonal_mixture_family(), 21)
    assert scan.degenerate
    assert scan.crossings == ()


def test_family9_has_three_alternating_crossings():
    scan = count_sign_changes(figure_family(9), 1001)
    assert not scan.degenerate
    assert len(scan.crossings) == 3
    directions = [c.direction for c in scan.crossings]
    assert directions == ["LosingToWinning", "WinningToLosing", "LosingToWinning"]
    for crossing, expected in zip(scan.crossings, FAMILY9_CROSSINGS):
        assert crossing.param_value == pytest.approx(expected, abs=1e-5)
        assert crossing.bracket_width <= 1e-6


def test_family9_ingredients_are_losing_everywhere():
    for p in axis_points(0.0, 1.0, 13):
        game = PeriodicGame.of(p, p, losing_family_p2(p, "0.8"))
        assert fairness_constant(game) < 1


def test_family7_quarter_r_is_always_losing():
    rows = sweep_grid(figure_family(7, r="1/4"), 301)
    assert all(row.ln_c < 0 for row in rows)


def test_family7_three_quarter_r_is_not_always_losing():
    rows = sweep_grid(figure_family(7, r="3/4"), 301)
    assert any(row.ln_c > 0 for row in rows)
    assert any(row.ln_c < 0 for row in rows)


def test_family3_trace_and_probes():
    fam = figure_family(3, q0="0.25")
    result = trace_fairness(fam, 21)
    assert not result.degenerate
    assert len(result.points) >= 10
    assert result.no_crossing  # columns beyond the curve's reach are recorded
    for g1, g0 in result.points[::4]:
        report = classify_schedule(fam.binding((g1, g0)))
        assert abs(report.ln_c) < 1e-9
        above = classify_schedule(fam.binding((g1, min(g0 + 0.05, 0.999))))
        below = classify_schedule(fam.binding((g1, max(g0 - 0.05, 0.001))))
        assert above.verdict is Classification.WINNING
        assert below.verdict is Classification.LOSING


def test_family3_fairness_curve_is_monotone():
    result = trace_fairness(figure_family(3, q0="0.25"), 21)
    ys = [y for _, y in result.points]
    assert ys == sorted(ys)


def test_family5_winning_below_curve():
    fam = figure_family(5, q1="1/3")
    result = trace_fairness(fam, 11)
    assert result.points
    g1, g0 = result.points[5]
    below = classify_schedule(fam.binding((g1, max(g0 - 0.05, 0.001))))
    above = classify_schedule(fam.binding((g1, min(g0 + 0.05, 0.999))))
    assert below.verdict is Classification.WINNING
    assert above.verdict is Classification.LOSING


def test_matched_mixture_family_trace_is_degenerate():
    p = PeriodicGame.of(fair_completion(["0.3"]), "0.3")
    fam = Family("matched", (("g1", 0.0, 1.0), ("g0", 0.0, 1.0)),
                 lambda v: StochasticSchedule(p, p, (v[1], v[0])))
    result = trace_fairness(fam, 7)
    assert result.degenerate
    assert not result.points


def test_family6_supports_endpoint_caption_values():
    fam = figure_family(6, q0=0)
    row = sweep_grid(fam, (3, 3))[4]
    assert row.verdict in (Classification.WINNING, Classification.LOSING, Classification.FAIR)


def test_family10_second_game_damping():
    fam = figure_family(10)
    schedule = fam.binding((0.5,))
    assert schedule.games[1].probs[2].frac == Fraction(729, 820)
    assert schedule.games[1].probs[2].value == pytest.approx(0.889024390243902, abs=1e-14)


def test_family9_second_game_damping():
    schedule = figure_family(9).binding((0.5,))
    assert schedule.games[1].probs[2].frac == Fraction(2, 25)


def test_unknown_figure_ids_and_parameters():
    with pytest.raises(UnknownFigure):
        figure_family(4)
    with pytest.raises(UnknownFigure):
        figure_family(9, bogus=0.5)


def test_grid_csv_format():
    fam = figure_family(2, g0=0)
    rows = sweep_grid(fam, 3)
    text = grid_csv(fam, rows)
    lines = text.strip().split("\n")
    assert lines[0] == "g1,ln_c,verdict,method"
    assert len(lines) == 4
    first = lines[1].split(",")
    assert first[0] == "0.16666666666666666"
    assert first[2] == "Winning" and first[3] == "ClosedForm"


def test_crossings_csv_format():
    scan = count_sign_changes(figure_family(9), 301)
    text = crossings_csv(scan)
    lines = text.strip().split("\n")
    assert lines[0] == "param_value,bracket_width,direction"
    assert len(lines) == 4


def test_trace_csv_format():
    fam = figure_family(3, q0="0.25")
    text = trace_csv(fam, trace_fairness(fam, 7))
    lines = text.strip().split("\n")
    assert lines[0] == "g1,g0,status"
    assert len(lines) == 8
    assert all(line.endswith(("ok", "no_crossing", "degenerate")) for line in lines[1:])
