import math

import numpy as np
import pytest

from conftest import FIG3
from pecvqkd.channel import ChannelParams
from pecvqkd.errors import InsufficientGrid, InvalidParameter
from pecvqkd.keyrate import secret_key_rate
from pecvqkd.scenario import ScenarioGrid, evaluate_point, gap_monotonicity_report, sweep

BASE = ChannelParams(T=0.5, **FIG3)


def test_k_one_collapses_all_legs():
    for T in (0.1, 0.5, 1.0):
        row = evaluate_point(BASE, T, 1.0, 0.05)
        assert row.K_nominal == row.K_practical == row.K_estimated
        assert row.gap == 0.0 and row.complete


def test_legs_use_the_right_parameters():
    row = evaluate_point(BASE, 0.4, 1.2, 0.05)
    assert row.K_nominal == secret_key_rate(BASE.with_(T=0.4)).K
    assert row.K_practical == secret_key_rate(BASE.with_(T=0.4, V_A=4.8)).K
    assert row.K_estimated == pytest.approx(secret_key_rate(BASE.with_(T=0.48, eps=0.05 / 1.2)).K, rel=1e-12)
    assert row.gap == row.K_practical - row.K_estimated


def test_gap_sign_follows_k():
    # the estimated rate overstates the real one for k > 1 and understates it for k < 1
    for T in np.arange(0.1, 0.81, 0.1):
        for k in (0.6, 0.8, 0.9, 1.1, 1.2):
            row = evaluate_point(BASE, float(T), k, 0.05)
            if row.complete:
                assert np.sign(row.K_estimated - row.K_practical) == np.sign(k - 1)


def test_out_of_range_estimate_is_a_partial_row():
    row = evaluate_point(BASE, 0.9, 1.2, 0.05)
    assert row.status == "partial:estimated=invalid_parameter"
    assert math.isnan(row.K_estimated) and math.isnan(row.gap)
    assert not math.isnan(row.K_practical)
    assert math.isnan(row.rel_gap)


def test_sweep_order_and_degenerate_grid():
    grid = ScenarioGrid((0.3, 0.6), (0.9, 1.1), (0.05,), BASE)
    rows = sweep(grid)
    assert [(r.T, r.k) for r in rows] == [(0.3, 0.9), (0.3, 1.1), (0.6, 0.9), (0.6, 1.1)]
    one = sweep(ScenarioGrid((0.5,), (1.0,), (0.05,), BASE))
    assert len(one) == 1 and one[0].gap == 0.0


def test_sweep_parallel_is_identical():
    grid = ScenarioGrid(tuple(np.linspace(0.1, 1, 7)), (0.7, 1.0, 1.3), (0.03, 0.07), BASE)
    # NaN legs compare unequal, so compare the printed form
    assert repr(sweep(grid)) == repr(sweep(grid, workers=3))


def test_grid_validation():
    with pytest.raises(InvalidParameter):
        ScenarioGrid((), (1.0,), (0.05,), BASE)
    with pytest.raises(InvalidParameter):
        ScenarioGrid((0.5,), (0.0,), (0.05,), BASE)
    with pytest.raises(InvalidParameter):
        evaluate_point(BASE, 0.5, -1.0, 0.05)


def test_gap_grows_with_k_above_one():
    rows = sweep(ScenarioGrid((0.2, 0.4, 0.6), tuple(np.arange(0.5, 1.51, 0.1)), (0.05,), BASE))
    report = gap_monotonicity_report(rows)
    assert report["checked_series"] == 6
    assert not [v for v in report["violations"] if v["branch"] == "above"]
    assert report["gap_signs"]["above"]["positive"] == 0
    # below one the practical rate exceeds the estimate, so the gap is positive
    assert report["gap_signs"]["below"]["negative"] == 0


def test_gap_report_needs_two_points_per_branch():
    rows = sweep(ScenarioGrid((0.5,), (0.9, 1.0, 1.1), (0.05,), BASE))
    with pytest.raises(InsufficientGrid):
        gap_monotonicity_report(rows)


def test_relative_gap_grows_with_eps():
    for k in (0.8, 1.2):
        rel = [abs(evaluate_point(BASE, 0.5, k, e).rel_gap) for e in (0.03, 0.05, 0.07)]
        assert rel[0] < rel[1] < rel[2]
