from fractions import Fraction
from math import sqrt

import numpy as np
import pytest

from candyfix.dyadic import Dyadic
from candyfix.engine import certify, compute_tables, kstep_prob
from candyfix.lattice import Boundary, ModelParams
from candyfix.montecarlo import (
    ExperimentSpec,
    ExplicitWord,
    RandomUnstableBlock,
    UniformRandomBox,
    check_window_estimate,
    estimate_kstep_prob,
    mean_instability,
    run_experiment,
    run_trajectory,
    survival_curve,
    write_trajectories_jsonl,
)
from candyfix.windows import WindowClass

P = ModelParams()


def spec_word(word, **kw):
    return ExperimentSpec(P, ExplicitWord(tuple(int(c) for c in word)), **kw)


def window_from_colors(colors):
    word = sum(c << i for i, c in enumerate(colors))
    return WindowClass.from_word(word, (len(colors) - 1) // 2)


def test_spec_validation():
    with pytest.raises(ValueError):
        ExperimentSpec(P, RandomUnstableBlock(3), boundary=Boundary.FROZEN)
    with pytest.raises(ValueError):
        ExperimentSpec(P, ExplicitWord((0, 1)), trials=0)
    with pytest.raises(ValueError):
        ExperimentSpec(P, UniformRandomBox((4, 4)))  # d mismatch
    with pytest.raises(ValueError):
        ExperimentSpec(ModelParams(d=2), UniformRandomBox((4, 4)),
                       boundary=Boundary.STABLE_EXTERIOR)


def test_chessboard_fixates_immediately():
    stats = run_trajectory(spec_word("0101010"), 0)
    assert stats.fixation_time == 0
    assert stats.I_series == (0,)
    assert stats.final_window_extent is None


def test_word_000_one_step_fixation_probability():
    # exhausting the 8 joint recolorings: only 000 and 111 stay unstable,
    # so fixation at t=1 has probability 6/8
    trials = 4000
    spec = spec_word("000", trials=trials, seed=7)
    stats = run_experiment(spec)
    frac = sum(1 for s in stats if s.fixation_time == 1) / trials
    se = sqrt(0.75 * 0.25 / trials)
    assert abs(frac - 0.75) <= 4 * se
    curve = survival_curve(stats)
    surv1 = curve[1][1]
    assert abs(surv1 - 0.25) <= 4 * se


def test_absorption_once_stable_always_stable():
    spec = spec_word("0001100011", trials=50, seed=3, t_max=500)
    for s in run_experiment(spec):
        assert s.fixation_time is not None
        assert s.I_series[s.fixation_time] == 0
        assert all(i > 0 for i in s.I_series[:s.fixation_time])


def test_growth_and_extent_bounds():
    spec = ExperimentSpec(P, RandomUnstableBlock(10), trials=100, seed=11)
    for s in run_experiment(spec):
        M = s.initial_half_extent
        assert M == 10
        for t, count in enumerate(s.I_series):
            assert count <= 2 * M + 4 * t + 1
        if s.final_window_extent is not None:
            (lo, hi), = s.final_window_extent
            horizon = len(s.I_series) - 1
            assert -M - 2 * horizon <= lo <= hi <= M + 2 * horizon


def test_survival_curve_monotone():
    spec = ExperimentSpec(P, RandomUnstableBlock(6), trials=200, seed=5)
    curve = survival_curve(run_experiment(spec))
    values = [v for _, v in curve]
    assert all(a >= b for a, b in zip(values, values[1:]))
    assert values[-1] == 0.0


def test_reproducibility_bit_identical():
    spec = ExperimentSpec(P, RandomUnstableBlock(8), trials=20, seed=99)
    assert run_experiment(spec) == run_experiment(spec)
    other = ExperimentSpec(P, RandomUnstableBlock(8), trials=20, seed=100)
    assert run_experiment(other) != run_experiment(spec)


def test_parallel_equals_serial():
    spec = ExperimentSpec(P, RandomUnstableBlock(6), trials=12, seed=2)
    assert run_experiment(spec, threads=3) == run_experiment(spec, threads=1)


def test_jsonl_deterministic(tmp_path):
    spec = ExperimentSpec(P, RandomUnstableBlock(5), trials=10, seed=4)
    stats = run_experiment(spec)
    write_trajectories_jsonl(tmp_path / "a.jsonl", stats, "run")
    write_trajectories_jsonl(tmp_path / "b.jsonl", stats, "run")
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()


def test_t_max_reached_reports_none():
    # t_max=1 rarely suffices for a wide block; None is a result, not an error
    spec = ExperimentSpec(P, ExplicitWord((0,) * 30), trials=1, seed=0, t_max=1)
    stats = run_trajectory(spec, 0)
    assert stats.fixation_time is None
    assert len(stats.I_series) == 2


def test_frozen_boundary_trajectory():
    spec = ExperimentSpec(P, ExplicitWord((0, 0, 0, 1, 1)),
                          boundary=Boundary.FROZEN, trials=1, seed=1, t_max=200)
    stats = run_trajectory(spec, 0)
    assert stats.fixation_time is not None


def test_2d_box_trajectory():
    params = ModelParams(d=2)
    spec = ExperimentSpec(params, UniformRandomBox((6, 6)),
                          boundary=Boundary.FROZEN, trials=1, seed=8, t_max=5000)
    stats = run_trajectory(spec, 0)
    assert stats.I_series[0] >= 0
    if stats.fixation_time is not None:
        assert stats.I_series[-1] == 0


def test_estimate_matches_exact_table_rows():
    # classes with exact values 3/8 and 5/8
    row_38 = window_from_colors([1, 1, 0, 0, 0, 1, 0, 1, 1])
    row_58 = window_from_colors([1, 1, 0, 0, 0, 1, 1, 0, 1])
    assert kstep_prob(row_38, 1) == Dyadic(3, 3)
    assert kstep_prob(row_58, 1) == Dyadic(5, 3)
    for window, p in ((row_38, 0.375), (row_58, 0.625)):
        est = estimate_kstep_prob(window, 1, 100_000, seed=5)
        assert abs(est.freq - p) <= 4 * sqrt(p * (1 - p) / est.trials)


def test_estimate_fully_stable_window_exactly_zero():
    window = window_from_colors([0, 1, 0, 1, 0, 1, 0, 1, 0])
    est = estimate_kstep_prob(window, 1, 2000, seed=1)
    assert est.freq == 0.0 and est.se == 0.0
    check = check_window_estimate(window, 1, 2000, seed=1)
    assert check.ok and check.exact == 0.0


def test_mean_contraction_echo(tables_k4):
    # desk-scale echo of the k=4 expected-instability contraction
    c4 = float(certify(4, tables=tables_k4).c)
    spec = ExperimentSpec(P, ExplicitWord((0,) * 30), trials=2000, seed=21, t_max=20)
    stats = run_experiment(spec)
    for t in (0, 4, 8):
        now = mean_instability(stats, t)
        nxt = mean_instability(stats, t + 4)
        se = np.std([s.I_series[t + 4] if t + 4 < len(s.I_series) else 0
                     for s in stats]) / sqrt(len(stats))
        assert nxt <= c4 * now + 5 * se, t
