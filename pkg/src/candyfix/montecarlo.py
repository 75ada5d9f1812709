"""Trajectory simulation, fixation detection and empirical cross-validation.

The theorem-grade setup is 1-D with the ``stable-exterior`` boundary: the
initial window holds the (possibly random) content whose unstable sites all
lie in [-M, M], and the simulated window grows by two sites per side exactly
when instability gets within reach of the edge.  Revealed exterior sites
alternate between two colors and the innermost one always differs from the
current edge color, so a reveal never creates or extends a chain - the
exterior stays maximally inert, which is the reading of "stable exterior"
under which instability still spreads at most two sites per step.

Trials are independent: trial ``i`` draws from the stream (seed, i), with one
counter block per time step, so results are bit-identical no matter how
trials are scheduled.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import sqrt

import numpy as np

from . import engine as _engine
from .lattice import (
    Boundary,
    Configuration,
    ModelParams,
    RngStream,
    _unstable_along_axis,
    classify_stability,
    draw_colors,
    step,
)
from .windows import WindowClass

_INIT_BLOCK = 1 << 62  # RNG block reserved for drawing initial content


@dataclass(frozen=True)
class ExplicitWord:
    colors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))
        if not self.colors:
            raise ValueError("explicit word must be nonempty")


@dataclass(frozen=True)
class RandomUnstableBlock:
    M: int

    def __post_init__(self):
        if self.M < 0:
            raise ValueError(f"block half-width must be >= 0, got {self.M}")


@dataclass(frozen=True)
class UniformRandomBox:
    shape: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "shape", tuple(int(s) for s in self.shape))
        if not self.shape or any(s < 1 for s in self.shape):
            raise ValueError(f"box extents must be >= 1, got {self.shape}")


InitialCondition = ExplicitWord | RandomUnstableBlock | UniformRandomBox


@dataclass(frozen=True)
class ExperimentSpec:
    params: ModelParams
    initial: InitialCondition
    boundary: Boundary = Boundary.STABLE_EXTERIOR
    t_max: int = 100_000
    trials: int = 1
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.t_max < 1:
            raise ValueError(f"t_max must be >= 1, got {self.t_max}")
        if isinstance(self.initial, RandomUnstableBlock):
            if self.params.d != 1 or self.boundary != Boundary.STABLE_EXTERIOR:
                raise ValueError(
                    "a random unstable block needs d=1 and the stable-exterior boundary")
        if isinstance(self.initial, ExplicitWord) and self.params.d != 1:
            raise ValueError("an explicit word needs d=1")
        if isinstance(self.initial, UniformRandomBox):
            if len(self.initial.shape) != self.params.d:
                raise ValueError("box shape does not match the model dimension")
            if self.boundary == Boundary.STABLE_EXTERIOR and self.params.d != 1:
                raise ValueError("the stable-exterior boundary exists only for d=1")

    @property
    def theorem_setting(self) -> bool:
        """True when the run matches the proven fixation regime exactly."""
        return (self.params.d == 1 and self.params.kappa == 3
                and self.params.uniform_two_color
                and self.boundary == Boundary.STABLE_EXTERIOR)


@dataclass(frozen=True)
class TrajectoryStats:
    trial: int
    fixation_time: int | None
    I_series: tuple[int, ...]
    final_window_extent: tuple[tuple[int, int], ...] | None
    initial_half_extent: int

    def as_json(self) -> dict:
        return {
            "trial": self.trial,
            "fixation_time": self.fixation_time,
            "I": list(self.I_series),
            "extent": None if self.final_window_extent is None
            else [list(ax) for ax in self.final_window_extent],
            "M": self.initial_half_extent,
        }


def _alternating_pads(count: int, edge_color: int, n: int) -> np.ndarray:
    """Inert exterior reveal: two alternating colors, innermost != edge color."""
    a = (edge_color + 1) % n
    b = edge_color if n == 2 else (edge_color + 2) % n
    pads = np.empty(count, dtype=np.int64)
    pads[::2] = a  # innermost pad first
    pads[1::2] = b
    return pads


def _initial_word(spec: ExperimentSpec, stream: RngStream) -> tuple[np.ndarray, int]:
    """Initial 1-D window content and the absolute coordinate of its left end."""
    init = spec.initial
    if isinstance(init, ExplicitWord):
        word = np.array(init.colors, dtype=np.int64)
        return word, -(len(word) // 2)
    gen = stream.generator_at(_INIT_BLOCK)
    if isinstance(init, RandomUnstableBlock):
        size = 2 * init.M + 1
        return gen.integers(0, spec.params.n, size=size, dtype=np.int64), -init.M
    size = init.shape[0]
    return gen.integers(0, spec.params.n, size=size, dtype=np.int64), -(size // 2)


def _run_growing(spec: ExperimentSpec, trial: int) -> TrajectoryStats:
    params = spec.params
    stream = RngStream(spec.seed, trial)
    word, lo = _initial_word(spec, stream)
    half = max(abs(lo), abs(lo + len(word) - 1))
    series: list[int] = []
    fixation = None
    ever_lo, ever_hi = None, None

    for t in range(spec.t_max + 1):
        unstable = _unstable_along_axis(word, 0, params.kappa, periodic=False)
        count = int(unstable.sum())
        series.append(count)
        if count == 0:
            fixation = t
            break
        where = np.nonzero(unstable)[0]
        a, b = lo + int(where[0]), lo + int(where[-1])
        if a < -half - 2 * t or b > half + 2 * t:
            raise RuntimeError(
                f"growth bound violated at t={t}: unstable span [{a}, {b}] "
                f"outside [{-half - 2 * t}, {half + 2 * t}]")
        ever_lo = a if ever_lo is None else min(ever_lo, a)
        ever_hi = b if ever_hi is None else max(ever_hi, b)
        if t == spec.t_max:
            break
        word[where] = draw_colors(stream.generator_at(t), params, count)
        # reveal exterior only when instability is within reach of the edge
        if a - 2 < lo:
            pads = _alternating_pads(lo - (a - 2), int(word[0]), params.n)
            word = np.concatenate([pads[::-1], word])
            lo = a - 2
        hi = lo + len(word) - 1
        if b + 2 > hi:
            pads = _alternating_pads(b + 2 - hi, int(word[-1]), params.n)
            word = np.concatenate([word, pads])
    extent = None if ever_lo is None else ((ever_lo, ever_hi),)
    return TrajectoryStats(trial, fixation, tuple(series), extent, half)


def _run_fixed(spec: ExperimentSpec, trial: int) -> TrajectoryStats:
    params = spec.params
    stream = RngStream(spec.seed, trial)
    if isinstance(spec.initial, ExplicitWord):
        cells = np.array(spec.initial.colors, dtype=np.int64)
    else:
        gen = stream.generator_at(_INIT_BLOCK)
        cells = gen.integers(0, params.n, size=spec.initial.shape, dtype=np.int64)
    config = Configuration(cells, spec.boundary)
    series: list[int] = []
    fixation = None
    ever_lo = None
    ever_hi = None
    for t in range(spec.t_max + 1):
        unstable = ~classify_stability(config, params).bits
        count = int(unstable.sum())
        series.append(count)
        if count == 0:
            fixation = t
            break
        where = np.nonzero(unstable)
        lo = tuple(int(w.min()) for w in where)
        hi = tuple(int(w.max()) for w in where)
        ever_lo = lo if ever_lo is None else tuple(map(min, ever_lo, lo))
        ever_hi = hi if ever_hi is None else tuple(map(max, ever_hi, hi))
        if t == spec.t_max:
            break
        config = step(config, params, stream)
    extent = None if ever_lo is None else tuple(zip(ever_lo, ever_hi))
    half = max(config.shape) // 2
    return TrajectoryStats(trial, fixation, tuple(series), extent, half)


def run_trajectory(spec: ExperimentSpec, trial: int) -> TrajectoryStats:
    """One trajectory: iterate the synchronous update until stable or t_max.

    Stability is absorbing, so the loop halts at the first step with no
    unstable site; hitting t_max without fixation reports fixation_time None.
    """
    if spec.boundary == Boundary.STABLE_EXTERIOR and spec.params.d == 1:
        return _run_growing(spec, trial)
    return _run_fixed(spec, trial)


def _trial_range(spec: ExperimentSpec, lo: int, hi: int) -> list[TrajectoryStats]:
    return [run_trajectory(spec, t) for t in range(lo, hi)]


def run_experiment(spec: ExperimentSpec, threads: int = 1) -> list[TrajectoryStats]:
    """All trials, optionally in parallel; output is independent of scheduling."""
    if threads <= 1 or spec.trials < 4:
        return _trial_range(spec, 0, spec.trials)
    edges = np.linspace(0, spec.trials, threads + 1, dtype=int)
    with ProcessPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(_trial_range, *zip(*[(spec, int(a), int(b))
                                              for a, b in zip(edges, edges[1:])]))
    out: list[TrajectoryStats] = []
    for part in parts:
        out.extend(part)
    return out


def survival_curve(stats: list[TrajectoryStats]) -> list[tuple[int, float]]:
    """Per-step fraction of trials still carrying instability (nonincreasing)."""
    horizon = max(len(s.I_series) for s in stats) - 1
    trials = len(stats)
    curve = []
    for t in range(horizon + 1):
        alive = sum(
            1 for s in stats if t < len(s.I_series) and s.I_series[t] >= 1)
        curve.append((t, alive / trials))
    return curve


def mean_instability(stats: list[TrajectoryStats], t: int) -> float:
    """Mean unstable-site count at time t; fixated trajectories count zero."""
    return sum(s.I_series[t] if t < len(s.I_series) else 0 for s in stats) / len(stats)


# --------------------------------------------------------------------------
# window-probability estimation (cross-validation of the exact engine)
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EstimatedProb:
    freq: float
    se: float
    trials: int


def _unstable_rows(words: np.ndarray) -> np.ndarray:
    eq = words[:, 1:] == words[:, :-1]
    m3 = eq[:, :-1] & eq[:, 1:]
    out = np.zeros(words.shape, dtype=bool)
    out[:, :-2] |= m3
    out[:, 1:-1] |= m3
    out[:, 2:] |= m3
    return out


def estimate_kstep_prob(
    window: WindowClass,
    k: int,
    trials: int,
    seed: int = 0,
    params: ModelParams | None = None,
) -> EstimatedProb:
    """Empirical frequency of an unstable origin after k steps, with its SE.

    Simulates the window as a batch of rows under clipped runs.  Sites whose
    classification the window cannot determine are simulated with the clipped
    view; their recolorings never reach the origin's shrinking information
    cone within k steps, so the origin frequency is unbiased.
    """
    if params is None:
        params = ModelParams()
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if window.radius < 2 * k + 2:
        raise ValueError(f"radius {window.radius} cannot determine k={k}")
    stream = RngStream(seed, 0)
    words = np.tile(np.array(window.colors, dtype=np.int8), (trials, 1))
    for t in range(k):
        unstable = _unstable_rows(words)
        gen = stream.generator_at(t)
        if params.uniform_two_color:
            draws = gen.integers(0, 2, size=words.shape, dtype=np.int8)
        else:
            raw = gen.integers(0, 1 << 64, size=words.shape, dtype=np.uint64)
            draws = np.searchsorted(
                params.sampling_cuts(), raw, side="right").astype(np.int8)
        words = np.where(unstable, draws, words)
    c = words[:, window.radius - 2: window.radius + 3]
    hit = (
        ((c[:, 0] == c[:, 1]) & (c[:, 1] == c[:, 2]))
        | ((c[:, 1] == c[:, 2]) & (c[:, 2] == c[:, 3]))
        | ((c[:, 2] == c[:, 3]) & (c[:, 3] == c[:, 4]))
    )
    freq = float(hit.sum()) / trials
    return EstimatedProb(freq, sqrt(freq * (1.0 - freq) / trials), trials)


@dataclass(frozen=True)
class WindowCheck:
    window: WindowClass
    exact: float
    freq: float
    tolerance: float
    ok: bool


def check_window_estimate(
    window: WindowClass, k: int, trials: int, seed: int = 0
) -> WindowCheck:
    """Compare the empirical frequency against the exact value at 4 SE.

    The tolerance uses the exact probability's binomial standard error; a
    degenerate exact value (0 or 1) therefore demands an exact match.
    """
    exact = float(_engine.kstep_prob(window, k))
    est = estimate_kstep_prob(window, k, trials, seed)
    tol = 4.0 * sqrt(exact * (1.0 - exact) / trials)
    ok = abs(est.freq - exact) <= tol
    return WindowCheck(window, exact, est.freq, tol, ok)


# --------------------------------------------------------------------------
# result files
# --------------------------------------------------------------------------


def write_trajectories_jsonl(path, stats: list[TrajectoryStats], run_id: str) -> None:
    with open(path, "w") as fh:
        for s in stats:
            rec = {"manifest": run_id, **s.as_json()}
            fh.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")


def write_aggregate_csv(path, stats: list[TrajectoryStats]) -> None:
    horizon = max(len(s.I_series) for s in stats) - 1
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "survivors", "mean_I"])
        for t in range(horizon + 1):
            alive = sum(1 for s in stats if t < len(s.I_series) and s.I_series[t] >= 1)
            writer.writerow([t, alive, repr(mean_instability(stats, t))])
