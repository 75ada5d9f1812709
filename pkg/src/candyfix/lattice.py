"""Finite lattice windows, chain stability and the synchronous recoloring step.

A configuration assigns a color id in [0, n) to every site of a finite
d-dimensional box.  A site is unstable when it lies on an axis-aligned run of
at least ``kappa`` equal colors; one update step redraws every unstable site
independently from the recoloring distribution while stable sites keep their
color.  The mask is always computed from the pre-step configuration, so the
update is genuinely synchronous.

Boundary policies fix how runs behave at the box edge:

* ``frozen``           - runs are clipped at the edge.
* ``periodic``         - runs wrap around.
* ``stable-exterior``  - runs are clipped and the (conceptually infinite)
  exterior never contributes to a chain; 1-D only, used with the growing
  window in :mod:`candyfix.montecarlo`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


class Boundary(str, Enum):
    FROZEN = "frozen"
    PERIODIC = "periodic"
    STABLE_EXTERIOR = "stable-exterior"


@dataclass(frozen=True)
class ModelParams:
    """Model constants: dimension, color count, stability constant, recoloring law."""

    d: int = 1
    n: int = 2
    kappa: int = 3
    recolor_dist: tuple[Fraction, ...] = (Fraction(1, 2), Fraction(1, 2))

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        if self.n < 2:
            raise ValueError(f"need at least 2 colors, got {self.n}")
        if self.kappa < 2:
            raise ValueError(f"stability constant must be >= 2, got {self.kappa}")
        dist = tuple(Fraction(p) for p in self.recolor_dist)
        object.__setattr__(self, "recolor_dist", dist)
        if len(dist) != self.n:
            raise ValueError(f"recolor_dist has {len(dist)} entries for n={self.n}")
        if any(p < 0 for p in dist):
            raise ValueError("recolor_dist entries must be nonnegative")
        if sum(dist) != 1:
            raise ValueError(f"recolor_dist must sum to 1 exactly, got {sum(dist)}")

    @property
    def uniform_two_color(self) -> bool:
        return self.n == 2 and self.recolor_dist == (Fraction(1, 2), Fraction(1, 2))

    def sampling_cuts(self) -> np.ndarray:
        """Cumulative thresholds on a 64-bit draw for inversion sampling.

        Exact whenever every cumulative probability has a denominator dividing
        2**64 (all dyadic distributions); otherwise accurate to 2**-64.
        """
        cuts = []
        acc = Fraction(0)
        for p in self.recolor_dist[:-1]:
            acc += p
            cuts.append((acc.numerator << 64) // acc.denominator)
        return np.array(cuts, dtype=np.uint64)


@dataclass(frozen=True, eq=False)
class Configuration:
    """Immutable array of color ids on a finite box plus its boundary policy."""

    cells: np.ndarray
    boundary: Boundary = Boundary.FROZEN

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=np.int64)
        if cells.ndim < 1 or any(s < 1 for s in cells.shape):
            raise ValueError(f"every extent must be >= 1, got shape {cells.shape}")
        cells = cells.copy()
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "boundary", Boundary(self.boundary))

    @property
    def shape(self) -> tuple[int, ...]:
        return self.cells.shape

    @property
    def d(self) -> int:
        return self.cells.ndim

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.boundary == other.boundary and np.array_equal(self.cells, other.cells)


@dataclass(frozen=True, eq=False)
class StabilityMask:
    """One boolean per site; True = stable."""

    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=bool).copy()
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.bits.shape

    def __eq__(self, other):
        if not isinstance(other, StabilityMask):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)


_KEY_MIX = 0x9E3779B97F4A7C15  # golden-ratio odd constant, splits (seed, stream) keys


@dataclass
class RngStream:
    """Counter-based random stream keyed by (seed, stream id).

    Identical (seed, stream) always yields the identical draw sequence and
    distinct stream ids are independent, regardless of how many draws other
    streams consumed.  Draws are grouped into per-step blocks: block ``t``
    starts at Philox counter (0, 0, t, 0), so a step never exhausts its block
    and trajectories stay reproducible under any trial-level parallelism.
    """

    seed: int
    stream: int = 0
    _block: int = field(default=0, repr=False)

    def _key(self) -> np.ndarray:
        k0 = (self.seed * _KEY_MIX + self.stream) & 0xFFFFFFFFFFFFFFFF
        k1 = (self.stream * _KEY_MIX + 0x1234567) & 0xFFFFFFFFFFFFFFFF
        return np.array([k0, k1], dtype=np.uint64)

    def generator_at(self, t: int) -> np.random.Generator:
        counter = np.array([0, 0, t & 0xFFFFFFFFFFFFFFFF, 0], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=self._key(), counter=counter))

    def next_block(self) -> np.random.Generator:
        g = self.generator_at(self._block)
        self._block += 1
        return g


def _validate(config: Configuration, params: ModelParams) -> None:
    if config.d != params.d:
        raise ValueError(f"configuration is {config.d}-dimensional, params say d={params.d}")
    if config.cells.size and (config.cells.min() < 0 or config.cells.max() >= params.n):
        raise ValueError(f"color ids must lie in [0, {params.n})")


def _unstable_along_axis(cells: np.ndarray, axis: int, kappa: int, periodic: bool) -> np.ndarray:
    a = np.moveaxis(cells, axis, -1)
    length = a.shape[-1]
    out = np.zeros(a.shape, dtype=bool)
    if periodic:
        if length < kappa:
            # a window of length kappa wraps onto itself: unstable iff the
            # whole line is monochromatic
            mono = (a == a[..., :1]).all(axis=-1)
            out |= mono[..., None]
            return np.moveaxis(out, -1, axis)
        ext = np.concatenate([a, a[..., : kappa - 1]], axis=-1)
        eq = ext[..., 1:] == ext[..., :-1]
        win = sliding_window_view(eq, kappa - 1, axis=-1).all(axis=-1)  # start per site
        for j in range(kappa):
            out |= np.roll(win, j, axis=-1)
        return np.moveaxis(out, -1, axis)
    if length < kappa:
        return np.moveaxis(out, -1, axis)
    eq = a[..., 1:] == a[..., :-1]
    win = sliding_window_view(eq, kappa - 1, axis=-1).all(axis=-1)
    span = win.shape[-1]  # runs may start at 0 .. length-kappa
    for j in range(kappa):
        out[..., j : j + span] |= win
    return np.moveaxis(out, -1, axis)


def classify_stability(config: Configuration, params: ModelParams) -> StabilityMask:
    """Mark every site lying on an axis-aligned monochromatic run of >= kappa."""
    _validate(config, params)
    periodic = config.boundary == Boundary.PERIODIC
    unstable = np.zeros(config.shape, dtype=bool)
    for axis in range(config.d):
        unstable |= _unstable_along_axis(config.cells, axis, params.kappa, periodic)
    return StabilityMask(~unstable)


def count_unstable(mask: StabilityMask) -> int:
    return int((~mask.bits).sum())


def is_stable(config: Configuration, params: ModelParams) -> bool:
    return count_unstable(classify_stability(config, params)) == 0


def draw_colors(gen: np.random.Generator, params: ModelParams, size: int) -> np.ndarray:
    """Rejection-free inversion sampling of `size` colors on a 64-bit draw."""
    if size == 0:
        return np.zeros(0, dtype=np.int64)
    draws = gen.integers(0, 1 << 64, size=size, dtype=np.uint64)
    cuts = params.sampling_cuts()
    return np.searchsorted(cuts, draws, side="right").astype(np.int64)


def step(config: Configuration, params: ModelParams, rng: RngStream) -> Configuration:
    """One synchronous recoloring: redraw exactly the currently unstable sites."""
    mask = classify_stability(config, params)
    unstable = ~mask.bits
    count = int(unstable.sum())
    if count == 0:
        return Configuration(config.cells, config.boundary)
    new_cells = config.cells.copy()
    new_cells[unstable] = draw_colors(rng.next_block(), params, count)
    return Configuration(new_cells, config.boundary)


# --- serialization ---


def config_to_json(config: Configuration, params: ModelParams) -> dict:
    return {
        "d": config.d,
        "shape": list(config.shape),
        "colors": config.cells.ravel(order="C").tolist(),
        "boundary": config.boundary.value,
        "kappa": params.kappa,
        "n": params.n,
    }


def config_from_json(obj: dict) -> tuple[Configuration, ModelParams]:
    shape = tuple(obj["shape"])
    cells = np.array(obj["colors"], dtype=np.int64).reshape(shape, order="C")
    config = Configuration(cells, Boundary(obj["boundary"]))
    n = int(obj["n"])
    params = ModelParams(
        d=len(shape), n=n, kappa=int(obj["kappa"]),
        recolor_dist=tuple(Fraction(1, n) for _ in range(n)),
    )
    return config, params


def word_to_config(word: str, boundary: Boundary = Boundary.FROZEN) -> Configuration:
    """Compact 1-D form: the color word as a digit string, e.g. '00011'."""
    if not word or not word.isdigit():
        raise ValueError(f"color word must be a nonempty digit string, got {word!r}")
    return Configuration(np.array([int(c) for c in word], dtype=np.int64), boundary)


def config_to_word(config: Configuration) -> str:
    if config.d != 1:
        raise ValueError("color-word form exists only for d=1")
    if config.cells.max(initial=0) > 9:
        raise ValueError("color-word form needs single-digit color ids")
    return "".join(str(int(c)) for c in config.cells)
