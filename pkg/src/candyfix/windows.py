"""1-D window classes: the enumeration unit behind the exact engine.

A window is a two-color word on sites [-B, B] encoded as an integer (bit
``x + B`` holds the color of site ``x``).  Stability flags are derivable only
on the interior [-B+2, B-2], where a site's full radius-2 neighborhood lies
inside the window; everything here works on those derived flags.

The three conditioning descriptors select the windows whose worst case
defines each probability table:

* ``UnstableAtOrigin``  - sigma(0) = 0.
* ``TripleUnstable``    - sigma(-1) = sigma(0) = sigma(1) = 0.
* ``StableGap(n, m)``   - sigma = 1 on [-n, m] with the flanking sites
  sigma(-n-1) = sigma(m+1) = 0.  A side equal to the saturation threshold
  2k stands for "at least 2k stable sites on that side": the flank lies
  beyond what k steps can propagate to the origin, so the constraint on it
  is dropped (that is also the only reading expressible inside the window's
  derivable flag range).  Sides larger than 2k keep the literal flank and
  need a wider window; they exist to verify the saturation property.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class UnrealizableConditioningError(ValueError):
    """No window satisfies the requested conditioning."""


@dataclass(frozen=True)
class UnstableAtOrigin:
    reflection_symmetric = True

    def __str__(self):
        return "unstable-origin"


@dataclass(frozen=True)
class TripleUnstable:
    reflection_symmetric = True

    def __str__(self):
        return "triple-unstable"


@dataclass(frozen=True)
class StableGap:
    n: int
    m: int

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise ValueError(f"gap sides must be nonnegative, got ({self.n}, {self.m})")

    @property
    def reflection_symmetric(self):
        return self.n == self.m

    def __str__(self):
        return f"stable-gap({self.n},{self.m})"


Conditioning = UnstableAtOrigin | TripleUnstable | StableGap


@lru_cache(maxsize=32)
def unstable_bits_all(length: int) -> np.ndarray:
    """Unstable-site bitmask for every word of ``length`` sites (kappa=3).

    Bit ``j`` of entry ``w`` is set iff site ``j`` of word ``w`` lies on a
    monochromatic run of >= 3 inside the word (runs clipped at the ends).
    Only bits in [2, length-3] are window-derivable flags; the outer bits
    are the clipped-boundary view and must not be read as flags.
    """
    if length < 3 or length > 26:
        raise ValueError(f"word length {length} out of the supported range 3..26")
    idx = np.arange(1 << length, dtype=np.int64)
    eq = ~(idx ^ (idx >> 1))  # bit i: color(i) == color(i+1)
    m3 = eq & (eq >> 1) & ((1 << (length - 2)) - 1)  # bit s: run covering s..s+2
    return (m3 | (m3 << 1) | (m3 << 2)) & ((1 << length) - 1)


def word_unstable_bits(word: int, length: int) -> int:
    """Unstable-site bitmask of one word (same convention as unstable_bits_all)."""
    eq = ~(word ^ (word >> 1))
    m3 = eq & (eq >> 1) & ((1 << (length - 2)) - 1)
    return (m3 | (m3 << 1) | (m3 << 2)) & ((1 << length) - 1)


def default_radius(k: int, conditioning: Conditioning) -> int:
    """Smallest window radius on which the conditioning's flags are derivable."""
    radius = 2 * k + 2
    if isinstance(conditioning, StableGap):
        sat = 2 * k
        if conditioning.n != sat:
            radius = max(radius, conditioning.n + 3)
        if conditioning.m != sat:
            radius = max(radius, conditioning.m + 3)
    return radius


def conditioning_mask(k: int, conditioning: Conditioning, radius: int) -> np.ndarray:
    """Boolean selector over all words of radius ``radius`` for a conditioning."""
    if k < 1:
        raise ValueError(f"step count must be >= 1, got {k}")
    if radius < 2 * k + 2:
        raise ValueError(f"radius {radius} too small for k={k} (need >= {2 * k + 2})")
    length = 2 * radius + 1
    unstable = unstable_bits_all(length)

    def unst(x: int) -> np.ndarray:
        if not -(radius - 2) <= x <= radius - 2:
            raise ValueError(f"flag at site {x} is not derivable at radius {radius}")
        return ((unstable >> (x + radius)) & 1).astype(bool)

    if isinstance(conditioning, UnstableAtOrigin):
        return unst(0)
    if isinstance(conditioning, TripleUnstable):
        return unst(-1) & unst(0) & unst(1)
    if isinstance(conditioning, StableGap):
        sat = 2 * k
        n, m = conditioning.n, conditioning.m
        span_lo = -min(n, sat) if n == sat else -n
        span_hi = min(m, sat) if m == sat else m
        mask = np.ones(1 << length, dtype=bool)
        for x in range(span_lo, span_hi + 1):
            mask &= ~unst(x)
        if n != sat:
            mask &= unst(-n - 1)
        if m != sat:
            mask &= unst(m + 1)
        return mask
    raise TypeError(f"unknown conditioning {conditioning!r}")


@dataclass(frozen=True)
class WindowClass:
    """A color word on [-radius, radius] with its derived stability flags."""

    radius: int
    colors: tuple[int, ...]
    flags: tuple[int, ...]  # sigma on [-(radius-2), radius-2]; 1 = stable
    conditioning: Conditioning | None = None

    def __post_init__(self):
        if self.radius < 2:
            raise ValueError(f"radius must be >= 2, got {self.radius}")
        if len(self.colors) != 2 * self.radius + 1:
            raise ValueError("colors must cover [-radius, radius]")
        if len(self.flags) != 2 * self.radius - 3:
            raise ValueError("flags must cover [-(radius-2), radius-2]")

    @classmethod
    def from_word(cls, word: int, radius: int, conditioning: Conditioning | None = None):
        length = 2 * radius + 1
        unstable = word_unstable_bits(word, length)
        colors = tuple((word >> i) & 1 for i in range(length))
        flags = tuple(1 - ((unstable >> i) & 1) for i in range(2, length - 2))
        return cls(radius, colors, flags, conditioning)

    @property
    def word(self) -> int:
        return sum(c << i for i, c in enumerate(self.colors))

    def color_at(self, x: int) -> int:
        return self.colors[x + self.radius]

    def flag_at(self, x: int) -> int:
        return self.flags[x + self.radius - 2]

    def __str__(self):
        return "".join(str(c) for c in self.colors)


def enumerate_windows(
    k: int,
    conditioning: Conditioning,
    radius: int | None = None,
    fix_origin_color: bool = True,
) -> list[WindowClass]:
    """All windows of the given radius satisfying the conditioning.

    ``fix_origin_color`` halves the enumeration by the global color
    complement, pinning color(0) = 0; the uniform recoloring law makes the
    complement probability-preserving.  An empty result raises rather than
    silently standing in for zero.
    """
    if radius is None:
        radius = default_radius(k, conditioning)
    mask = conditioning_mask(k, conditioning, radius)
    idx = np.nonzero(mask)[0]
    if fix_origin_color:
        idx = idx[(idx >> radius) & 1 == 0]
    if idx.size == 0:
        raise UnrealizableConditioningError(
            f"no radius-{radius} window satisfies {conditioning} at k={k}"
        )
    return [WindowClass.from_word(int(w), radius, conditioning) for w in idx]


def reduced_class_key(window: WindowClass, k: int) -> tuple:
    """Projection of a window onto the classification radius [-2k, 2k].

    Keeps the derived flags and only the colors of stable sites (an unstable
    site is redrawn before its color is ever read, so its color cannot affect
    any k-step probability).  Windows mapping to one key are equivalent.
    """
    span = range(-2 * k, 2 * k + 1)
    flags = tuple(window.flag_at(x) for x in span)
    colors = tuple(
        window.color_at(x) if window.flag_at(x) else None for x in span
    )
    return flags, colors


def reduced_classes(windows: list[WindowClass], k: int) -> set[tuple]:
    """Distinct reduced classes, folding reflections when the conditioning allows."""
    out = set()
    for w in windows:
        key = reduced_class_key(w, k)
        if w.conditioning is not None and w.conditioning.reflection_symmetric:
            mirrored = (tuple(reversed(key[0])), tuple(reversed(key[1])))
            key = min(key, mirrored)
        out.add(key)
    return out
