"""Exact k-step instability probabilities, worst-case tables and certificates.

Everything here is exact integer arithmetic.  A probability is held as an
integer numerator at a power-of-two exponent (see :class:`candyfix.dyadic.Dyadic`);
the two-color uniform engine never needs anything else because every branch
weight is 1/2.

Core quantities, for the two-color kappa=3 model with uniform recoloring:

* ``p_unstable(k)``  - worst case over windows of P(origin unstable after k
  steps | origin unstable now).
* ``p_triple(k)``    - same, conditioned on the origin and both neighbors
  being unstable.
* ``p_gap(k)[n][m]`` - same, for a stable origin with n stable sites to the
  left, m to the right, and unstable sites immediately beyond.  Index 2k
  stores the saturated value (any count >= 2k behaves identically).

The whole table for one k comes out of a single backward sweep: let
``g_r(w)`` be the probability that the origin is unstable after ``r`` more
steps given the colors ``w`` on the radius-(2r+2) window.  ``g_0`` is the
5-site instability indicator, and ``g_{r+1}`` follows from ``g_r`` by one
synchronous-update convolution: stable interior sites keep their color,
unstable ones average ``g_r`` over both colors.  One update step shrinks the
window by two sites per side (a site's stability reads two neighbors), which
is exactly why radius 2k+2 suffices for k steps - a claim
:func:`window_sufficiency_check` verifies rather than assumes.

Every conditioning then reduces to a boolean mask over the 2^(4k+5) window
words plus a maximum over the shared ``g_k`` vector, so the k=4 sweep runs in
seconds instead of re-running a distribution dynamic program per window.
The per-window forward program (:func:`kstep_prob`) is kept as an independent
implementation and cross-checked against the shared sweep in the test suite.
"""

from __future__ import annotations

import itertools
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .checkpoint import CheckpointStore
from .dyadic import Dyadic
from .windows import (
    Conditioning,
    StableGap,
    TripleUnstable,
    UnrealizableConditioningError,
    UnstableAtOrigin,
    WindowClass,
    conditioning_mask,
    default_radius,
    word_unstable_bits,
)


class EngineConsistencyError(AssertionError):
    """An internal cross-identity of the enumeration failed; results invalid."""


@dataclass(frozen=True)
class EngineParams:
    """Parameters of the exact engine (1-D only).

    Only the theorem setting (kappa=3, two colors, uniform law) carries
    golden-value tests; other parameters are accepted for exploration and go
    through the slower generic path.  The recoloring law must be dyadic so
    the engine stays closed under exact arithmetic.
    """

    kappa: int = 3
    n: int = 2
    recolor_dist: tuple[Fraction, ...] = (Fraction(1, 2), Fraction(1, 2))

    def __post_init__(self):
        if self.kappa < 2:
            raise ValueError(f"kappa must be >= 2, got {self.kappa}")
        if self.n < 2:
            raise ValueError(f"need at least 2 colors, got {self.n}")
        dist = tuple(Fraction(p) for p in self.recolor_dist)
        object.__setattr__(self, "recolor_dist", dist)
        if len(dist) != self.n or any(p < 0 for p in dist) or sum(dist) != 1:
            raise ValueError(f"invalid recoloring distribution {dist}")
        for p in dist:
            Dyadic.from_fraction(p)  # raises unless dyadic

    @classmethod
    def theorem(cls) -> "EngineParams":
        return cls()

    @property
    def is_theorem(self) -> bool:
        return self.kappa == 3 and self.n == 2 and self.recolor_dist == (
            Fraction(1, 2), Fraction(1, 2))

    @property
    def tag(self) -> str:
        p = ",".join(str(x) for x in self.recolor_dist)
        return f"kappa={self.kappa},n={self.n},p={p}"

    def saturation(self, k: int) -> int:
        # instability propagates kappa-1 sites per step
        return (self.kappa - 1) * k


THEOREM = EngineParams.theorem()


# --------------------------------------------------------------------------
# low-level word helpers (two-color fast path)
# --------------------------------------------------------------------------


def _unstable_vec(words: np.ndarray, length: int) -> np.ndarray:
    """Unstable-site bitmasks for an array of word integers (kappa=3)."""
    eq = ~(words ^ (words >> 1))
    m3 = eq & (eq >> 1) & ((1 << (length - 2)) - 1)
    return (m3 | (m3 << 1) | (m3 << 2)) & ((1 << length) - 1)


def _popcounts(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        return np.array([int(x).bit_count() for x in arr], dtype=np.int64)
    return np.bitwise_count(arr.astype(np.uint64)).astype(np.int64)


@lru_cache(maxsize=None)
def _deposits(mask: int) -> np.ndarray:
    """All placements of free bits onto the set positions of ``mask``."""
    positions = [p for p in range(mask.bit_length()) if (mask >> p) & 1]
    j = np.arange(1 << len(positions), dtype=np.int64)
    out = np.zeros_like(j)
    for i, p in enumerate(positions):
        out |= ((j >> i) & 1) << p
    return out


def _group_bounds(sorted_vals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    cuts = np.nonzero(np.diff(sorted_vals))[0] + 1
    starts = np.r_[0, cuts]
    ends = np.r_[cuts, len(sorted_vals)]
    return starts, ends


def _sweep_dtype(max_exp: int):
    if max_exp <= 62:
        return np.int64
    warnings.warn(
        f"exact sweep needs {max_exp}-bit numerators; switching to arbitrary "
        "precision (slow, memory heavy)", ResourceWarning, stacklevel=3)
    return object


# --------------------------------------------------------------------------
# shared backward sweep
# --------------------------------------------------------------------------


def _backward_level(g_next: np.ndarray, length: int, dtype) -> np.ndarray:
    """One backward step: values on length-(L-4) words -> values on length-L words.

    For a word w, the interior [2, L-3] is exactly the region whose stability
    the word determines and the region the next level's words live on.  The
    value is the average of g_next over the 2^u joint recolorings of w's u
    unstable interior sites; stored integers pick up a factor 2^(L-4-u) so
    the whole level shares the exponent increment L-4.
    """
    nint = length - 4
    size = 1 << length
    idx = np.arange(size, dtype=np.int64)
    unstable_interior = (_unstable_vec(idx, length) >> 2) & ((1 << nint) - 1)
    order = np.argsort(unstable_interior, kind="stable")
    sorted_masks = unstable_interior[order]
    starts, ends = _group_bounds(sorted_masks)
    g = np.zeros(size, dtype=dtype)
    tensor = g_next.reshape((2,) * nint)
    for s, e in zip(starts, ends):
        mask = int(sorted_masks[s])
        unstable_positions = [p for p in range(nint) if (mask >> p) & 1]
        axes = tuple(nint - 1 - p for p in unstable_positions)
        summed = tensor.sum(axis=axes) if axes else tensor
        flat = np.ascontiguousarray(summed).ravel()
        words = order[s:e]
        v = np.zeros(words.shape, dtype=np.int64)
        for p in sorted(set(range(nint)) - set(unstable_positions), reverse=True):
            v = (v << 1) | ((words >> (p + 2)) & 1)
        g[words] = flat[v] << (nint - len(unstable_positions))
    return g


def sweep_exponent(k: int) -> int:
    """Exponent of the shared k-step vector: sum of interior sizes per level."""
    return sum(4 * r + 1 for r in range(1, k + 1))


def kstep_vector(k: int, checkpoint: CheckpointStore | None = None) -> tuple[np.ndarray, int]:
    """The shared vector g_k over all radius-(2k+2) words, with its exponent.

    ``g[w] / 2**exp`` is the exact probability that the origin is unstable
    after k synchronous steps given initial colors w.  With a checkpoint
    store, each completed level is persisted and a rerun resumes after the
    deepest stored level.
    """
    if k < 1:
        raise ValueError(f"step count must be >= 1, got {k}")
    max_exp = sweep_exponent(k)
    dtype = _sweep_dtype(max_exp)
    if checkpoint is not None and dtype is object:
        warnings.warn("checkpointing supported only for machine-width sweeps (k <= 4)",
                      ResourceWarning, stacklevel=2)
        checkpoint = None

    start = 0
    g = None
    exp = 0
    if checkpoint is not None:
        done = [r for r in checkpoint.completed_levels() if r <= k]
        if done:
            start = max(done)
            g, exp = checkpoint.load_level(start)
            g = g.astype(dtype, copy=False)
    if g is None:
        length0 = 5
        idx = np.arange(1 << length0, dtype=np.int64)
        g = ((_unstable_vec(idx, length0) >> 2) & 1).astype(dtype)
        if checkpoint is not None and not checkpoint.has_level(0):
            checkpoint.save_level(0, g, 0)

    for r in range(start + 1, k + 1):
        length = 4 * r + 5
        g = _backward_level(g, length, dtype)
        exp += length - 4
        if checkpoint is not None:
            checkpoint.save_level(r, g, exp)
    return g, exp


def masked_max(values: np.ndarray, mask: np.ndarray, threads: int = 1) -> int:
    """Maximum of values[mask] via an associative chunked reduction.

    The reduction is order-independent, so any thread count yields the
    bit-identical result; raises if the mask selects nothing.
    """
    if not mask.any():
        raise UnrealizableConditioningError("conditioning selects no window")
    if threads <= 1:
        return int(values[mask].max())
    chunks = np.array_split(np.arange(len(values)), max(threads * 4, 1))
    def chunk_max(chunk):
        sel = mask[chunk]
        if not sel.any():
            return None
        return int(values[chunk][sel].max())
    with ThreadPoolExecutor(max_workers=threads) as pool:
        partials = [m for m in pool.map(chunk_max, chunks) if m is not None]
    return max(partials)


# --------------------------------------------------------------------------
# probability tables
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbTables:
    """Worst-case k-step instability probabilities for one engine setting.

    ``p_gap`` is indexed 0..sat on both sides; index ``sat`` doubles as the
    value for every larger count (saturation).  ``p_gap[sat][sat]`` is 0.
    """

    k: int
    engine: EngineParams
    p_unstable: Dyadic
    p_triple: Dyadic
    p_gap: tuple[tuple[Dyadic, ...], ...]

    @property
    def sat(self) -> int:
        return self.engine.saturation(self.k)

    def p_gap_at(self, n: int, m: int) -> Dyadic:
        """Gap-table entry with saturation: counts beyond sat read index sat."""
        if n < 0 or m < 0:
            raise ValueError(f"gap sides must be nonnegative, got ({n}, {m})")
        return self.p_gap[min(n, self.sat)][min(m, self.sat)]

    def __eq__(self, other):
        if not isinstance(other, ProbTables):
            return NotImplemented
        return (self.k == other.k and self.engine == other.engine
                and self.p_unstable == other.p_unstable
                and self.p_triple == other.p_triple
                and self.p_gap == other.p_gap)


def worst_case(
    k: int,
    conditioning: Conditioning,
    radius: int | None = None,
    threads: int = 1,
    vector: tuple[np.ndarray, int] | None = None,
) -> Dyadic:
    """Max k-step origin-instability probability over a conditioning class.

    Works at any radius >= 2k+2: beyond the determining radius the value of a
    window is the value of its central radius-(2k+2) part (the locality that
    :func:`window_sufficiency_check` validates), so wider conditionings such
    as a literal stable-gap side of 2k+1 reduce to lookups into the shared
    vector.
    """
    if radius is None:
        radius = default_radius(k, conditioning)
    base = 2 * k + 2
    if radius < base:
        raise ValueError(f"radius {radius} too small for k={k}")
    g, exp = vector if vector is not None else kstep_vector(k)
    mask = conditioning_mask(k, conditioning, radius)
    if radius == base:
        values = g
    else:
        idx = np.arange(1 << (2 * radius + 1), dtype=np.int64)
        values = g[(idx >> (radius - base)) & ((1 << (2 * base + 1)) - 1)]
    return Dyadic(masked_max(values, mask, threads), exp)


def compute_tables(
    k: int,
    engine: EngineParams = THEOREM,
    checkpoint: CheckpointStore | None = None,
    threads: int = 1,
) -> ProbTables:
    """All worst-case tables for k steps; exact maxima over every window class."""
    if not engine.is_theorem:
        return _compute_tables_generic(k, engine)
    g, exp = kstep_vector(k, checkpoint)
    radius = 2 * k + 2
    sat = 2 * k

    def worst(name: str, cond: Conditioning) -> Dyadic:
        if checkpoint is not None:
            stored = checkpoint.get_entry(name)
            if stored is not None:
                return stored
        value = Dyadic(masked_max(g, conditioning_mask(k, cond, radius), threads), exp)
        if checkpoint is not None:
            checkpoint.set_entry(name, value)
        return value

    p_unstable = worst("p_unstable", UnstableAtOrigin())
    p_triple = worst("p_triple", TripleUnstable())
    p_gap = tuple(
        tuple(worst(f"p_gap_{n}_{m}", StableGap(n, m)) for m in range(sat + 1))
        for n in range(sat + 1)
    )
    return ProbTables(k, engine, p_unstable, p_triple, p_gap)


def _compute_tables_generic(k: int, engine: EngineParams) -> ProbTables:
    """Exploratory path for non-theorem parameters: plain sweep over all words."""
    radius = (engine.kappa - 1) * (k + 1)
    length = 2 * radius + 1
    total = engine.n ** length
    if total > 1 << 22:
        warnings.warn(
            f"generic enumeration over {engine.n}^{length} words; this will be slow",
            ResourceWarning, stacklevel=2)
    sat = engine.saturation(k)
    margin = engine.kappa - 1
    flag_span = radius - margin

    best: dict[tuple, Dyadic] = {}
    conds: list[tuple[tuple, object]] = [("p_unstable", lambda f: not f[flag_span]),
                                         ("p_triple", lambda f: not (f[flag_span - 1] or f[flag_span] or f[flag_span + 1]))]

    def gap_pred(n, m):
        def pred(f):
            lo = -min(n, sat) if n == sat else -n
            hi = min(m, sat) if m == sat else m
            if any(not f[x + flag_span] for x in range(lo, hi + 1)):
                return False
            if n != sat and f[-n - 1 + flag_span]:
                return False
            if m != sat and f[m + 1 + flag_span]:
                return False
            return True
        return pred

    for n in range(sat + 1):
        for m in range(sat + 1):
            if n > sat or m > sat:
                continue
            conds.append((("gap", n, m), gap_pred(n, m)))

    for colors in itertools.product(range(engine.n), repeat=length):
        unstable = _runs_unstable(colors, engine.kappa)
        flags = tuple(not unstable[i] for i in range(margin, length - margin))
        matched = [name for name, pred in conds if pred(flags)]
        if not matched:
            continue
        prob = _general_prob(colors, k, engine)
        for name in matched:
            if name not in best or prob > best[name]:
                best[name] = prob

    for name, _ in conds:
        if name not in best:
            raise UnrealizableConditioningError(f"conditioning {name} selects no window")
    p_gap = tuple(
        tuple(best[("gap", n, m)] for m in range(sat + 1)) for n in range(sat + 1)
    )
    return ProbTables(k, engine, best["p_unstable"], best["p_triple"], p_gap)


# --------------------------------------------------------------------------
# per-window k-step probability (independent forward implementation)
# --------------------------------------------------------------------------


def kstep_prob(window: WindowClass, k: int) -> Dyadic:
    """Exact probability that the origin is unstable after k steps.

    Forward distribution dynamic program over the shrinking window: after
    each step only the region whose stability the current region determines
    is retained (two sites fewer per side), and identical words merge by
    adding their masses.  Works for any radius >= 2k+2; with a larger radius
    the extra margin is carried along, which is what makes
    :func:`window_sufficiency_check` informative.
    """
    length = 2 * window.radius + 1
    if window.radius < 2 * k + 2:
        raise ValueError(
            f"radius {window.radius} cannot determine a {k}-step probability "
            f"(need >= {2 * k + 2})")
    max_exp = sum(length - 4 * j - 4 for j in range(k))
    dtype = _sweep_dtype(max_exp)

    state = None  # dense over current-length words, or None before step 1
    word = window.word
    exp = 0
    cur = length
    for _ in range(k):
        nint = cur - 4
        inner_mask = (1 << nint) - 1
        if state is None:
            unstable = (word_unstable_bits(word, cur) >> 2) & inner_mask
            base = ((word >> 2) & inner_mask) & ~unstable
            dep = _deposits(int(unstable))
            state = np.zeros(1 << nint, dtype=dtype)
            state[base | dep] = 1
            exp += int(unstable).bit_count()
        else:
            support = np.nonzero(state)[0]
            values = state[support]
            unstable = (_unstable_vec(support, cur) >> 2) & inner_mask
            bases = ((support >> 2) & inner_mask) & ~unstable
            counts = _popcounts(unstable)
            umax = int(counts.max())
            order = np.argsort(unstable, kind="stable")
            starts, ends = _group_bounds(unstable[order])
            nxt = np.zeros(1 << nint, dtype=dtype)
            for s, e in zip(starts, ends):
                rows = order[s:e]
                mask = int(unstable[rows[0]])
                dep = _deposits(mask)
                shift = umax - mask.bit_count()
                targets = (bases[rows][:, None] | dep[None, :]).ravel()
                contrib = np.broadcast_to(
                    (values[rows] << shift)[:, None], (len(rows), len(dep))).ravel()
                np.add.at(nxt, targets, contrib)
            state = nxt
            exp += umax
        cur = nint
    origin = (cur - 1) // 2
    support = np.nonzero(state)[0]
    hit = (_unstable_vec(support, cur) >> origin) & 1
    return Dyadic(int(state[support][hit == 1].sum()), exp)


def one_step_oracle(window: WindowClass) -> Dyadic:
    """Direct single-step oracle: exhaust every joint recoloring outcome.

    Enumerates the 2^u recolorings of the unstable sites within distance two
    of the origin and classifies the origin on each resulting 5-site word.
    Deliberately contains no distribution projection or merging, so it is an
    independent check on kstep_prob at k=1.
    """
    r = window.radius
    if r < 4:
        raise ValueError("one-step oracle needs radius >= 4")
    local = [x for x in range(-2, 3) if not window.flag_at(x)]
    hits = 0
    for draw in itertools.product((0, 1), repeat=len(local)):
        fresh = dict(zip(local, draw))
        w = [fresh.get(x, window.color_at(x)) for x in range(-2, 3)]
        if (w[0] == w[1] == w[2]) or (w[1] == w[2] == w[3]) or (w[2] == w[3] == w[4]):
            hits += 1
    return Dyadic(hits, len(local))


def _runs_unstable(colors: tuple[int, ...], kappa: int) -> list[bool]:
    """Clipped run-length scan; True where the site lies on a run >= kappa."""
    length = len(colors)
    out = [False] * length
    i = 0
    while i < length:
        j = i
        while j + 1 < length and colors[j + 1] == colors[i]:
            j += 1
        if j - i + 1 >= kappa:
            for t in range(i, j + 1):
                out[t] = True
        i = j + 1
    return out


def kstep_prob_general(window: WindowClass, k: int, engine: EngineParams) -> Dyadic:
    """Generic-parameter k-step probability (exploration path).

    Same shrinking-region program as :func:`kstep_prob` but over an n-color
    alphabet with arbitrary dyadic branch weights, held as exact fractions.
    """
    return _general_prob(tuple(window.colors), k, engine)


def _general_prob(colors: tuple[int, ...], k: int, engine: EngineParams) -> Dyadic:
    margin = engine.kappa - 1
    radius = (len(colors) - 1) // 2
    if radius < margin * (k + 1):
        raise ValueError(
            f"radius {radius} too small for k={k} at kappa={engine.kappa} "
            f"(need >= {margin * (k + 1)})")
    dist = engine.recolor_dist
    state: dict[tuple[int, ...], Fraction] = {colors: Fraction(1)}
    for _ in range(k):
        nxt: dict[tuple[int, ...], Fraction] = {}
        for colors, mass in state.items():
            unstable = _runs_unstable(colors, engine.kappa)
            lo, hi = margin, len(colors) - margin - 1
            free = [i for i in range(lo, hi + 1) if unstable[i]]
            base = list(colors[lo:hi + 1])
            for draw in itertools.product(range(engine.n), repeat=len(free)):
                w = base[:]
                weight = mass
                for pos, c in zip(free, draw):
                    w[pos - lo] = c
                    weight *= dist[c]
                key = tuple(w)
                nxt[key] = nxt.get(key, Fraction(0)) + weight
        state = nxt
    center = (len(next(iter(state))) - 1) // 2
    total = Fraction(0)
    for colors, mass in state.items():
        if _runs_unstable(colors, engine.kappa)[center]:
            total += mass
    return Dyadic.from_fraction(total)


# --------------------------------------------------------------------------
# gap sums, the unbounded-region identity and the contraction certificate
# --------------------------------------------------------------------------


def gap_sum(k: int, size: int, tables: ProbTables) -> Dyadic:
    """Expected-instability bound for a bounded stable region of ``size`` sites."""
    if size < 1:
        raise ValueError(f"gap size must be >= 1, got {size}")
    total = Dyadic(0)
    for i in range(1, size + 1):
        total = total + tables.p_gap_at(i - 1, size - i)
    return total


def max_gap_sum(k: int, tables: ProbTables) -> tuple[int, Dyadic]:
    """The maximizing gap size in 1..2*sat and its sum (constant beyond that)."""
    best_size, best = 1, gap_sum(k, 1, tables)
    for size in range(2, 2 * tables.sat + 1):
        s = gap_sum(k, size, tables)
        if s > best:
            best_size, best = size, s
    return best_size, best


def unbounded_sum(k: int, tables: ProbTables) -> Dyadic:
    """Expected-instability bound for a one-sided-infinite stable region.

    Computed as the saturated-column sum; by saturation plus the vanishing of
    doubly-deep entries it must equal half of gap_sum at size 2*sat, and a
    violation means the enumeration itself is broken, so it is fatal.
    """
    sat = tables.sat
    total = Dyadic(0)
    for i in range(1, sat + 1):
        total = total + tables.p_gap_at(i - 1, sat)
    full = gap_sum(k, 2 * sat, tables)
    if total + total != full:
        raise EngineConsistencyError(
            f"unbounded-region identity failed at k={k}: {total} doubled != {full}")
    return total


@dataclass(frozen=True)
class Certificate:
    """Expected-instability contraction coefficient and its three terms.

    The coefficient multiplies the current unstable count: a third of the
    unstable sites (the run interiors) contribute p_triple, the rest
    p_unstable, and each bounded stable region (at most a third of the
    unstable count) contributes the worst gap sum.  The division by three
    leaves the dyadics, so the terms are exact general rationals.
    """

    k: int
    p_unstable: Dyadic
    p_triple: Dyadic
    gap_max: Dyadic
    gap_argmax: int
    term_triple: Fraction
    term_unstable: Fraction
    term_gap: Fraction
    c: Fraction
    contraction: bool


def certify(
    k: int,
    tables: ProbTables | None = None,
    engine: EngineParams = THEOREM,
    checkpoint: CheckpointStore | None = None,
    threads: int = 1,
) -> Certificate:
    """Assemble the contraction certificate for k steps, exactly."""
    if tables is None:
        tables = compute_tables(k, engine, checkpoint=checkpoint, threads=threads)
    kappa = tables.engine.kappa
    arg, gap = max_gap_sum(k, tables)
    term_triple = Fraction(kappa - 2, kappa) * tables.p_triple.as_fraction()
    term_unstable = Fraction(2, kappa) * tables.p_unstable.as_fraction()
    term_gap = Fraction(1, kappa) * gap.as_fraction()
    c = term_triple + term_unstable + term_gap
    return Certificate(
        k=k,
        p_unstable=tables.p_unstable,
        p_triple=tables.p_triple,
        gap_max=gap,
        gap_argmax=arg,
        term_triple=term_triple,
        term_unstable=term_unstable,
        term_gap=term_gap,
        c=c,
        contraction=c < 1,
    )


# --------------------------------------------------------------------------
# locality validation
# --------------------------------------------------------------------------


def window_sufficiency_check(
    k: int,
    windows: list[WindowClass] | None = None,
    samples: int = 1000,
    seed: int = 0,
) -> bool:
    """Validate that radius 2k+2 windows determine the k-step probability.

    For each window, every one-site exterior extension (both colors on both
    sides) must yield the identical probability when the forward program is
    run with the full extended information.  Windows narrower than 2k+2 are
    checked by exhausting all completions up to radius 2k+2 instead; a
    truncated radius genuinely fails this, which is the point.

    With ``windows=None``: exhaustive over all radius-(2k+2) words at k=1,
    a seeded random sample of ``samples`` words otherwise.
    """
    radius = 2 * k + 2
    if windows is None:
        length = 2 * radius + 1
        if k == 1:
            words = range(1 << length)
        else:
            gen = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
            words = gen.integers(0, 1 << length, size=samples).tolist()
        windows = [WindowClass.from_word(int(w), radius) for w in words]

    for window in windows:
        if window.radius < radius:
            pad = radius - window.radius
            probs = set()
            for left in range(1 << pad):
                for right in range(1 << pad):
                    w = (window.word << pad) | left
                    w |= right << (2 * window.radius + 1 + pad)
                    probs.add(kstep_prob(WindowClass.from_word(w, radius), k))
                    if len(probs) > 1:
                        return False
            continue
        reference = kstep_prob(window, k)
        base = window.word << 1
        top = 2 * window.radius + 2
        for left in (0, 1):
            for right in (0, 1):
                w = base | left | (right << top)
                ext = WindowClass.from_word(w, window.radius + 1)
                if kstep_prob(ext, k) != reference:
                    return False
    return True
