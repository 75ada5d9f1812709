import numpy as np
import pytest

from candyfix.lattice import ModelParams, classify_stability, word_to_config
from candyfix.windows import (
    StableGap,
    TripleUnstable,
    UnrealizableConditioningError,
    UnstableAtOrigin,
    WindowClass,
    conditioning_mask,
    default_radius,
    enumerate_windows,
    reduced_classes,
    unstable_bits_all,
    word_unstable_bits,
)


def test_unstable_bits_match_lattice_classifier():
    params = ModelParams()
    rng = np.random.default_rng(0)
    for length in (5, 9, 13):
        table = unstable_bits_all(length)
        for word in rng.integers(0, 1 << length, size=200):
            word = int(word)
            bits = "".join(str((word >> i) & 1) for i in range(length))
            mask = classify_stability(word_to_config(bits), params)
            expect = sum((not s) << i for i, s in enumerate(mask.bits))
            assert int(table[word]) == expect == word_unstable_bits(word, length)


def test_window_class_flags_are_interior_only():
    w = WindowClass.from_word(0b000011000, 4)
    assert len(w.flags) == 5
    assert w.flag_at(-2) in (0, 1)
    with pytest.raises(IndexError):
        _ = w.flags[99]


def test_default_radius():
    assert default_radius(1, UnstableAtOrigin()) == 4
    assert default_radius(1, StableGap(1, 2)) == 4
    assert default_radius(1, StableGap(3, 0)) == 6  # literal side beyond saturation
    assert default_radius(2, TripleUnstable()) == 6


def test_enumerate_counts_k1():
    # paper-table sizes at k=1: six reduced classes conditioned on an unstable
    # origin, five for the (1,2) stable gap
    wins = enumerate_windows(1, UnstableAtOrigin())
    assert len(reduced_classes(wins, 1)) == 6
    wins = enumerate_windows(1, StableGap(1, 2))
    assert len(reduced_classes(wins, 1)) == 5


def test_gap_2_2_windows_exist():
    wins = enumerate_windows(1, StableGap(2, 2))
    assert wins  # nonempty; each member evaluates to zero (engine tests)


def test_origin_color_fixed_by_default():
    wins = enumerate_windows(1, UnstableAtOrigin())
    assert all(w.color_at(0) == 0 for w in wins)
    full = enumerate_windows(1, UnstableAtOrigin(), fix_origin_color=False)
    assert len(full) == 2 * len(wins)


def test_unrealizable_conditioning_reported(monkeypatch):
    import candyfix.windows as windows_mod

    monkeypatch.setattr(
        windows_mod, "conditioning_mask",
        lambda k, cond, radius: np.zeros(1 << (2 * radius + 1), dtype=bool))
    with pytest.raises(UnrealizableConditioningError):
        windows_mod.enumerate_windows(1, UnstableAtOrigin())


def test_conditioning_mask_flag_range_guard():
    with pytest.raises(ValueError):
        conditioning_mask(1, StableGap(3, 0), radius=4)  # flag at -4 not derivable
    with pytest.raises(ValueError):
        conditioning_mask(2, UnstableAtOrigin(), radius=4)


def test_stable_gap_validation():
    with pytest.raises(ValueError):
        StableGap(-1, 0)


def test_reflection_symmetry_flag():
    assert UnstableAtOrigin().reflection_symmetric
    assert StableGap(2, 2).reflection_symmetric
    assert not StableGap(1, 2).reflection_symmetric
