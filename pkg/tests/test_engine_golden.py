"""Frozen exact values for the small-k tables and certificates.

The k=1 per-class probabilities are re-derivable by hand (inclusion-exclusion
over the at most three fresh colors near the origin) and are pinned here;
they are independently confirmed by the exhaustive one-step oracle in
test_engine_properties.  The larger-k certificate components were frozen from
the engine after that oracle, the forward/backward agreement and the Monte
Carlo harness all converged on them.
"""

from fractions import Fraction

from candyfix.dyadic import Dyadic
from candyfix.engine import certify, compute_tables, gap_sum, kstep_prob, max_gap_sum
from candyfix.windows import StableGap, UnstableAtOrigin, enumerate_windows, reduced_class_key

D = Dyadic.parse


def canonical(key):
    mirrored = (tuple(reversed(key[0])), tuple(reversed(key[1])))
    return min(key, mirrored)


def test_k1_headline_values():
    tables = compute_tables(1)
    assert tables.p_unstable == D("5/8")
    assert tables.p_triple == D("1/2")


def test_k1_gap_table():
    tables = compute_tables(1)
    expect = [
        ["1/2", "3/4", "1/2"],
        ["3/4", "1/2", "1/2"],
        ["1/2", "1/2", "0"],
    ]
    for n in range(3):
        for m in range(3):
            assert tables.p_gap[n][m] == D(expect[n][m]), (n, m)


def test_k1_unstable_origin_classes_and_rows():
    """The six reduced classes conditioned on an unstable origin.

    Keys are (flags on [-2,2], colors at stable sites); colors of unstable
    sites are erased because the update never reads them.
    """
    wins = enumerate_windows(1, UnstableAtOrigin())
    got = {}
    for w in wins:
        key = canonical(reduced_class_key(w, 1))
        prob = kstep_prob(w, 1)
        assert got.setdefault(key, prob) == prob, "class probability not constant"
    x = None
    expect = {
        ((0, 0, 0, 0, 0), (x, x, x, x, x)): D("1/2"),
        ((0, 0, 0, 0, 1), (x, x, x, x, 1)): D("1/2"),
        ((0, 0, 0, 1, 0), (x, x, x, 1, x)): D("1/2"),
        ((0, 0, 0, 1, 1), (x, x, x, 1, 0)): D("3/8"),
        ((0, 0, 0, 1, 1), (x, x, x, 1, 1)): D("5/8"),
        ((1, 0, 0, 0, 1), (1, x, x, x, 1)): D("1/2"),
    }
    assert got == {canonical(k): v for k, v in expect.items()}


def test_k1_gap_1_2_classes_and_rows():
    wins = enumerate_windows(1, StableGap(1, 2))
    got = {}
    for w in wins:
        key = reduced_class_key(w, 1)
        prob = kstep_prob(w, 1)
        assert got.setdefault(key, prob) == prob
    x = None
    flags = (0, 1, 1, 1, 1)
    expect = {
        (flags, (x, 1, 0, 0, 1)): D("0"),
        (flags, (x, 1, 0, 1, 0)): D("0"),
        (flags, (x, 1, 0, 1, 1)): D("0"),
        (flags, (x, 0, 0, 1, 0)): D("1/2"),
        (flags, (x, 0, 0, 1, 1)): D("1/2"),
    }
    assert got == expect


def test_k1_gap_2_2_all_zero():
    for w in enumerate_windows(1, StableGap(2, 2)):
        assert kstep_prob(w, 1) == Dyadic(0)


def test_k1_gap_sum_and_certificate():
    tables = compute_tables(1)
    assert gap_sum(1, 1, tables) == D("1/2")
    arg, best = max_gap_sum(1, tables)
    assert (arg, best) == (4, Dyadic(2))
    cert = certify(1, tables=tables)
    assert cert.c == Fraction(5, 4)
    assert not cert.contraction


def test_k2_certificate_exact():
    cert = certify(2)
    assert cert.p_triple == D("29/64")
    assert cert.p_unstable == D("61/128")
    assert cert.gap_max == D("19/8")
    assert cert.c == Fraction(121, 96)
    assert not cert.contraction


def test_k3_certificate_exact():
    cert = certify(3)
    assert cert.p_triple == D("5037/16384")
    assert cert.p_unstable == D("2687/8192")
    assert cert.gap_max == D("2495/1024")
    assert cert.c == Fraction(55705, 49152)
    assert not cert.contraction
