"""Scalar curve families: oscillatory maps, extrema, the tent family,
and exact tranche-gap combinatorics."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tranchelab import ResolutionError, curves


# ---------------------------------------------------------------------------
# unit-landing oscillatory map


def test_warsaw_f_oscillatory_values():
    # independently derived: closed form 0.5*((1-t)*sin(1/t) + 1) on the oscillatory part
    for t in (0.01, 0.1, 0.3, 0.5, 0.7):
        expect = 0.5 * ((1.0 - t) * math.sin(1.0 / t) + 1.0)
        assert curves.warsaw_f(t) == pytest.approx(expect, abs=1e-15)


def test_warsaw_f_lands_at_one():
    assert curves.warsaw_f(1.0) == pytest.approx(1.0, abs=1e-15)


def test_warsaw_f_continuous_at_junction():
    left = curves.warsaw_f(0.7 - 1e-12)
    right = curves.warsaw_f(0.7 + 1e-12)
    assert abs(left - right) < 1e-9


def test_warsaw_f_range():
    t = np.linspace(1e-4, 1.0, 20001)
    v = curves.warsaw_f(t)
    assert np.all(v >= 0.0) and np.all(v <= 1.0)


def test_depth_f_known_values():
    # independently derived: (sin(pi/t) + 1 + 3t)/4 at points where sin is exact
    assert curves.depth_f(0.4) == pytest.approx((1.0 + 1.0 + 1.2) / 4.0, abs=1e-15)
    assert curves.depth_f(0.5) == pytest.approx(0.625, abs=1e-15)
    assert curves.depth_f(1.0) == pytest.approx(0.0, abs=1e-15)


def test_depth_f_continuous_at_half():
    assert abs(curves.depth_f(0.5 - 1e-12) - curves.depth_f(0.5 + 1e-12)) < 1e-9


# ---------------------------------------------------------------------------
# extrema of the drifting oscillation


def test_extrema_alternate_and_decrease():
    tab = curves.find_extrema(8)
    # minima parameters interleave with maxima and decrease toward 0
    for i in range(1, 8):
        assert tab.z(i + 1) < tab.y(i + 1) < tab.z(i)
    assert tab.y(1) == 1.0


def test_extrema_are_local_extrema():
    tab = curves.find_extrema(6)
    h = 1e-7
    for i in range(2, 7):
        y = tab.y(i)
        assert curves.depth_f(y) <= min(curves.depth_f(y - h), curves.depth_f(y + h)) + 1e-10
        z = tab.z(i)
        assert curves.depth_f(z) >= max(curves.depth_f(z - h), curves.depth_f(z + h)) - 1e-10


def test_truncated_f_agrees_above_cut():
    tab = curves.find_extrema(6)
    cut = tab.y(3)
    for t in np.linspace(cut, 1.0, 50):
        assert curves.truncated_f(3, t, tab) == pytest.approx(
            curves.depth_f(t), abs=1e-12
        )


def test_truncated_f_linear_below_cut():
    tab = curves.find_extrema(6)
    cut = tab.y(3)
    ts = np.linspace(cut / 10, cut, 9)
    vals = [curves.truncated_f(3, t, tab) for t in ts]
    slope = curves.depth_f(cut) / cut
    assert vals == pytest.approx([slope * t for t in ts], abs=1e-12)


# ---------------------------------------------------------------------------
# tent family (exact rational endpoints)


def test_tent_endpoints_exact():
    # closed forms: centre endpoint 1/4, right
    # endpoints 1 - 1/(k+1)^2, left endpoints 1/(k+2)^2
    assert curves.tent_endpoint(0) == Fraction(1, 4)
    assert curves.tent_endpoint(2) == 1 - Fraction(1, 9)
    assert curves.tent_endpoint(-2) == Fraction(1, 16)


def test_tent_slopes_at_least_four():
    fam = curves.TentFamily()
    for _, lo, hi, lam in fam.intervals():
        assert lam >= 4
        assert lam == Fraction(2) / (hi - lo)


def test_tent_value_peaks_at_midpoints():
    fam = curves.TentFamily()
    for _, lo, hi, _ in fam.intervals():
        assert curves.tent_value(float(lo)) == pytest.approx(0.0, abs=1e-12)
        assert curves.tent_value(float((lo + hi) / 2)) == pytest.approx(1.0, abs=1e-12)
        assert curves.tent_value(float(hi)) == pytest.approx(0.0, abs=1e-12)


def test_interval_index_is_analytic():
    fam = curves.TentFamily()
    for n, lo, hi, _ in fam.intervals():
        mid = float((lo + hi) / 2)
        assert curves.interval_index_of(mid) == n


@given(st.floats(1e-6, 1.0 - 1e-6))
def test_tent_value_in_unit_interval(x):
    v = curves.tent_value(x)
    assert 0.0 <= v <= 1.0


def test_tent_relation_endpoints_always_admissible():
    assert curves.tent_relation(0.0, 0.37)
    assert curves.tent_relation(1.0, 0.99)
    assert curves.tent_relation(0.4, curves.tent_value(0.4))
    assert not curves.tent_relation(0.4, curves.tent_value(0.4) + 0.1)


# ---------------------------------------------------------------------------
# tranche combinatorics


def test_tranche_bases_level_one():
    assert curves.tranche_bases(1) == [Fraction(0), Fraction(1)]


def test_tranche_bases_level_two_are_preimages():
    for b in curves.tranche_bases(2):
        if b in (0, 1):
            continue
        v = curves.tent_value(float(b))
        assert min(abs(v), abs(1.0 - v)) < 1e-9


def test_tranche_bases_guard():
    with pytest.raises(ResolutionError):
        curves.tranche_bases(4)


def test_gap_law_exact():
    # longest base-free interval shrinks by the minimal slope 4
    for lvl in range(1, 6):
        assert curves.longest_tranche_gap(lvl) == Fraction(1, 4 ** (lvl - 1))
