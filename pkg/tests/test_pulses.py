import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pastirap.pulses import GaussianPulse, PulsePair, evaluate, overlap_time, peak_time

US = 1e-6


def table1_broad_pair(t0=0.0):
    return PulsePair(
        stokes=GaussianPulse(peak=0.74e8, center_offset=0.65 * US, width=1.4 * US, sign=+1),
        pump=GaussianPulse(peak=3829.0, center_offset=1.0 * US, width=3.4 * US, sign=-1),
        t0=t0,
    )


def test_stokes_peaks_at_center():
    p = GaussianPulse(peak=1e8, center_offset=0.65 * US, width=1.4 * US, sign=+1)
    assert evaluate(p, 0.0, -0.65 * US) == pytest.approx(1e8)


def test_value_one_width_from_center():
    p = GaussianPulse(peak=1e8, center_offset=0.65 * US, width=1.4 * US, sign=+1)
    assert evaluate(p, 0.0, -0.65 * US + 1.4 * US) == pytest.approx(1e8 * math.exp(-1))


def test_tail_is_negligible_beyond_six_widths():
    p = GaussianPulse(peak=1e8, center_offset=0.0, width=1.0 * US, sign=+1)
    for t in (6.5 * US, -7.0 * US, 100 * US):
        assert abs(evaluate(p, 0.0, t)) < 1e-12 * p.peak


def test_pump_sign_convention_puts_pump_after_stokes():
    pair = table1_broad_pair()
    assert peak_time(pair.stokes, pair.t0) == pytest.approx(-0.65 * US)
    assert peak_time(pair.pump, pair.t0) == pytest.approx(+1.0 * US)


@given(st.floats(min_value=-5e-6, max_value=5e-6), st.floats(min_value=1e-8, max_value=5e-6))
def test_envelope_symmetric_about_center(delta_t, width):
    p = GaussianPulse(peak=2.0, center_offset=0.3 * US, width=width, sign=-1)
    c = peak_time(p, 0.0)
    assert evaluate(p, 0.0, c + delta_t) == pytest.approx(evaluate(p, 0.0, c - delta_t), rel=1e-14)


def test_evaluate_accepts_arrays():
    p = GaussianPulse(peak=1.0, center_offset=0.0, width=1.0, sign=+1)
    out = evaluate(p, 0.0, np.array([0.0, 1.0, 2.0]))
    assert out == pytest.approx([1.0, math.exp(-1), math.exp(-4)])


def test_overlap_identical_pulses():
    pair = PulsePair(
        stokes=GaussianPulse(peak=1.0, center_offset=0.0, width=2.0 * US, sign=+1),
        pump=GaussianPulse(peak=1.0, center_offset=0.0, width=2.0 * US, sign=-1),
    )
    assert overlap_time(pair) == pytest.approx(2 * math.sqrt(2) * 2.0 * US)


def test_overlap_disjoint_pulses():
    pair = PulsePair(
        stokes=GaussianPulse(peak=1.0, center_offset=100 * US, width=1.0 * US, sign=+1),
        pump=GaussianPulse(peak=1.0, center_offset=100 * US, width=1.0 * US, sign=-1),
    )
    assert overlap_time(pair) == 0.0


def test_overlap_table1_broad_matches_interval_intersection():
    pair = table1_broad_pair()
    # independent interval arithmetic at the e^-2 threshold
    half_s = math.sqrt(2.0) * 1.4 * US
    half_p = math.sqrt(2.0) * 3.4 * US
    lo = max(-0.65 * US - half_s, 1.0 * US - half_p)
    hi = min(-0.65 * US + half_s, 1.0 * US + half_p)
    expected = hi - lo
    assert expected > 0
    assert expected == pytest.approx(3.96e-6, rel=0.01)  # order 1 us
    assert overlap_time(pair) == pytest.approx(expected, rel=1e-12)


def test_overlap_threshold_is_configurable():
    pair = table1_broad_pair()
    assert overlap_time(pair, threshold_exponent=1.0) < overlap_time(pair, threshold_exponent=2.0)


def test_overlap_zero_when_pump_off():
    pair = PulsePair(
        stokes=GaussianPulse(peak=1.0, center_offset=0.0, width=1.0 * US, sign=+1),
        pump=GaussianPulse(peak=0.0, center_offset=0.0, width=1.0 * US, sign=-1),
    )
    assert overlap_time(pair) == 0.0


@given(st.floats(min_value=-1e-4, max_value=1e-4))
def test_overlap_translation_invariant(shift):
    assert overlap_time(table1_broad_pair(t0=shift)) == pytest.approx(
        overlap_time(table1_broad_pair(t0=0.0)), rel=1e-12
    )


def test_pulse_validation():
    with pytest.raises(ValueError):
        GaussianPulse(peak=1.0, center_offset=0.0, width=0.0, sign=+1)
    with pytest.raises(ValueError):
        GaussianPulse(peak=-1.0, center_offset=0.0, width=1.0, sign=+1)
    with pytest.raises(ValueError):
        GaussianPulse(peak=1.0, center_offset=0.0, width=1.0, sign=2)


def test_pair_requires_counter_intuitive_ordering():
    stokes = GaussianPulse(peak=1.0, center_offset=1.0 * US, width=1.0 * US, sign=-1)
    pump = GaussianPulse(peak=1.0, center_offset=1.0 * US, width=1.0 * US, sign=+1)
    with pytest.raises(ValueError):
        PulsePair(stokes=stokes, pump=pump)
