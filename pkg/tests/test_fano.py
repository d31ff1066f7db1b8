import math

import numpy as np
import pytest

from pastirap.fano import (
    FanoResonance,
    bound_admixture,
    continuum_rabi,
    enhancement_max,
    lineshape,
    phase_shift,
    sign_from_resonance,
)
from pastirap.units import energy_from_temperature, mu2eps_from_mu2b

GAMMA = energy_from_temperature(1000.0)  # 1 mK
RES = FanoResonance(q=10.0, gamma=GAMMA, eps_f=0.0)


def test_phase_shift_far_off_resonance():
    assert phase_shift(RES, 1e6 * GAMMA) == pytest.approx(0.0, abs=1e-5)
    assert float(phase_shift(RES, 1e6 * GAMMA)) < 0.0  # approaches zero from below


def test_phase_shift_half_width():
    assert phase_shift(RES, GAMMA / 2) == pytest.approx(-math.pi / 4)


def test_phase_shift_on_resonance_sign_convention():
    assert phase_shift(RES, 0.0) == pytest.approx(-math.pi / 2)


def test_phase_shift_stays_in_branch():
    eps = np.linspace(-5 * GAMMA, 5 * GAMMA, 101)
    d = phase_shift(RES, eps)
    assert np.all(d >= -math.pi / 2) and np.all(d <= math.pi / 2)


def test_bound_admixture_on_resonance():
    assert bound_admixture(RES, 0.0) == pytest.approx(-math.sqrt(2 / (math.pi * GAMMA)))


def test_bound_admixture_off_resonance_vanishes():
    assert abs(bound_admixture(RES, 1e4 * GAMMA)) < 1e-3 * math.sqrt(2 / (math.pi * GAMMA))


def test_bound_admixture_normalization_quadrature():
    """|a(eps)|^2 is a unit-area Lorentzian: integrate on a fine grid."""
    eps = np.linspace(-4000 * GAMMA, 4000 * GAMMA, 2_000_001)
    a2 = np.abs(bound_admixture(RES, eps)) ** 2
    integral = np.trapezoid(a2, eps)
    # finite window leaves a ~1/(pi*4000) tail
    assert integral == pytest.approx(1.0, rel=2e-4)


def test_lineshape_at_resonance_equals_q():
    assert lineshape(RES, 0.0) == pytest.approx(10.0)


def test_lineshape_maximum_value():
    loc, val = enhancement_max(RES)
    assert loc == pytest.approx(GAMMA / 20)
    assert val == pytest.approx(math.sqrt(101.0))
    assert lineshape(RES, loc) == pytest.approx(math.sqrt(101.0))


def test_lineshape_fano_zero():
    assert lineshape(RES, -10.0 * GAMMA / 2) == pytest.approx(0.0, abs=1e-12)


def test_lineshape_asymptotes():
    assert lineshape(RES, 1e6 * GAMMA) == pytest.approx(1.0, rel=1e-4)
    assert lineshape(RES, -1e6 * GAMMA) == pytest.approx(-1.0, rel=1e-4)


def test_lineshape_gradient_vanishes_at_maximum():
    loc, _ = enhancement_max(RES)
    h = GAMMA * 1e-6
    grad = (lineshape(RES, loc + h) - lineshape(RES, loc - h)) / (2 * h)
    scale = lineshape(RES, loc) / GAMMA
    assert abs(grad) / scale < 1e-6


def test_lineshape_maximum_dominates_grid():
    loc, val = enhancement_max(RES)
    eps = np.linspace(-30 * GAMMA, 30 * GAMMA, 20001)
    assert val**2 >= np.max(lineshape(RES, eps) ** 2) - 1e-12
    # squared lineshape against a narrow Gaussian at the maximum beats any grid point
    w = GAMMA / 1000
    window = np.exp(-((eps - loc) ** 2) / (2 * w**2))
    avg = np.trapezoid(lineshape(RES, eps) ** 2 * window, eps) / np.trapezoid(window, eps)
    assert avg <= val**2 + 1e-9


def test_enhancement_max_q1():
    res = FanoResonance(q=1.0, gamma=GAMMA, eps_f=0.0)
    loc, val = enhancement_max(res)
    assert loc == pytest.approx(GAMMA / 2)
    assert val == pytest.approx(math.sqrt(2))


def test_enhancement_value_asymptotic_in_q():
    for q in (30.0, 100.0, 1000.0):
        _, val = enhancement_max(FanoResonance(q=q, gamma=GAMMA, eps_f=0.0))
        assert val / q == pytest.approx(1.0, rel=1.0 / q**2 * 2)


def test_enhancement_max_rejects_q_zero():
    with pytest.raises(ValueError):
        enhancement_max(FanoResonance(q=0.0, gamma=GAMMA, eps_f=0.0))


def test_sign_convention_at_resonance():
    assert sign_from_resonance(RES, 0.0) == 1.0
    assert sign_from_resonance(RES, -1.0) == -1.0


def test_continuum_rabi_magnitude_at_maximum():
    mu2eps = mu2eps_from_mu2b(0.1, 10.0, GAMMA)
    res = FanoResonance(q=10.0, gamma=GAMMA, eps_f=0.0, mu2eps=mu2eps, mu2b=0.1e-18)
    loc, val = enhancement_max(res)
    field = 2.0
    bare = continuum_rabi(res, field, 1e9 * GAMMA)  # lineshape ~ 1 far above
    assert abs(continuum_rabi(res, field, loc)) == pytest.approx(abs(bare) * val, rel=1e-4)


def test_continuum_rabi_sign_flip_for_q0():
    mu2eps = 1e-7
    res = FanoResonance(q=0.0, gamma=GAMMA, eps_f=0.0, mu2eps=mu2eps)
    above = continuum_rabi(res, 1.0, GAMMA / 2)
    below = continuum_rabi(res, 1.0, -GAMMA / 2)
    assert above == pytest.approx(below)  # |g| even in eps for q=0, sgn flips both factors
    # pure continuum window value: (mu E/hbar)/sqrt(2)
    bare = continuum_rabi(res, 1.0, 1e9 * GAMMA)
    assert abs(continuum_rabi(res, 1.0, GAMMA / 2)) == pytest.approx(abs(bare) / math.sqrt(2), rel=1e-4)


def test_resonance_requires_positive_width():
    with pytest.raises(ValueError):
        FanoResonance(q=10.0, gamma=0.0, eps_f=0.0)


def test_dipole_consistency_relation_enforced():
    mu2b_debye = 0.1
    good = mu2eps_from_mu2b(mu2b_debye, 10.0, GAMMA)
    FanoResonance(q=10.0, gamma=GAMMA, eps_f=0.0, mu2eps=good, mu2b=mu2b_debye * 1e-18)
    with pytest.raises(ValueError):
        FanoResonance(q=10.0, gamma=GAMMA, eps_f=0.0, mu2eps=good * 1.01, mu2b=mu2b_debye * 1e-18)
