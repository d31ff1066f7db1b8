import math

import mpmath as mp
import numpy as np
import pytest
from scipy.integrate import quad

from pastirap.specfun import (
    ASYMPTOTIC_CUTOFF,
    SERIES_CUTOFF,
    i0_minus_l0,
    i0_minus_l0_values,
    i1_minus_lm1,
    i1_minus_lm1_values,
)


def series_oracle(x: float, dps: int = 60):
    """I0-L0 and I1-L-1 from their power series in high-precision arithmetic.

    I0 = sum (x^2/4)^k / k!^2               L0  = sum (x/2)^(2k+1) / G(k+3/2)^2
    I1 = sum (x/2)^(2k+1) / (k! (k+1)!)     L-1 = sum (x/2)^(2k)   / (G(k+3/2) G(k+1/2))
    """
    with mp.workdps(dps):
        xm = mp.mpf(x)
        h = xm / 2
        i0 = mp.nsum(lambda k: (h**2) ** k / mp.factorial(k) ** 2, [0, mp.inf])
        l0 = mp.nsum(lambda k: h ** (2 * k + 1) / mp.gamma(k + mp.mpf(3) / 2) ** 2, [0, mp.inf])
        i1 = mp.nsum(lambda k: h ** (2 * k + 1) / (mp.factorial(k) * mp.factorial(k + 1)), [0, mp.inf])
        lm1 = mp.nsum(
            lambda k: h ** (2 * k) / (mp.gamma(k + mp.mpf(3) / 2) * mp.gamma(k + mp.mpf(1) / 2)),
            [0, mp.inf],
        )
        return float(i0 - l0), float(i1 - lm1)


def quadrature_oracle(x: float):
    """Independent adaptive quadrature of Int_0^1 e^{-xu} (1-u^2)^{-1/2} {1, u} du."""
    v0, _ = quad(lambda u: math.exp(-x * u) / math.sqrt(1 - u * u), 0.0, 1.0, epsabs=1e-13)
    v1, _ = quad(lambda u: math.exp(-x * u) * u / math.sqrt(1 - u * u), 0.0, 1.0, epsabs=1e-13)
    return (2.0 / math.pi) * v0, -(2.0 / math.pi) * v1


def test_values_at_zero():
    assert i0_minus_l0(0.0).value == pytest.approx(1.0)
    # L-1(0) = 2/pi comes from the k = 0 term 1/(Gamma(1/2) Gamma(3/2))
    k0 = 1.0 / (math.gamma(0.5) * math.gamma(1.5))
    assert k0 == pytest.approx(2.0 / math.pi)
    assert i1_minus_lm1(0.0).value == pytest.approx(-2.0 / math.pi)


@pytest.mark.parametrize("x", [0.1, 1.0, 5.0, 20.0])
def test_against_series_oracle(x):
    t0, t1 = series_oracle(x)
    assert i0_minus_l0(x).value == pytest.approx(t0, rel=1e-8)
    assert i1_minus_lm1(x).value == pytest.approx(t1, rel=1e-8)


@pytest.mark.parametrize("x", [0.1, 1.0, 5.0, 20.0])
def test_against_quadrature_oracle(x):
    t0, t1 = quadrature_oracle(x)
    assert i0_minus_l0(x).value == pytest.approx(t0, rel=1e-7)
    assert i1_minus_lm1(x).value == pytest.approx(t1, rel=1e-7)


def test_large_argument_asymptotics():
    x = 100.0
    assert i0_minus_l0(x).value == pytest.approx(2.0 / (math.pi * x), rel=0.01)
    assert abs(i1_minus_lm1(x).value) == pytest.approx(2.0 / (math.pi * x * x), rel=0.01)
    assert i1_minus_lm1(x).value < 0.0


def test_overflow_safe_at_700():
    r0 = i0_minus_l0(700.0)
    r1 = i1_minus_lm1(700.0)
    assert math.isfinite(r0.value) and math.isfinite(r1.value)
    assert r0.value == pytest.approx(2.0 / (math.pi * 700.0), rel=1e-4)


def test_accuracy_contract():
    """rel < 1e-10 on [0, 50], < 1e-6 above (sampled)."""
    for x in [0.5, 3.0, 7.0, 12.0, 25.0, 44.0, 50.0]:
        t0, t1 = series_oracle(x)
        assert abs(i0_minus_l0(x).value - t0) <= 1e-10 * abs(t0)
        assert abs(i1_minus_lm1(x).value - t1) <= 1e-10 * abs(t1)
    for x in [60.0, 120.0, 400.0]:
        t0, t1 = series_oracle(x, dps=80 + int(0.5 * x))
        assert abs(i0_minus_l0(x).value - t0) <= 1e-6 * abs(t0)
        assert abs(i1_minus_lm1(x).value - t1) <= 1e-6 * abs(t1)


def test_branch_crossovers_agree():
    from pastirap.specfun import (
        _asymptotic_i0_l0,
        _asymptotic_i1_lm1,
        _quad_pair,
        _series_i0_l0,
        _series_i1_lm1,
    )

    x = SERIES_CUTOFF
    v0q, v1q, _ = _quad_pair(x)
    assert _series_i0_l0(x)[0] == pytest.approx(float(v0q[0]), abs=1e-8)
    assert _series_i1_lm1(x)[0] == pytest.approx(float(v1q[0]), abs=1e-8)
    x = ASYMPTOTIC_CUTOFF
    v0q, v1q, _ = _quad_pair(x)
    assert _asymptotic_i0_l0(x)[0] == pytest.approx(float(v0q[0]), abs=1e-8)
    assert _asymptotic_i1_lm1(x)[0] == pytest.approx(float(v1q[0]), abs=1e-8)


def test_monotone_decay_for_moderate_arguments():
    x = np.logspace(math.log10(2.0), math.log10(500.0), 60)
    v0 = np.abs(i0_minus_l0_values(x))
    v1 = np.abs(i1_minus_lm1_values(x))
    assert np.all(np.diff(v0) < 0)
    assert np.all(np.diff(v1) < 0)


def test_error_estimates_bound_true_error():
    for x in np.linspace(0.0, 700.0, 36):
        t0, t1 = series_oracle(float(x), dps=80 + int(0.5 * x))
        r0 = i0_minus_l0(float(x))
        r1 = i1_minus_lm1(float(x))
        assert r0.est_error >= 0 and abs(r0.value - t0) <= r0.est_error
        assert r1.est_error >= 0 and abs(r1.value - t1) <= r1.est_error


def test_vector_matches_scalar():
    x = np.array([0.0, 0.3, 6.0, 10.0, 45.0, 200.0])
    assert i0_minus_l0_values(x) == pytest.approx([i0_minus_l0(v).value for v in x], rel=1e-14)
    assert i1_minus_lm1_values(x) == pytest.approx([i1_minus_lm1(v).value for v in x], rel=1e-14)


def test_negative_argument_rejected():
    with pytest.raises(ValueError):
        i0_minus_l0(-0.1)
    with pytest.raises(ValueError):
        i1_minus_lm1(-1.0)
    with pytest.raises(ValueError):
        i0_minus_l0_values(np.array([1.0, -2.0]))
