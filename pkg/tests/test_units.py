import math

import pytest
from hypothesis import given, strategies as st

from pastirap import units
from pastirap.units import (
    CONSTANTS,
    Dimension,
    UnitValue,
    continuum_coupling_from_amplitude,
    display_pump_units,
    energy_from_temperature,
    field_from_intensity,
    intensity_from_field,
    mu2eps_from_mu2b,
    pump_amplitude_broad_from_intensity,
    pump_intensity_broad,
    pump_intensity_narrow,
    stokes_intensity,
    temperature_from_energy,
)

# Table values (W/cm^2) for the tabulated Stokes Rabi frequencies, mu21 = 0.1 D
STOKES_ROWS = [
    (0.72e8, 62.0),
    (0.74e8, 65.0),
    (2.24e8, 600.0),
    (0.50e8, 30.0),
    (0.60e8, 40.0),
]


def test_constants_precision():
    assert CONSTANTS.hbar == pytest.approx(1.054571817e-34, rel=1e-9)
    assert CONSTANTS.kB == pytest.approx(1.380649e-23, rel=1e-9)
    assert CONSTANTS.c == pytest.approx(2.99792458e10, rel=1e-9)
    assert CONSTANTS.debye == 1.0e-18
    assert all(x > 0 for x in (CONSTANTS.hbar, CONSTANTS.kB, CONSTANTS.c, CONSTANTS.debye))


@given(
    st.floats(min_value=1e-12, max_value=1e12, allow_nan=False),
    st.sampled_from(list(Dimension)),
)
def test_round_trip_identity(magnitude, kind):
    v = UnitValue(magnitude, kind)
    back = UnitValue.from_internal(v.to_internal(), kind)
    assert back.magnitude == pytest.approx(magnitude, rel=1e-12)


def test_energy_from_temperature_zero_and_definition():
    assert energy_from_temperature(0.0) == 0.0
    # 1000 uK is kB * 1e-3 J worth of angular frequency
    expected = CONSTANTS.kB * 1e-3 / CONSTANTS.hbar
    assert energy_from_temperature(1000.0) == pytest.approx(expected, rel=1e-12)


def test_energy_from_temperature_linearity():
    assert energy_from_temperature(1000.0) / energy_from_temperature(10.0) == pytest.approx(100.0)


def test_energy_from_temperature_rejects_negative():
    with pytest.raises(ValueError):
        energy_from_temperature(-1.0)


def test_temperature_round_trip():
    e = energy_from_temperature(12.25)
    assert temperature_from_energy(e) == pytest.approx(12.25, rel=1e-12)


@pytest.mark.parametrize("omega, expected", STOKES_ROWS)
def test_stokes_intensity_table_rows(omega, expected):
    assert stokes_intensity(omega, 0.1) == pytest.approx(expected, rel=0.20)


def test_stokes_intensity_quadratic_scaling():
    assert stokes_intensity(2 * 0.72e8, 0.1) == pytest.approx(4 * stokes_intensity(0.72e8, 0.1))


def test_stokes_intensity_monotonicity():
    assert stokes_intensity(1e8, 0.1) > stokes_intensity(0.9e8, 0.1)
    assert stokes_intensity(1e8, 0.2) < stokes_intensity(1e8, 0.1)


def test_stokes_intensity_rejects_bad_arguments():
    with pytest.raises(ValueError):
        stokes_intensity(1e8, 0.0)
    with pytest.raises(ValueError):
        stokes_intensity(0.0, 0.1)


def test_pump_intensity_broad_table_row():
    de = energy_from_temperature(10.0)
    ga = energy_from_temperature(1000.0)
    # the broad-row amplitude implied by the tabulated 4000 W/cm^2
    amp = pump_amplitude_broad_from_intensity(4000.0, 10.0, de, ga, 0.1)
    assert pump_intensity_broad(amp, 10.0, de, ga, 0.1) == pytest.approx(4000.0, rel=0.20)
    # quadratic in q
    assert pump_intensity_broad(amp, 20.0, de, ga, 0.1) == pytest.approx(
        4.0 * pump_intensity_broad(amp, 10.0, de, ga, 0.1)
    )


def test_pump_intensity_none_row_is_hundredfold():
    # the no-resonance row needs 10x the amplitude, i.e. 100x the intensity
    de = energy_from_temperature(10.0)
    ga = energy_from_temperature(1000.0)
    amp_broad = pump_amplitude_broad_from_intensity(4000.0, 10.0, de, ga, 0.1)
    i_none = pump_intensity_broad(10.0 * amp_broad, 10.0, de, ga, 0.1)
    assert 2.0e5 <= i_none <= 8.0e5  # within a factor 2 of 4e5


def test_pump_intensity_broad_rejects_zero_dipole():
    de = energy_from_temperature(10.0)
    with pytest.raises(ValueError):
        pump_intensity_broad(1.0, 10.0, de, de, 0.0)


def test_pump_intensity_formula_routes_agree():
    """Closed-form intensity equals the field route c E^2/(8 pi) with
    E reconstructed from the coupling and mu2eps."""
    de = energy_from_temperature(10.0)
    ga = energy_from_temperature(1000.0)
    amp = 8.9
    coup = continuum_coupling_from_amplitude(amp, "broad", de)
    mu2eps = mu2eps_from_mu2b(0.1, 10.0, ga)
    field = coup * math.sqrt(CONSTANTS.hbar_cgs) / mu2eps
    assert intensity_from_field(field) == pytest.approx(
        pump_intensity_broad(amp, 10.0, de, ga, 0.1), rel=1e-10
    )


def test_pump_intensity_narrow_consistent_with_coupling_route():
    ga = energy_from_temperature(1.0)
    de = energy_from_temperature(100.0)
    amp = 265.0
    coup = continuum_coupling_from_amplitude(amp, "narrow", de, ga)
    mu2eps = mu2eps_from_mu2b(0.1, 10.0, ga)
    field = coup * math.sqrt(CONSTANTS.hbar_cgs) / mu2eps
    assert intensity_from_field(field) == pytest.approx(
        pump_intensity_narrow(amp, 10.0, ga, 0.1), rel=1e-10
    )


def test_display_pump_units_inverse_of_amplitude_conversion():
    de = energy_from_temperature(10.0)
    ga = energy_from_temperature(1000.0)
    for convention in ("broad", "narrow"):
        coup = continuum_coupling_from_amplitude(3.7, convention, de, ga)
        assert display_pump_units(coup, convention, de, ga) == pytest.approx(3.7, rel=1e-12)


def test_display_pump_units_zero_field():
    de = energy_from_temperature(10.0)
    assert display_pump_units(0.0, "broad", de) == 0.0


def test_display_pump_units_scaling():
    # broad display scales as 1/sqrt(delta_eps); narrow as 1/sqrt(Gamma)
    de = energy_from_temperature(10.0)
    ga = energy_from_temperature(1000.0)
    coup = 1234.5
    assert display_pump_units(coup, "broad", 4 * de) == pytest.approx(
        0.5 * display_pump_units(coup, "broad", de)
    )
    assert display_pump_units(coup, "narrow", de, 4 * ga) == pytest.approx(
        0.5 * display_pump_units(coup, "narrow", de, ga)
    )


def test_intensity_field_round_trip():
    i = 4000.0
    assert intensity_from_field(field_from_intensity(i)) == pytest.approx(i, rel=1e-12)


def test_all_intensities_nonnegative():
    de = energy_from_temperature(10.0)
    ga = energy_from_temperature(1000.0)
    assert stokes_intensity(1e6, 0.1) >= 0
    assert pump_intensity_broad(0.1, 1.0, de, ga, 0.1) >= 0
