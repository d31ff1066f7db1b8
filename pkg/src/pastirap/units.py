"""Physical constants and unit conversions.

Internally every energy-like quantity (collision energy, resonance width,
detunings) is stored as an angular frequency E/hbar in 1/s, which removes
hbar from the equations of motion.  Continuum states are energy normalized,
so continuum-bound couplings carry an extra 1/sqrt(energy); internally they
live in 1/sqrt(s), making pi*|coupling|^2 a plain loss rate in 1/s.

Electromagnetic quantities (dipoles, fields, intensities) are handled in
Gaussian cgs, with intensities reported in W/cm^2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

__all__ = [
    "PhysConstants",
    "CONSTANTS",
    "Dimension",
    "UnitValue",
    "energy_from_temperature",
    "temperature_from_energy",
    "stokes_intensity",
    "pump_intensity_broad",
    "pump_intensity_narrow",
    "pump_amplitude_broad_from_intensity",
    "pump_amplitude_narrow_from_intensity",
    "continuum_coupling_from_amplitude",
    "display_pump_units",
    "mu2eps_from_mu2b",
    "field_from_intensity",
    "intensity_from_field",
    "coupling_from_field",
]

ERG_PER_JOULE = 1.0e7
WATT_PER_CM2_TO_CGS = 1.0e7  # erg s^-1 cm^-2 per W cm^-2


@dataclass(frozen=True)
class PhysConstants:
    """CODATA constants in the mixed SI/cgs units used throughout."""

    hbar: float = 1.054571817e-34  # J s
    kB: float = 1.380649e-23  # J/K
    c: float = 2.99792458e10  # cm/s
    debye: float = 1.0e-18  # esu cm

    @property
    def hbar_cgs(self) -> float:
        """hbar in erg s."""
        return self.hbar * ERG_PER_JOULE

    @property
    def kB_cgs(self) -> float:
        """Boltzmann constant in erg/K."""
        return self.kB * ERG_PER_JOULE


CONSTANTS = PhysConstants()


class Dimension(enum.Enum):
    """Dimension tags for the handful of quantities this package moves around.

    External (human-facing) units per tag:

    ==================  =======================  =====================
    tag                 external unit            internal unit
    ==================  =======================  =====================
    ENERGY              J                        1/s   (E/hbar)
    ANGULAR_FREQUENCY   1/s                      1/s
    TEMPERATURE_ENERGY  micro-Kelvin             1/s   (kB T/hbar)
    FIELD               statvolt/cm              statvolt/cm
    INTENSITY           W/cm^2                   erg s^-1 cm^-2
    DIPOLE              Debye                    esu cm
    CONTINUUM_DIPOLE    Debye/sqrt(micro-K)      esu cm/sqrt(erg)
    ==================  =======================  =====================
    """

    ENERGY = "energy"
    ANGULAR_FREQUENCY = "angular-frequency"
    TEMPERATURE_ENERGY = "temperature-energy"
    FIELD = "field"
    INTENSITY = "intensity"
    DIPOLE = "dipole"
    CONTINUUM_DIPOLE = "continuum-dipole"


def _conversion_factor(kind: Dimension) -> float:
    """Multiplicative factor taking an external magnitude to internal units."""
    k = CONSTANTS
    if kind is Dimension.ENERGY:
        return 1.0 / k.hbar
    if kind is Dimension.ANGULAR_FREQUENCY:
        return 1.0
    if kind is Dimension.TEMPERATURE_ENERGY:
        return k.kB * 1.0e-6 / k.hbar
    if kind is Dimension.FIELD:
        return 1.0
    if kind is Dimension.INTENSITY:
        return WATT_PER_CM2_TO_CGS
    if kind is Dimension.DIPOLE:
        return k.debye
    if kind is Dimension.CONTINUUM_DIPOLE:
        # Debye per sqrt(micro-Kelvin) -> esu cm per sqrt(erg)
        return k.debye / math.sqrt(k.kB_cgs * 1.0e-6)
    raise ValueError(f"unknown dimension tag {kind!r}")


@dataclass(frozen=True)
class UnitValue:
    """A magnitude with a dimension tag, convertible to internal units."""

    magnitude: float
    kind: Dimension

    def to_internal(self) -> float:
        return self.magnitude * _conversion_factor(self.kind)

    @classmethod
    def from_internal(cls, value: float, kind: Dimension) -> "UnitValue":
        return cls(value / _conversion_factor(kind), kind)


def energy_from_temperature(t_micro_kelvin: float) -> float:
    """Collision energy kB*T for a temperature in micro-Kelvin, in 1/s.

    The resonance widths and energy bandwidths quoted in micro-Kelvin all
    pass through here.
    """
    if t_micro_kelvin < 0:
        raise ValueError(f"temperature must be >= 0, got {t_micro_kelvin}")
    return t_micro_kelvin * CONSTANTS.kB * 1.0e-6 / CONSTANTS.hbar


def temperature_from_energy(energy: float) -> float:
    """Inverse of :func:`energy_from_temperature`; returns micro-Kelvin."""
    return energy * CONSTANTS.hbar / (CONSTANTS.kB * 1.0e-6)


def stokes_intensity(omega_s0: float, mu21_debye: float) -> float:
    """Peak Stokes intensity in W/cm^2 from the peak Rabi frequency.

    I_S = c (Omega_S0 hbar)^2 / (8 pi mu21^2) in Gaussian cgs, with the
    bound-bound dipole mu21 given in Debye.
    """
    if omega_s0 <= 0:
        raise ValueError(f"omega_s0 must be > 0, got {omega_s0}")
    if mu21_debye <= 0:
        raise ValueError(f"mu21 must be > 0, got {mu21_debye}")
    mu = mu21_debye * CONSTANTS.debye
    i_cgs = CONSTANTS.c * (omega_s0 * CONSTANTS.hbar_cgs) ** 2 / (8.0 * math.pi * mu**2)
    return i_cgs / WATT_PER_CM2_TO_CGS


def pump_intensity_broad(
    omega_p0: float,
    q: float,
    delta_eps: float,
    gamma: float,
    mu2b_debye: float,
) -> float:
    """Peak pump intensity in W/cm^2 for the broad-resonance amplitude convention.

    ``omega_p0`` is the dimensionless pump amplitude (16 pi)^{1/4} mu2eps E_p
    / sqrt(delta_eps).  Using mu2eps = sqrt(2) mu2b / (q sqrt(pi Gamma)) the
    intensity is I_p = q^2 c omega_p0^2 delta_eps Gamma / (64 sqrt(pi) mu2b^2).

    Parameters
    ----------
    omega_p0 : dimensionless pump amplitude
    q : Fano parameter
    delta_eps : wavepacket energy bandwidth, internal units (1/s)
    gamma : resonance width, internal units (1/s)
    mu2b_debye : bound-bound dipole to the closed-channel state, in Debye
    """
    if min(omega_p0, q, delta_eps, gamma) <= 0:
        raise ValueError("omega_p0, q, delta_eps and gamma must all be > 0")
    if mu2b_debye <= 0:
        raise ValueError(f"mu2b must be > 0, got {mu2b_debye}")
    mu = mu2b_debye * CONSTANTS.debye
    delta_erg = delta_eps * CONSTANTS.hbar_cgs
    gamma_erg = gamma * CONSTANTS.hbar_cgs
    i_cgs = (
        q**2 * CONSTANTS.c * omega_p0**2 * delta_erg * gamma_erg
        / (64.0 * math.sqrt(math.pi) * mu**2)
    )
    return i_cgs / WATT_PER_CM2_TO_CGS


def pump_intensity_narrow(
    omega_p0: float,
    q: float,
    gamma: float,
    mu2b_debye: float,
) -> float:
    """Peak pump intensity in W/cm^2 for the narrow-resonance amplitude convention.

    Here ``omega_p0`` is sqrt(2 pi / Gamma) mu2eps E_p, which gives
    I_p = q^2 c omega_p0^2 Gamma^2 / (32 pi mu2b^2).
    """
    if min(omega_p0, q, gamma) <= 0:
        raise ValueError("omega_p0, q and gamma must all be > 0")
    if mu2b_debye <= 0:
        raise ValueError(f"mu2b must be > 0, got {mu2b_debye}")
    mu = mu2b_debye * CONSTANTS.debye
    gamma_erg = gamma * CONSTANTS.hbar_cgs
    i_cgs = q**2 * CONSTANTS.c * omega_p0**2 * gamma_erg**2 / (32.0 * math.pi * mu**2)
    return i_cgs / WATT_PER_CM2_TO_CGS


def pump_amplitude_broad_from_intensity(
    intensity_w_cm2: float,
    q: float,
    delta_eps: float,
    gamma: float,
    mu2b_debye: float,
) -> float:
    """Invert :func:`pump_intensity_broad` for the dimensionless amplitude."""
    ref = pump_intensity_broad(1.0, q, delta_eps, gamma, mu2b_debye)
    return math.sqrt(intensity_w_cm2 / ref)


def pump_amplitude_narrow_from_intensity(
    intensity_w_cm2: float,
    q: float,
    gamma: float,
    mu2b_debye: float,
) -> float:
    """Invert :func:`pump_intensity_narrow` for the dimensionless amplitude."""
    ref = pump_intensity_narrow(1.0, q, gamma, mu2b_debye)
    return math.sqrt(intensity_w_cm2 / ref)


def continuum_coupling_from_amplitude(
    omega_p0: float,
    convention: str,
    delta_eps: float,
    gamma: float | None = None,
) -> float:
    """Internal continuum coupling mu2eps.E_p/hbar (in 1/sqrt(s)) from the
    dimensionless pump amplitude.

    ``convention`` selects which normalization the amplitude uses: "broad"
    (also used without a resonance) normalizes with the wavepacket bandwidth,
    "narrow" with the resonance width.
    """
    if convention == "broad":
        return omega_p0 * math.sqrt(delta_eps) / (2.0 * math.pi**0.25)
    if convention == "narrow":
        if gamma is None:
            raise ValueError("narrow convention requires the resonance width")
        return omega_p0 * math.sqrt(gamma / (2.0 * math.pi))
    raise ValueError(f"unknown pump amplitude convention {convention!r}")


def display_pump_units(
    coupling: float,
    regime: str,
    delta_eps: float,
    gamma: float | None = None,
) -> float:
    """Dimensionless pump amplitude used for plotting, from the internal coupling.

    Exact inverse of :func:`continuum_coupling_from_amplitude`:
    (16 pi)^{1/4} coupling / sqrt(delta_eps) in the broad regime and
    sqrt(2 pi / Gamma) coupling in the narrow regime.
    """
    if regime == "broad":
        return (16.0 * math.pi) ** 0.25 * coupling / math.sqrt(delta_eps)
    if regime == "narrow":
        if gamma is None:
            raise ValueError("narrow regime requires the resonance width")
        return math.sqrt(2.0 * math.pi / gamma) * coupling
    raise ValueError(f"regime must be 'broad' or 'narrow', got {regime!r}")


def mu2eps_from_mu2b(mu2b_debye: float, q: float, gamma: float) -> float:
    """Continuum-bound dipole estimate sqrt(2) mu2b / (q sqrt(pi Gamma)).

    Returns esu cm / sqrt(erg); ``gamma`` in internal units (1/s).
    """
    if q == 0:
        raise ValueError("q must be nonzero to relate mu2eps and mu2b")
    gamma_erg = gamma * CONSTANTS.hbar_cgs
    return math.sqrt(2.0) * mu2b_debye * CONSTANTS.debye / (abs(q) * math.sqrt(math.pi * gamma_erg))


def field_from_intensity(intensity_w_cm2: float) -> float:
    """Field amplitude in statvolt/cm for a beam intensity, I = c E^2 / 8 pi."""
    if intensity_w_cm2 < 0:
        raise ValueError(f"intensity must be >= 0, got {intensity_w_cm2}")
    return math.sqrt(8.0 * math.pi * intensity_w_cm2 * WATT_PER_CM2_TO_CGS / CONSTANTS.c)


def intensity_from_field(field: float) -> float:
    """Inverse of :func:`field_from_intensity`; returns W/cm^2."""
    return CONSTANTS.c * field**2 / (8.0 * math.pi) / WATT_PER_CM2_TO_CGS


def coupling_from_field(field: float, mu2eps_cgs: float) -> float:
    """Internal continuum coupling (1/sqrt(s)) from a cgs field amplitude.

    The continuum coupling is mu2eps E / hbar; one factor sqrt(hbar) is
    absorbed so pi*coupling^2 is a rate in 1/s.
    """
    return mu2eps_cgs * field / math.sqrt(CONSTANTS.hbar_cgs)
