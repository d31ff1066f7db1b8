"""Feshbach/Fano resonance model.

A closed-channel bound state embedded in the open-channel continuum dresses
each scattering state: the phase shift Delta(eps), the bound-state admixture
a(eps), and the asymmetric lineshape factor g(q, eps) that multiplies the
bare continuum-bound coupling.  The convention sgn(0) = +1 is used at the
(measure-zero) point eps = eps_f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .units import mu2eps_from_mu2b

__all__ = [
    "FanoResonance",
    "phase_shift",
    "bound_admixture",
    "lineshape",
    "continuum_rabi",
    "enhancement_max",
    "sign_from_resonance",
]

_CONSISTENCY_RTOL = 1e-10


@dataclass(frozen=True)
class FanoResonance:
    """Resonance descriptor.

    q       Fano parameter (bound-bound over continuum-bound strength)
    gamma   resonance width, internal units (1/s)
    eps_f   resonance position on the collision-energy axis, internal (1/s)
    mu2eps  bare continuum-bound dipole, esu cm / sqrt(erg) (optional)
    mu2b    bound-bound dipole to the closed-channel state, esu cm (optional)
    """

    q: float
    gamma: float
    eps_f: float
    mu2eps: float | None = None
    mu2b: float | None = None

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError(f"resonance width must be > 0, got {self.gamma}")
        if self.mu2eps is not None and self.mu2b is not None:
            expected = mu2eps_from_mu2b(self.mu2b / 1.0e-18, self.q, self.gamma)
            if not math.isclose(self.mu2eps, expected, rel_tol=_CONSISTENCY_RTOL):
                raise ValueError(
                    "mu2eps and mu2b are inconsistent: expected "
                    f"mu2eps ~ sqrt(2) mu2b/(q sqrt(pi Gamma)) = {expected:.6e}, "
                    f"got {self.mu2eps:.6e}"
                )


def _signed_detuning(res: FanoResonance, eps):
    return np.asarray(eps, dtype=float) - res.eps_f


def sign_from_resonance(res: FanoResonance, eps):
    """sgn(eps - eps_f) with sgn(0) = +1."""
    d = _signed_detuning(res, eps)
    return np.where(d >= 0.0, 1.0, -1.0)


def phase_shift(res: FanoResonance, eps):
    """Phase shift Delta = -arctan(Gamma / (2 (eps - eps_f))), in [-pi/2, pi/2].

    At eps = eps_f the sgn(0) = +1 convention gives -pi/2.
    """
    d = _signed_detuning(res, eps)
    with np.errstate(divide="ignore"):
        ratio = np.where(d != 0.0, res.gamma / (2.0 * np.where(d != 0.0, d, 1.0)), np.inf)
    return -np.arctan(ratio)


def bound_admixture(res: FanoResonance, eps):
    """Closed-channel admixture a(eps) = sqrt(2/(pi Gamma)) sin Delta(eps).

    Energy-normalized: |a|^2 integrates to 1 over eps (a unit-area
    Lorentzian of width Gamma).
    """
    return math.sqrt(2.0 / (math.pi * res.gamma)) * np.sin(phase_shift(res, eps))


def lineshape(res: FanoResonance, eps):
    """Fano factor g(q, eps) = (q + 2(eps-eps_f)/Gamma) / sqrt(1 + 4(eps-eps_f)^2/Gamma^2)."""
    y = 2.0 * _signed_detuning(res, eps) / res.gamma
    return (res.q + y) / np.sqrt(1.0 + y**2)


def continuum_rabi(res: FanoResonance, field: float, eps):
    """Resonance-dressed continuum coupling, internal 1/sqrt(s).

    (mu2eps E_p / hbar) g(q, eps) sgn(eps - eps_f); requires the resonance
    to carry mu2eps.  ``field`` in statvolt/cm.
    """
    if res.mu2eps is None:
        raise ValueError("continuum_rabi requires a resonance with mu2eps set")
    from .units import coupling_from_field

    bare = coupling_from_field(field, res.mu2eps)
    return bare * lineshape(res, eps) * sign_from_resonance(res, eps)


def enhancement_max(res: FanoResonance) -> tuple[float, float]:
    """Location (offset from eps_f) and value of the |g| maximum.

    The maximum sits at eps - eps_f = Gamma/(2 q) with value sqrt(1 + q^2);
    for q >> 1 the value approaches q.  Undefined for q = 0 (no interior
    maximum of this form).
    """
    if res.q == 0:
        raise ValueError("q = 0 has no finite interior lineshape maximum")
    return res.gamma / (2.0 * res.q), math.sqrt(1.0 + res.q**2)
