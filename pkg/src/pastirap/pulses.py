"""Gaussian Stokes and pump envelopes in the counter-intuitive ordering.

Each envelope is peak * exp(-((t - t0 +/- offset)/width)^2); the Stokes
pulse (sign +1) peaks at t0 - offset, i.e. before the pump (sign -1),
which peaks at t0 + offset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["GaussianPulse", "PulsePair", "evaluate", "peak_time", "overlap_time"]


@dataclass(frozen=True)
class GaussianPulse:
    """One laser envelope.

    peak          peak amplitude (1/s for the Stokes Rabi frequency, internal
                  continuum-coupling units 1/sqrt(s) for the pump)
    center_offset signed delay tau from the reference time t0, in s
    width         1/e half-width T of the envelope, in s
    sign          +1 for Stokes (peaks at t0 - tau), -1 for pump (t0 + tau)
    """

    peak: float
    center_offset: float
    width: float
    sign: int = 1

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError(f"pulse width must be > 0, got {self.width}")
        if self.peak < 0:
            raise ValueError(f"pulse peak must be >= 0, got {self.peak}")
        if self.sign not in (-1, 1):
            raise ValueError(f"pulse sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True)
class PulsePair:
    """Stokes + pump pulses sharing a reference time t0."""

    stokes: GaussianPulse
    pump: GaussianPulse
    t0: float = 0.0

    def __post_init__(self):
        if self.stokes.sign != 1 or self.pump.sign != -1:
            raise ValueError("pair must hold a Stokes (sign +1) and a pump (sign -1) pulse")
        if self.stokes.center_offset > 0 and self.pump.center_offset > 0:
            if peak_time(self.stokes, self.t0) >= peak_time(self.pump, self.t0):
                raise ValueError("counter-intuitive ordering requires the Stokes peak first")


def peak_time(pulse: GaussianPulse, t0: float) -> float:
    """Time at which the envelope reaches its peak."""
    return t0 - pulse.sign * pulse.center_offset


def evaluate(pulse: GaussianPulse, t0: float, t):
    """Envelope value at time(s) ``t`` for a pulse referenced to ``t0``."""
    x = (np.asarray(t) - peak_time(pulse, t0)) / pulse.width
    return pulse.peak * np.exp(-(x**2))


def overlap_time(pair: PulsePair, threshold_exponent: float = 2.0) -> float:
    """Duration over which both envelopes exceed exp(-threshold_exponent) of
    their peaks; 0 if the windows are disjoint or either pulse is off.

    The default threshold e^-2 gives overlap windows of half-width
    sqrt(2) * width around each peak.
    """
    if pair.stokes.peak == 0.0 or pair.pump.peak == 0.0:
        return 0.0
    half = math.sqrt(threshold_exponent)
    lo = max(
        peak_time(pair.stokes, pair.t0) - half * pair.stokes.width,
        peak_time(pair.pump, pair.t0) - half * pair.pump.width,
    )
    hi = min(
        peak_time(pair.stokes, pair.t0) + half * pair.stokes.width,
        peak_time(pair.pump, pair.t0) + half * pair.pump.width,
    )
    return max(0.0, hi - lo)
