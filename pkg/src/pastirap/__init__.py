"""Photoassociative STIRAP transfer of colliding ultracold atom pairs into a
deeply bound molecular state near a Feshbach resonance.

Modules cover the unit system, pulse envelopes, the Fano resonance model,
Bessel/Struve special functions, the collisional source term, the reduced
and full transfer dynamics, thermal-ensemble averaging, and derivative-free
pulse optimization, plus a config-driven CLI.
"""

from .dynamics import (
    AmplitudeState,
    IntegrationControls,
    ScenarioConfig,
    TimeSeries,
    full_model_oracle,
    integrate,
)
from .ensemble import EnsembleSpec, average_efficiency, fraction_per_pulse_pair, pulse_train_estimate
from .fano import FanoResonance
from .optimizer import OptimizationProblem, OptimizationResult, optimize, sweep
from .pulses import GaussianPulse, PulsePair
from .source import SourceParams, Wavepacket

__all__ = [
    "AmplitudeState",
    "EnsembleSpec",
    "FanoResonance",
    "GaussianPulse",
    "IntegrationControls",
    "OptimizationProblem",
    "OptimizationResult",
    "PulsePair",
    "ScenarioConfig",
    "SourceParams",
    "TimeSeries",
    "Wavepacket",
    "average_efficiency",
    "fraction_per_pulse_pair",
    "full_model_oracle",
    "integrate",
    "optimize",
    "pulse_train_estimate",
    "sweep",
]

__version__ = "0.1.0"
