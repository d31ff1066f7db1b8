"""Derivative-free maximization of transfer efficiency over pulse and
detuning parameters.

A seeded Sobol set provides deterministic restart points inside the bounds;
each restart runs a bounded Nelder-Mead simplex.  Objective evaluations
that fail (integration errors, invalid intermediate configs) count as zero
so the search can cross pathological corners.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .dynamics import ScenarioConfig, integrate
from .pulses import GaussianPulse, PulsePair
from .source import Wavepacket

__all__ = [
    "FREE_PARAMETERS",
    "OptimizationProblem",
    "OptimizationResult",
    "apply_parameters",
    "optimize",
    "sweep",
]

logger = logging.getLogger(__name__)

# omega_p0 operates on the pump peak in internal coupling units (1/sqrt(s));
# the CLI converts dimensionless-amplitude bounds before building a problem.
FREE_PARAMETERS = (
    "omega_s0",
    "omega_p0",
    "t_s",
    "t_p",
    "tau_s",
    "tau_p",
    "delta",
    "two_photon_offset",
    "t0",
)


@dataclass(frozen=True)
class OptimizationProblem:
    """Bounded search for the best transfer.

    base        scenario evaluated after parameter substitution
    free_params subset of FREE_PARAMETERS
    bounds      (lower, upper) per free parameter, finite, lower < upper
    objective   'final_population' or 'ensemble_averaged_population'
    budget      max objective evaluations
    seed        RNG seed for the restart point set
    ensemble    EnsembleSpec, required for the averaged objective
    n_nodes     quadrature nodes for the averaged objective
    """

    base: ScenarioConfig
    free_params: tuple[str, ...]
    bounds: dict[str, tuple[float, float]]
    objective: str = "final_population"
    budget: int = 2000
    seed: int = 0
    ensemble: object | None = None
    n_nodes: int = 16
    n_restarts: int = 4

    def __post_init__(self):
        if not self.free_params:
            raise ValueError("free_params must not be empty")
        for name in self.free_params:
            if name not in FREE_PARAMETERS:
                raise ValueError(f"unknown free parameter {name!r}")
            if name not in self.bounds:
                raise ValueError(f"missing bounds for {name!r}")
            lo, hi = self.bounds[name]
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValueError(f"bounds for {name!r} must be finite with lower < upper")
        if self.objective not in ("final_population", "ensemble_averaged_population"):
            raise ValueError(f"unknown objective {self.objective!r}")
        if self.objective == "ensemble_averaged_population" and self.ensemble is None:
            raise ValueError("ensemble_averaged_population requires an ensemble spec")
        if self.budget < 50 * len(self.free_params):
            raise ValueError("budget must be at least 50 per free parameter")


@dataclass
class OptimizationResult:
    best_params: dict[str, float]
    best_value: float
    evaluations: int
    trace: list[tuple[int, float]] = field(default_factory=list)

    @property
    def best_so_far(self) -> list[float]:
        out, best = [], -math.inf
        for _, v in self.trace:
            best = max(best, v)
            out.append(best)
        return out


def apply_parameters(cfg: ScenarioConfig, params: dict[str, float]) -> ScenarioConfig:
    """Substitute free-parameter values into a scenario."""
    stokes = cfg.pulses.stokes
    pump = cfg.pulses.pump
    stokes = replace(
        stokes,
        peak=params.get("omega_s0", stokes.peak),
        width=params.get("t_s", stokes.width),
        center_offset=params.get("tau_s", stokes.center_offset),
    )
    pump = replace(
        pump,
        peak=params.get("omega_p0", pump.peak),
        width=params.get("t_p", pump.width),
        center_offset=params.get("tau_p", pump.center_offset),
    )
    pulses = PulsePair(stokes=stokes, pump=pump, t0=cfg.pulses.t0)
    wavepacket: Wavepacket = cfg.wavepacket
    if "t0" in params:
        wavepacket = replace(wavepacket, t0=params["t0"])
    return replace(
        cfg,
        pulses=pulses,
        wavepacket=wavepacket,
        delta=params.get("delta", cfg.delta),
        two_photon_offset=params.get("two_photon_offset", cfg.two_photon_offset),
    )


def _current_value(cfg: ScenarioConfig, name: str) -> float:
    """Value a free parameter currently has in a scenario."""
    return {
        "omega_s0": cfg.pulses.stokes.peak,
        "omega_p0": cfg.pulses.pump.peak,
        "t_s": cfg.pulses.stokes.width,
        "t_p": cfg.pulses.pump.width,
        "tau_s": cfg.pulses.stokes.center_offset,
        "tau_p": cfg.pulses.pump.center_offset,
        "delta": cfg.delta,
        "two_photon_offset": cfg.two_photon_offset,
        "t0": cfg.wavepacket.t0,
    }[name]


def _objective_fn(problem: OptimizationProblem):
    def lean(cfg: ScenarioConfig) -> ScenarioConfig:
        # objective evaluations only need the final state, not dense samples
        return replace(cfg, integration=replace(cfg.controls(), n_samples=0))

    if problem.objective == "final_population":

        def value(cfg: ScenarioConfig) -> float:
            return integrate(lean(cfg)).final_population

    else:
        from .ensemble import average_efficiency

        def value(cfg: ScenarioConfig) -> float:
            return average_efficiency(problem.ensemble, lean(cfg), problem.n_nodes).p_avg

    return value


def optimize(problem: OptimizationProblem) -> OptimizationResult:
    """Run the bounded restart/simplex search; deterministic per (problem, seed)."""
    names = list(problem.free_params)
    lo = np.array([problem.bounds[n][0] for n in names])
    hi = np.array([problem.bounds[n][1] for n in names])
    value = _objective_fn(problem)

    trace: list[tuple[int, float]] = []
    best_x = None
    best_v = -math.inf
    evaluations = 0

    def evaluate(x: np.ndarray) -> float:
        nonlocal best_x, best_v, evaluations
        if evaluations >= problem.budget:
            return 0.0  # budget exhausted; simplex will terminate via maxfev
        x = np.clip(x, lo, hi)
        try:
            v = value(apply_parameters(problem.base, dict(zip(names, x))))
        except Exception as exc:  # objective failures count as zero
            logger.warning("objective failed at %s: %s", dict(zip(names, x)), exc)
            v = 0.0
        evaluations += 1
        trace.append((evaluations, v))
        if v > best_v:  # strict: ties keep the earliest evaluation
            best_v, best_x = v, x.copy()
        return v

    sampler = qmc.Sobol(d=len(names), scramble=True, seed=problem.seed)
    n_starts = max(2, problem.n_restarts)
    starts = qmc.scale(sampler.random(n_starts), lo, hi)
    # the base scenario's own parameter values are usually a strong seed
    base_point = np.array([_current_value(problem.base, n) for n in names])
    if np.all((base_point >= lo) & (base_point <= hi)):
        starts = np.vstack([base_point, starts])
        n_starts += 1
    # rank the restart points before spending simplex budget on them
    ranked = sorted(range(n_starts), key=lambda i: -evaluate(starts[i]))
    per_restart = max(20, (problem.budget - evaluations) // max(1, problem.n_restarts))
    for idx in ranked[: problem.n_restarts]:
        if evaluations >= problem.budget:
            break
        budget_left = problem.budget - evaluations
        minimize(
            lambda x: -evaluate(x),
            x0=np.clip(starts[idx], lo, hi),
            method="Nelder-Mead",
            bounds=list(zip(lo, hi)),
            options=dict(
                maxfev=min(per_restart, budget_left),
                xatol=1e-4,
                fatol=1e-7,
                adaptive=len(names) > 3,
            ),
        )
    if best_x is None:
        raise RuntimeError("no successful objective evaluation")
    return OptimizationResult(
        best_params=dict(zip(names, best_x)),
        best_value=best_v,
        evaluations=evaluations,
        trace=trace,
    )


def sweep(base: ScenarioConfig, param: str, grid) -> list[tuple[float, float]]:
    """Final population across an ordered grid of one parameter.

    Per-point failures are reported inline as NaN; the sweep continues.
    """
    if param not in FREE_PARAMETERS:
        raise ValueError(f"unknown sweep parameter {param!r}")
    grid = list(grid)
    if not grid:
        raise ValueError("sweep grid must not be empty")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("sweep grid must be sorted ascending")
    out = []
    for v in grid:
        try:
            out.append((float(v), integrate(apply_parameters(base, {param: float(v)})).final_population))
        except Exception as exc:
            logger.warning("sweep point %s = %s failed: %s", param, v, exc)
            out.append((float(v), float("nan")))
    return out
