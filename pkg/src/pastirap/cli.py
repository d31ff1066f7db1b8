"""Command-line front end.

Scenario configs are JSON documents with explicit units in the key names
(_uK, _us, _per_s, _w_cm2); see docs/config_schema.md.  Commands write a
timeseries.csv (fixed 9-column schema) and a summary.json into the output
directory; existing files are only overwritten with --force.
"""

from __future__ import annotations

import argparse
import datetime
import importlib.metadata
import importlib.resources
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import dynamics, ensemble, optimizer, units
from .dynamics import IntegrationControls, ScenarioConfig, TimeSeries
from .fano import FanoResonance
from .pulses import GaussianPulse, PulsePair, overlap_time
from .source import Wavepacket

__all__ = [
    "ConfigError",
    "ParsedConfig",
    "parse_config",
    "serialize_config",
    "preset_names",
    "load_preset_text",
    "run",
    "main",
]

US = 1e-6
SCHEMA_VERSION = 1
COMMANDS = ("simulate", "oracle", "average", "optimize", "sweep", "estimate")
AMU = 1.66053906660e-27  # kg


class ConfigError(ValueError):
    """Invalid configuration; message lists every offending field path."""


class _Section:
    """One level of the config document, tracking consumed keys."""

    def __init__(self, data: dict, path: str, errors: list[str]):
        if not isinstance(data, dict):
            errors.append(f"{path or '<root>'}: expected an object")
            data = {}
        self.data = data
        self.path = path
        self.errors = errors
        self.seen: set[str] = set()

    def _at(self, key: str) -> str:
        return f"{self.path}.{key}" if self.path else key

    def take(self, key: str, required: bool = False, default=None, kind=None):
        self.seen.add(key)
        if key not in self.data:
            if required:
                self.errors.append(f"missing required field {self._at(key)}")
            return default
        v = self.data[key]
        if v is None:
            return default
        if kind == "number":
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                self.errors.append(f"{self._at(key)}: expected a number, got {v!r}")
                return default
            return float(v)
        if kind == "int":
            if isinstance(v, bool) or not isinstance(v, int):
                self.errors.append(f"{self._at(key)}: expected an integer, got {v!r}")
                return default
            return v
        if kind == "str":
            if not isinstance(v, str):
                self.errors.append(f"{self._at(key)}: expected a string, got {v!r}")
                return default
            return v
        if kind == "list":
            if not isinstance(v, list):
                self.errors.append(f"{self._at(key)}: expected a list, got {v!r}")
                return default
            return v
        return v

    def section(self, key: str, required: bool = False) -> "_Section | None":
        self.seen.add(key)
        if key not in self.data or self.data[key] is None:
            if required:
                self.errors.append(f"missing required section {self._at(key)}")
            return None
        return _Section(self.data[key], self._at(key), self.errors)

    def finish(self):
        for key in self.data:
            if key not in self.seen:
                self.errors.append(f"unknown key {self._at(key)}")


@dataclass
class ParsedConfig:
    scenario: ScenarioConfig
    normalized: dict
    ensemble: ensemble.EnsembleSpec | None = None
    optimize: dict | None = None
    sweep: dict | None = None
    estimate: dict | None = None
    intensity_ref: tuple[float, float, float] | None = None  # q, gamma (1/s), mu2b (D)
    omega_s0: float = 0.0
    pump_amplitude: float = 0.0  # dimensionless, regime convention
    mu21_debye: float | None = None



def _take_quantity(sec: _Section, errors: list[str], alternatives: list[tuple[str, float]],
                   required: bool = False, default=None):
    """Value given under exactly one of several unit-suffixed keys.

    ``alternatives`` maps key name -> factor to internal units (callables
    allowed for non-multiplicative conversions).
    """
    found = []
    for key, factor in alternatives:
        v = sec.take(key, kind="number")
        if v is not None:
            found.append((key, v, factor))
    if not found:
        if required:
            names = ", ".join(k for k, _ in alternatives)
            errors.append(f"{sec.path}: one of {names} is required")
        return default
    if len(found) > 1:
        names = ", ".join(k for k, _, _ in found)
        errors.append(f"{sec.path}: give only one of {names}")
    key, v, factor = found[0]
    return factor(v) if callable(factor) else v * factor


def _signed_temp(v: float) -> float:
    return math.copysign(units.energy_from_temperature(abs(v)), v)

def _gamma_internal(sec: _Section, errors: list[str], required: bool = False) -> float | None:
    """Resonance width from gamma_uK, gamma_mG (7.8 mG per micro-Kelvin) or gamma_per_s."""
    return _take_quantity(
        sec,
        errors,
        [
            ("gamma_uK", units.energy_from_temperature),
            ("gamma_mG", lambda v: units.energy_from_temperature(v / 7.8)),
            ("gamma_per_s", 1.0),
        ],
        required=required,
    )


def parse_config(doc: dict | str) -> ParsedConfig:
    """Validate and convert a config document to internal objects.

    Unknown keys, missing required fields, unit mismatches and invariant
    violations are all collected and raised together as a ConfigError.
    """
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc

    errors: list[str] = []
    root = _Section(doc, "", errors)

    regime = root.take("regime", required=True, kind="str")
    if regime is not None and regime not in dynamics.REGIMES:
        errors.append(f"regime: must be one of {dynamics.REGIMES}, got {regime!r}")
    gamma_decay = root.take("gamma_per_s", required=True, kind="number")
    if gamma_decay is not None and gamma_decay < 0:
        errors.append("gamma_per_s: must be >= 0")
    source_model = root.take("source_model", default="auto", kind="str")

    det = root.section("detunings")
    delta = off = 0.0
    if det is not None:
        delta = det.take("delta_per_s", default=0.0, kind="number")
        off = det.take("two_photon_offset_per_s", default=0.0, kind="number")
        det.finish()

    # wavepacket
    wp_sec = root.section("wavepacket", required=True)
    delta_eps = eps0 = None
    t0_s = None
    if wp_sec is not None:
        delta_eps = _take_quantity(
            wp_sec, errors,
            [("delta_eps_uK", units.energy_from_temperature), ("delta_eps_per_s", 1.0)],
            required=True,
        )
        eps0 = _take_quantity(wp_sec, errors, [("eps0_uK", _signed_temp), ("eps0_per_s", 1.0)])
        t0_s = _take_quantity(wp_sec, errors, [("t0_us", US), ("t0_s", 1.0)])
        wp_sec.finish()
    if delta_eps is not None and delta_eps <= 0:
        errors.append("wavepacket.delta_eps_uK: must be > 0")
    if delta_eps is None or delta_eps <= 0:
        delta_eps = 1.0
    if eps0 is None:
        # mean collision energy of the thermal distribution that has this bandwidth
        eps0 = math.sqrt(1.5) * delta_eps

    # resonance
    res_sec = root.section("resonance", required=regime in ("broad", "narrow"))
    resonance = None
    res_q = res_gamma = res_mu2b = None
    if res_sec is not None:
        res_q = res_sec.take("q", required=True, kind="number")
        res_gamma = _gamma_internal(res_sec, errors, required=True)
        eps_f_rel = _take_quantity(
            res_sec, errors,
            [("eps_f_minus_eps0_uK", _signed_temp), ("eps_f_minus_eps0_per_s", 1.0)],
            required=True,
        )
        res_mu2b = res_sec.take("mu2b_debye", kind="number")
        res_sec.finish()
        if res_gamma is not None and res_gamma <= 0:
            errors.append(f"{res_sec.path}: resonance width must be > 0")
            res_gamma = None
        if None not in (res_q, res_gamma, eps_f_rel):
            resonance = FanoResonance(q=res_q, gamma=res_gamma, eps_f=eps0 + eps_f_rel)
    if regime == "none" and resonance is not None:
        errors.append("resonance: not allowed in regime 'none' (use intensity_reference)")
        resonance = None

    # reference resonance for intensity conversions without a dynamical one
    ref_sec = root.section("intensity_reference")
    intensity_ref = None
    if ref_sec is not None:
        rq = ref_sec.take("q", required=True, kind="number")
        rg = _gamma_internal(ref_sec, errors, required=True)
        rmu = ref_sec.take("mu2b_debye", required=True, kind="number")
        ref_sec.finish()
        if rq and rg and rmu:
            intensity_ref = (rq, rg, rmu)
    elif resonance is not None and res_mu2b is not None:
        intensity_ref = (res_q, res_gamma, res_mu2b)

    # pulses
    pulses_sec = root.section("pulses", required=True)
    pulse_pair = None
    omega_s0 = 0.0
    pump_amplitude = 0.0
    mu21 = None
    if pulses_sec is not None:
        mu21 = pulses_sec.take("mu21_debye", kind="number")
        t_ref = _take_quantity(
            pulses_sec, errors, [("reference_time_us", US), ("reference_time_s", 1.0)], default=0.0
        )
        s_sec = pulses_sec.section("stokes", required=True)
        stokes = None
        if s_sec is not None:
            omega_s0 = s_sec.take("peak_per_s", required=True, kind="number")
            s_w = _take_quantity(s_sec, errors, [("width_us", US), ("width_s", 1.0)], required=True)
            s_off = _take_quantity(s_sec, errors, [("offset_us", US), ("offset_s", 1.0)], required=True)
            s_sec.finish()
            if None not in (omega_s0, s_w, s_off):
                try:
                    stokes = GaussianPulse(peak=omega_s0, center_offset=s_off, width=s_w, sign=+1)
                except ValueError as exc:
                    errors.append(f"pulses.stokes: {exc}")
        p_sec = pulses_sec.section("pump", required=True)
        pump = None
        if p_sec is not None:
            amp = p_sec.take("amplitude", kind="number")
            inten = p_sec.take("intensity_w_cm2", kind="number")
            coup_direct = p_sec.take("coupling_per_sqrt_s", kind="number")
            p_w = _take_quantity(p_sec, errors, [("width_us", US), ("width_s", 1.0)], required=True)
            p_off = _take_quantity(p_sec, errors, [("offset_us", US), ("offset_s", 1.0)], required=True)
            p_sec.finish()
            given = [x for x in (amp, inten, coup_direct) if x is not None]
            if len(given) != 1:
                errors.append(
                    "pulses.pump: exactly one of amplitude, intensity_w_cm2, coupling_per_sqrt_s is required"
                )
            convention = "narrow" if regime == "narrow" else "broad"
            coup = 0.0
            if inten is not None:
                ref = intensity_ref
                if ref is None:
                    errors.append(
                        "pulses.pump.intensity_w_cm2: needs resonance mu2b_debye or an intensity_reference"
                    )
                else:
                    rq, rg, rmu = ref
                    if convention == "narrow":
                        pump_amplitude = units.pump_amplitude_narrow_from_intensity(inten, rq, rg, rmu)
                    else:
                        pump_amplitude = units.pump_amplitude_broad_from_intensity(
                            inten, rq, delta_eps, rg, rmu
                        )
                    coup = units.continuum_coupling_from_amplitude(
                        pump_amplitude, convention, delta_eps, rg
                    )
            elif amp is not None:
                pump_amplitude = amp
                gamma_for_conv = res_gamma if res_gamma is not None else (
                    intensity_ref[1] if intensity_ref else None
                )
                if convention == "narrow" and gamma_for_conv is None:
                    errors.append("pulses.pump.amplitude: narrow convention needs a resonance width")
                else:
                    coup = units.continuum_coupling_from_amplitude(
                        pump_amplitude, convention, delta_eps, gamma_for_conv
                    )
            elif coup_direct is not None:
                coup = coup_direct
                gamma_for_conv = res_gamma if res_gamma is not None else (
                    intensity_ref[1] if intensity_ref else None
                )
                if convention == "broad" or gamma_for_conv is not None:
                    pump_amplitude = units.display_pump_units(coup, convention, delta_eps, gamma_for_conv)
            if None not in (p_w, p_off):
                try:
                    pump = GaussianPulse(peak=coup, center_offset=p_off, width=p_w, sign=-1)
                except ValueError as exc:
                    errors.append(f"pulses.pump: {exc}")
        pulses_sec.finish()
        if stokes is not None and pump is not None:
            try:
                pulse_pair = PulsePair(stokes=stokes, pump=pump, t0=t_ref)
            except ValueError as exc:
                errors.append(f"pulses: {exc}")

    # collision time default: midpoint of the two pulse peaks
    if t0_s is None and pulse_pair is not None:
        from .pulses import peak_time

        t0_s = 0.5 * (
            peak_time(pulse_pair.stokes, pulse_pair.t0) + peak_time(pulse_pair.pump, pulse_pair.t0)
        )
    wavepacket = Wavepacket(eps0=eps0, delta_eps=delta_eps, t0=t0_s or 0.0)

    # integration controls
    int_sec = root.section("integration")
    integration = None
    pad = 6.0
    if int_sec is not None:
        rel_tol = int_sec.take("rel_tol", default=1e-9, kind="number")
        abs_tol = int_sec.take("abs_tol", default=1e-12, kind="number")
        method = int_sec.take("method", default="lsoda", kind="str")
        n_samples = int_sec.take("n_samples", default=1201, kind="int")
        pad = int_sec.take("pad_widths", default=6.0, kind="number")
        max_step = _take_quantity(int_sec, errors, [("max_step_us", US), ("max_step_s", 1.0)])
        t_start = _take_quantity(int_sec, errors, [("t_start_us", US), ("t_start_s", 1.0)])
        t_end = _take_quantity(int_sec, errors, [("t_end_us", US), ("t_end_s", 1.0)])
        int_sec.finish()
        try:
            if (t_start is None) != (t_end is None):
                errors.append("integration: t_start and t_end must be given together")
            elif t_start is not None:
                integration = IntegrationControls(
                    t_start=t_start,
                    t_end=t_end,
                    rel_tol=rel_tol,
                    abs_tol=abs_tol,
                    max_step=max_step,
                    method=method,
                    n_samples=n_samples,
                )
            elif pulse_pair is not None:
                integration = dynamics.default_window(
                    pulse_pair,
                    wavepacket,
                    pad=pad,
                    rel_tol=rel_tol,
                    abs_tol=abs_tol,
                    max_step=max_step,
                    method=method,
                    n_samples=n_samples,
                )
        except ValueError as exc:
            errors.append(f"integration: {exc}")

    oracle_sec = root.section("oracle")
    n_oracle = 512
    if oracle_sec is not None:
        n_oracle = oracle_sec.take("n_states", default=512, kind="int")
        oracle_sec.finish()
        if n_oracle < 64:
            errors.append("oracle.n_states: must be >= 64")
            n_oracle = 64

    # ensemble
    ens_sec = root.section("ensemble")
    ens = None
    if ens_sec is not None:
        temp = _take_quantity(
            ens_sec, errors, [("temperature_uK", 1e-6), ("temperature_K", 1.0)], required=True
        )
        dens = ens_sec.take("density_per_cm3", required=True, kind="number")
        mass = _take_quantity(
            ens_sec, errors, [("reduced_mass_amu", AMU), ("reduced_mass_kg", 1.0)], required=True
        )
        vol = ens_sec.take("trap_volume_cm3", required=True, kind="number")
        n_nodes = ens_sec.take("n_nodes", default=16, kind="int")
        ens_sec.finish()
        if None not in (temp, dens, mass, vol):
            try:
                ens = ensemble.EnsembleSpec(
                    temperature=temp,
                    density=dens,
                    reduced_mass=mass,
                    trap_volume=vol,
                )
            except ValueError as exc:
                errors.append(f"ensemble: {exc}")
        if ens is not None:
            ens = (ens, n_nodes)

    # optimize
    opt_sec = root.section("optimize")
    opt = None
    if opt_sec is not None:
        free = opt_sec.take("free", required=True, kind="list") or []
        bounds_sec = opt_sec.section("bounds", required=True)
        objective = opt_sec.take("objective", default="final_population", kind="str")
        budget = opt_sec.take("budget", default=2000, kind="int")
        seed = opt_sec.take("seed", default=0, kind="int")
        restarts = opt_sec.take("restarts", default=4, kind="int")
        bounds = {}
        if bounds_sec is not None:
            for name in list(bounds_sec.data.keys()):
                pairv = bounds_sec.take(name, kind="list")
                if not (isinstance(pairv, list) and len(pairv) == 2):
                    errors.append(f"optimize.bounds.{name}: expected [lower, upper]")
                    continue
                bounds[name] = (float(pairv[0]), float(pairv[1]))
            bounds_sec.finish()
        opt_sec.finish()
        for name in free:
            if name not in optimizer.FREE_PARAMETERS:
                errors.append(f"optimize.free: unknown parameter {name!r}")
        opt = dict(
            free=tuple(free),
            bounds=bounds,
            objective=objective,
            budget=budget,
            seed=seed,
            restarts=restarts,
        )

    sweep_sec = root.section("sweep")
    sweep_spec = None
    if sweep_sec is not None:
        s_param = sweep_sec.take("param", required=True, kind="str")
        s_vals = sweep_sec.take("values", required=True, kind="list")
        sweep_sec.finish()
        if s_param is not None and s_param not in optimizer.FREE_PARAMETERS:
            errors.append(f"sweep.param: unknown parameter {s_param!r}")
        sweep_spec = dict(param=s_param, values=s_vals)

    est_sec = root.section("estimate")
    est = None
    if est_sec is not None:
        est = dict(
            tau_tr_us=est_sec.take("tau_tr_us", kind="number"),
            p_avg=est_sec.take("p_avg", kind="number"),
            cycle_time_us=est_sec.take("cycle_time_us", required=True, kind="number"),
            residual=est_sec.take("residual", default=1e-2, kind="number"),
        )
        est_sec.finish()

    root.finish()
    if errors:
        raise ConfigError("invalid config:\n  " + "\n  ".join(sorted(errors)))

    scenario = ScenarioConfig(
        regime=regime,
        pulses=pulse_pair,
        wavepacket=wavepacket,
        resonance=resonance,
        delta=delta,
        gamma=gamma_decay,
        two_photon_offset=off,
        integration=integration,
        source_model=source_model,
        n_oracle_states=n_oracle,
    )

    parsed = ParsedConfig(
        scenario=scenario,
        normalized={},
        ensemble=ens[0] if ens else None,
        optimize=opt,
        sweep=sweep_spec,
        estimate=est,
        intensity_ref=intensity_ref,
        omega_s0=omega_s0,
        pump_amplitude=pump_amplitude,
        mu21_debye=mu21,
    )
    parsed.normalized = serialize_config(parsed, n_nodes=ens[1] if ens else None, raw=doc)
    return parsed


def serialize_config(parsed: ParsedConfig, n_nodes: int | None = None, raw: dict | None = None) -> dict:
    """Fully-resolved config document in internal units.

    parse(serialize(parse(x))) reproduces parse(x) exactly: the emitted
    keys all use internal units, so no conversion arithmetic is repeated.
    """
    cfg = parsed.scenario
    ctl = cfg.controls()
    out: dict = {
        "regime": cfg.regime,
        "gamma_per_s": cfg.gamma,
        "source_model": cfg.source_model,
        "detunings": {
            "delta_per_s": cfg.delta,
            "two_photon_offset_per_s": cfg.two_photon_offset,
        },
        "wavepacket": {
            "delta_eps_per_s": cfg.wavepacket.delta_eps,
            "eps0_per_s": cfg.wavepacket.eps0,
            "t0_s": cfg.wavepacket.t0,
        },
        "pulses": {
            "reference_time_s": cfg.pulses.t0,
            "stokes": {
                "peak_per_s": cfg.pulses.stokes.peak,
                "width_s": cfg.pulses.stokes.width,
                "offset_s": cfg.pulses.stokes.center_offset,
            },
            "pump": {
                "coupling_per_sqrt_s": cfg.pulses.pump.peak,
                "width_s": cfg.pulses.pump.width,
                "offset_s": cfg.pulses.pump.center_offset,
            },
        },
        "integration": {
            "t_start_s": ctl.t_start,
            "t_end_s": ctl.t_end,
            "rel_tol": ctl.rel_tol,
            "abs_tol": ctl.abs_tol,
            "method": ctl.method,
            "n_samples": ctl.n_samples,
            "max_step_s": ctl.max_step,
        },
        "oracle": {"n_states": cfg.n_oracle_states},
    }
    if parsed.mu21_debye is not None:
        out["pulses"]["mu21_debye"] = parsed.mu21_debye
    if cfg.resonance is not None:
        res = cfg.resonance
        out["resonance"] = {
            "q": res.q,
            "gamma_per_s": res.gamma,
            "eps_f_minus_eps0_per_s": res.eps_f - cfg.wavepacket.eps0,
        }
        if parsed.intensity_ref is not None and parsed.intensity_ref[1] == res.gamma:
            out["resonance"]["mu2b_debye"] = parsed.intensity_ref[2]
    elif parsed.intensity_ref is not None:
        rq, rg, rmu = parsed.intensity_ref
        out["intensity_reference"] = {"q": rq, "gamma_per_s": rg, "mu2b_debye": rmu}
    if parsed.ensemble is not None:
        out["ensemble"] = {
            "temperature_K": parsed.ensemble.temperature,
            "density_per_cm3": parsed.ensemble.density,
            "reduced_mass_kg": parsed.ensemble.reduced_mass,
            "trap_volume_cm3": parsed.ensemble.trap_volume,
            "n_nodes": n_nodes if n_nodes is not None else 16,
        }
    for key in ("optimize", "sweep", "estimate"):
        section = getattr(parsed, key)
        if section is not None and raw is not None and key in raw:
            out[key] = raw[key]
    return out


# ---------------------------------------------------------------------------
# command execution


def preset_names() -> list[str]:
    files = importlib.resources.files("pastirap").joinpath("presets")
    return sorted(p.name[: -len(".json")] for p in files.iterdir() if p.name.endswith(".json"))


def load_preset_text(name: str) -> str:
    path = importlib.resources.files("pastirap").joinpath("presets", f"{name}.json")
    if not path.is_file():
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(preset_names())}")
    return path.read_text()


def _tool_version() -> str:
    try:
        return importlib.metadata.version("pastirap")
    except importlib.metadata.PackageNotFoundError:
        return "unknown"


def _intensities(parsed: ParsedConfig) -> dict:
    """Peak intensities implied by the configured amplitudes, in W/cm^2."""
    out: dict = {}
    cfg = parsed.scenario
    if parsed.mu21_debye:
        out["stokes_peak_intensity_w_cm2"] = units.stokes_intensity(
            cfg.pulses.stokes.peak, parsed.mu21_debye
        )
    if parsed.intensity_ref is not None and parsed.pump_amplitude:
        rq, rg, rmu = parsed.intensity_ref
        if cfg.pump_convention == "narrow":
            out["pump_peak_intensity_w_cm2"] = units.pump_intensity_narrow(
                parsed.pump_amplitude, rq, rg, rmu
            )
        else:
            out["pump_peak_intensity_w_cm2"] = units.pump_intensity_broad(
                parsed.pump_amplitude, rq, cfg.wavepacket.delta_eps, rg, rmu
            )
    return out


def _series_results(parsed: ParsedConfig, ts: TimeSeries) -> dict:
    cfg = parsed.scenario
    results = {
        "final_population_target": float(np.abs(ts.c1[-1]) ** 2),
        "final_population_excited": float(np.abs(ts.c2[-1]) ** 2),
        "efficiency": ts.final_population,
        "peak_population_excited": float(np.max(np.abs(ts.c2) ** 2)),
        "tau_tr_s": overlap_time(cfg.pulses),
        "window_s": [float(ts.times[0]), float(ts.times[-1])],
    }
    if ts.continuum is not None:
        results["final_population_continuum"] = float(ts.continuum[-1])
        results["oracle"] = {k: v for k, v in ts.meta.items()}
    results.update(_intensities(parsed))
    return results


def _summary(command: str, parsed: ParsedConfig, results: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": _tool_version(),
        "created_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "command": command,
        "config": parsed.normalized,
        "results": results,
    }


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o)}")


def _write_json(path: Path, payload: dict):
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n")


def _check_overwrite(paths: list[Path], force: bool):
    existing = [str(p) for p in paths if p.exists()]
    if existing and not force:
        raise FileExistsError(
            f"refusing to overwrite existing output ({', '.join(existing)}); use --force"
        )


def run(
    command: str,
    config_text: str,
    out_dir: str | Path,
    overrides: list[str] | None = None,
    force: bool = False,
) -> dict:
    """Execute one command; returns the summary payload written to disk."""
    if command not in COMMANDS:
        raise ValueError(f"unknown command {command!r}")
    doc = json.loads(config_text)
    for item in overrides or []:
        key, _, value = item.partition("=")
        if not _:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        _apply_override(doc, key, value)
    parsed = parse_config(doc)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary_path = out / "summary.json"
    series_path = out / "timeseries.csv"

    if command == "simulate":
        _check_overwrite([summary_path, series_path], force)
        ts = dynamics.integrate(parsed.scenario)
        dynamics.write_timeseries_csv(ts, series_path)
        payload = _summary(command, parsed, _series_results(parsed, ts))
    elif command == "oracle":
        _check_overwrite([summary_path, series_path], force)
        cfg = parsed.scenario
        if cfg.regime in ("none", "broad", "narrow"):
            cfg = replace(cfg, regime="full_oracle", resonance=cfg.resonance)
        ts = dynamics.full_model_oracle(cfg, cfg.n_oracle_states)
        dynamics.write_timeseries_csv(ts, series_path)
        payload = _summary(command, parsed, _series_results(parsed, ts))
    elif command == "average":
        if parsed.ensemble is None:
            raise ConfigError("average requires an ensemble section")
        _check_overwrite([summary_path], force)
        n_nodes = parsed.normalized.get("ensemble", {}).get("n_nodes", 16)
        avg = ensemble.average_efficiency(parsed.ensemble, parsed.scenario, n_nodes)
        results = {
            "p_avg": avg.p_avg,
            "n_nodes": n_nodes,
            "node_energies_uK": [units.temperature_from_energy(e) for e in avg.node_energies],
            "node_efficiencies": list(avg.node_values),
            "tau_tr_s": overlap_time(parsed.scenario.pulses),
        }
        results.update(_intensities(parsed))
        payload = _summary(command, parsed, results)
    elif command == "optimize":
        if parsed.optimize is None:
            raise ConfigError("optimize requires an optimize section")
        _check_overwrite([summary_path, series_path, out / "optimization.json"], force)
        problem = _build_problem(parsed)
        result = optimizer.optimize(problem)
        best_cfg = optimizer.apply_parameters(parsed.scenario, result.best_params)
        ts = dynamics.integrate(best_cfg)
        dynamics.write_timeseries_csv(ts, series_path)
        report = {
            "problem": {
                "free": list(problem.free_params),
                "bounds": {k: list(v) for k, v in problem.bounds.items()},
                "objective": problem.objective,
                "budget": problem.budget,
                "seed": problem.seed,
            },
            "best_params": result.best_params,
            "best_value": result.best_value,
            "evaluations": result.evaluations,
            "trace": result.trace,
        }
        _write_json(out / "optimization.json", report)
        results = _series_results(parsed, ts)
        results["best_value"] = result.best_value
        results["best_params"] = result.best_params
        payload = _summary(command, parsed, results)
    elif command == "sweep":
        if parsed.sweep is None:
            raise ConfigError("sweep requires a sweep section")
        _check_overwrite([summary_path, out / "sweep.csv"], force)
        points = optimizer.sweep(parsed.scenario, parsed.sweep["param"], parsed.sweep["values"])
        with open(out / "sweep.csv", "w") as fh:
            fh.write(f"{parsed.sweep['param']},final_population\n")
            for v, p in points:
                fh.write(f"{v:.17g},{p:.17g}\n")
        payload = _summary(command, parsed, {"param": parsed.sweep["param"], "points": points})
    else:  # estimate
        if parsed.ensemble is None or parsed.estimate is None:
            raise ConfigError("estimate requires ensemble and estimate sections")
        _check_overwrite([summary_path], force)
        est = parsed.estimate
        p_avg = est.get("p_avg")
        if p_avg is None:
            n_nodes = parsed.normalized.get("ensemble", {}).get("n_nodes", 16)
            p_avg = ensemble.average_efficiency(parsed.ensemble, parsed.scenario, n_nodes).p_avg
        tau = est.get("tau_tr_us")
        tau_tr = tau * US if tau is not None else overlap_time(parsed.scenario.pulses)
        f = ensemble.fraction_per_pulse_pair(parsed.ensemble, p_avg, tau_tr)
        train = ensemble.pulse_train_estimate(
            parsed.ensemble, f, est["cycle_time_us"] * US, est["residual"]
        )
        payload = _summary(
            command,
            parsed,
            {
                "p_avg": p_avg,
                "tau_tr_s": tau_tr,
                "fraction_per_pulse_pair": f,
                "n_pairs": train.n_pairs,
                "total_time_s": train.total_time,
                "production_rate_per_s": train.production_rate,
            },
        )
    _write_json(summary_path, payload)
    return payload


def _apply_override(doc: dict, dotted: str, value: str):
    keys = dotted.split(".")
    node = doc
    for k in keys[:-1]:
        if not isinstance(node.get(k), dict):
            node[k] = {}
        node = node[k]
    try:
        node[keys[-1]] = json.loads(value)
    except json.JSONDecodeError:
        node[keys[-1]] = value


def _build_problem(parsed: ParsedConfig) -> optimizer.OptimizationProblem:
    opt = parsed.optimize
    cfg = parsed.scenario
    bounds = {}
    for name, (lo, hi) in opt["bounds"].items():
        if name in ("t_s", "t_p", "tau_s", "tau_p", "t0"):
            bounds[name] = (lo * US, hi * US)  # config bounds in microseconds
        elif name == "omega_p0":
            gamma_for_conv = None
            if cfg.resonance is not None:
                gamma_for_conv = cfg.resonance.gamma
            elif parsed.intensity_ref is not None:
                gamma_for_conv = parsed.intensity_ref[1]
            conv = lambda a: units.continuum_coupling_from_amplitude(
                a, cfg.pump_convention, cfg.wavepacket.delta_eps, gamma_for_conv
            )
            bounds[name] = (conv(lo), conv(hi))
        else:
            bounds[name] = (lo, hi)
    return optimizer.OptimizationProblem(
        base=cfg,
        free_params=tuple(opt["free"]),
        bounds=bounds,
        objective=opt["objective"],
        budget=opt["budget"],
        seed=opt["seed"],
        ensemble=parsed.ensemble,
        n_restarts=opt["restarts"],
    )


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="pastirap",
        description="Photoassociative STIRAP transfer simulations near a Feshbach resonance",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--config", help="path to a JSON scenario config")
        src.add_argument("--preset", help=f"shipped preset name ({', '.join(preset_names())})")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config value (dotted path, JSON value)")
        p.add_argument("--force", action="store_true", help="overwrite existing outputs")
    args = parser.parse_args(argv)

    try:
        text = load_preset_text(args.preset) if args.preset else Path(args.config).read_text()
        run(args.command, text, args.out, args.set, args.force)
    except Exception as exc:
        json.dump(
            {"error": {"type": type(exc).__name__, "message": str(exc)}},
            sys.stdout,
            indent=2,
        )
        print()
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
