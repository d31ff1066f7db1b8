"""Time integration of the reduced two-amplitude systems and the full model.

The rotating-frame amplitudes (c1: target state, c2: excited state) are
driven by the Stokes Rabi frequency, the collisional source term, and the
continuum back-action.  In the broad-resonance limit the back-action is the
instantaneous complex factor

    1 + (q - i)^2 / (1 + 2i (eps_f - (wS - wp)) / Gamma)

multiplying the bare continuum loss pi |coupling|^2; in the narrow limit it
keeps an exponential memory kernel, which is evolved as an auxiliary
amplitude m with dm/dt = coupling*c2 - (Gamma/2 + i Delta_F) m (exact for
an exponential kernel, no history integration needed).

The discretized three-level continuum model (`full_model_oracle`) serves as
a brute-force cross-check of the reduced systems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import solve_ivp

from . import pulses as pulses_mod
from . import source as source_mod
from .fano import FanoResonance, lineshape, sign_from_resonance
from .pulses import PulsePair
from .source import SourceParams, Wavepacket
from .specfun import i0_minus_l0_values, i1_minus_lm1_values
from .units import display_pump_units

__all__ = [
    "REGIMES",
    "AmplitudeState",
    "IntegrationControls",
    "ScenarioConfig",
    "TimeSeries",
    "IntegrationError",
    "broad_back_action_factor",
    "rhs_no_res",
    "rhs_broad",
    "rhs_narrow",
    "integrate",
    "full_model_oracle",
    "default_window",
    "write_timeseries_csv",
    "CSV_COLUMNS",
]

REGIMES = ("none", "broad", "narrow", "full_oracle")

CSV_COLUMNS = (
    "t",
    "re_c1",
    "im_c1",
    "re_c2",
    "im_c2",
    "pop1",
    "pop2",
    "omega_s",
    "omega_p_display",
)


class IntegrationError(RuntimeError):
    """Step-size underflow or tolerance failure, carrying the failure time."""

    def __init__(self, message: str, t_failure: float):
        super().__init__(message)
        self.t_failure = t_failure


@dataclass(frozen=True)
class AmplitudeState:
    """Complex amplitudes of the target (c1) and excited (c2) states plus the
    narrow-regime memory amplitude."""

    c1: complex = 0.0 + 0.0j
    c2: complex = 0.0 + 0.0j
    mem: complex = 0.0 + 0.0j

    def as_array(self, with_mem: bool) -> np.ndarray:
        if with_mem:
            return np.array([self.c1, self.c2, self.mem], dtype=complex)
        return np.array([self.c1, self.c2], dtype=complex)


@dataclass(frozen=True)
class IntegrationControls:
    """Integration window and solver controls."""

    t_start: float
    t_end: float
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_step: float | None = None
    method: str = "lsoda"  # lsoda | rk45 | dop853 | bdf | radau
    n_samples: int = 1201

    def __post_init__(self):
        if self.t_end <= self.t_start:
            raise ValueError("t_end must exceed t_start")
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be > 0")
        if self.method not in ("lsoda", "rk45", "dop853", "bdf", "radau"):
            raise ValueError(f"unknown integration method {self.method!r}")


def default_window(pulses: PulsePair, wavepacket: Wavepacket, pad: float = 6.0, **kwargs) -> IntegrationControls:
    """Window covering every Gaussian feature out to ``pad`` widths.

    pad = 6 puts all envelope and wavepacket tails below ~1e-12 of peak at
    the window edges.
    """
    collision_width = math.sqrt(2.0) / wavepacket.delta_eps
    starts = [
        pulses_mod.peak_time(pulses.stokes, pulses.t0) - pad * pulses.stokes.width,
        pulses_mod.peak_time(pulses.pump, pulses.t0) - pad * pulses.pump.width,
        wavepacket.t0 - pad * collision_width,
    ]
    ends = [
        pulses_mod.peak_time(pulses.stokes, pulses.t0) + pad * pulses.stokes.width,
        pulses_mod.peak_time(pulses.pump, pulses.t0) + pad * pulses.pump.width,
        wavepacket.t0 + pad * collision_width,
    ]
    return IntegrationControls(t_start=min(starts), t_end=max(ends), **kwargs)


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete setup of one transfer simulation.

    regime             'none', 'broad', 'narrow', or 'full_oracle'
    pulses             the Stokes/pump pair; the pump peak is the internal
                       continuum coupling mu2eps.E_p/hbar in 1/sqrt(s)
    wavepacket         collisional wavepacket (eps0, delta_eps, t0)
    resonance          required for broad/narrow, forbidden for none
    delta              one-photon detuning E2/hbar - omega_S (1/s)
    gamma              excited-state decay rate (1/s)
    two_photon_offset  eps0 - (omega_S - omega_p) (1/s)
    integration        window/solver controls; a pad-6 default is derived
                       when omitted
    source_model       'auto' (match regime), 'no_res', 'broad',
                       'narrow_approx' or 'exact'
    n_oracle_states    continuum bins for the full_oracle regime
    """

    regime: str
    pulses: PulsePair
    wavepacket: Wavepacket
    resonance: FanoResonance | None = None
    delta: float = 0.0
    gamma: float = 0.0
    two_photon_offset: float = 0.0
    integration: IntegrationControls | None = None
    source_model: str = "auto"
    n_oracle_states: int = 512

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ValueError(f"regime must be one of {REGIMES}, got {self.regime!r}")
        if self.regime in ("broad", "narrow") and self.resonance is None:
            raise ValueError(f"regime {self.regime!r} requires a resonance")
        if self.regime == "none" and self.resonance is not None:
            raise ValueError("regime 'none' must not carry a resonance")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.source_model not in ("auto", "no_res", "broad", "narrow_approx", "exact"):
            raise ValueError(f"unknown source model {self.source_model!r}")
        if self.integration is not None:
            ctl = self.integration
            if not (ctl.t_start < self.wavepacket.t0 < ctl.t_end):
                raise ValueError("the collision time must lie inside the integration window")
            span = ctl.t_end - ctl.t_start
            min_span = 6.0 * max(self.pulses.stokes.width, self.pulses.pump.width)
            if span < min_span:
                raise ValueError(
                    f"integration window {span:.3e} s shorter than six pulse widths {min_span:.3e} s"
                )

    @property
    def two_photon(self) -> float:
        """omega_S - omega_p implied by the offset convention."""
        return self.wavepacket.eps0 - self.two_photon_offset

    @property
    def feshbach_detuning(self) -> float:
        """eps_f - (omega_S - omega_p); requires a resonance."""
        if self.resonance is None:
            raise ValueError("no resonance in this scenario")
        return self.resonance.eps_f - self.two_photon

    @property
    def pump_convention(self) -> str:
        """Display-unit convention for the pump amplitude."""
        return "narrow" if self.regime == "narrow" else "broad"

    def controls(self) -> IntegrationControls:
        """The configured integration controls, or the pad-6 default."""
        if self.integration is not None:
            return self.integration
        return default_window(self.pulses, self.wavepacket)


@dataclass
class TimeSeries:
    """Sampled trajectory of one integration."""

    times: np.ndarray  # (n,), s, strictly increasing
    c1: np.ndarray  # (n,) complex
    c2: np.ndarray  # (n,) complex
    mem: np.ndarray  # (n,) complex, zero outside the narrow regime
    omega_s: np.ndarray  # (n,) Stokes Rabi frequency, 1/s
    pump_display: np.ndarray  # (n,) dimensionless pump amplitude
    continuum: np.ndarray | None = None  # (n,) summed continuum population
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.times)
        for name in ("c1", "c2", "mem", "omega_s", "pump_display"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"length mismatch in field {name}")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    @property
    def populations(self) -> np.ndarray:
        """(n, 2) array of |c1|^2, |c2|^2."""
        return np.column_stack([np.abs(self.c1) ** 2, np.abs(self.c2) ** 2])

    @property
    def states(self) -> list[AmplitudeState]:
        return [AmplitudeState(a, b, m) for a, b, m in zip(self.c1, self.c2, self.mem)]

    @property
    def final(self) -> AmplitudeState:
        return AmplitudeState(self.c1[-1], self.c2[-1], self.mem[-1])

    @property
    def final_population(self) -> float:
        """Transfer efficiency |c1|^2 at the end of the window."""
        return float(np.abs(self.c1[-1]) ** 2)


def broad_back_action_factor(q: float, feshbach_detuning: float, gamma: float) -> complex:
    """Complex factor multiplying the bare continuum loss in the broad limit.

    1 at large detuning (bare continuum), q^2 - 2iq... at zero detuning,
    and exactly 0 for q = 0 on resonance (induced loss interferes away).
    """
    return 1.0 + (q - 1j) ** 2 / (1.0 + 2j * feshbach_detuning / gamma)


# ---------------------------------------------------------------------------
# right-hand sides


class _Drive:
    """Snapshot of everything the right-hand side needs, for fast evaluation."""

    def __init__(self, cfg: ScenarioConfig, source_model: str):
        self.cfg = cfg
        p = cfg.pulses
        self.stokes_center = pulses_mod.peak_time(p.stokes, p.t0)
        self.stokes_width = p.stokes.width
        self.stokes_peak = p.stokes.peak
        self.pump_center = pulses_mod.peak_time(p.pump, p.t0)
        self.pump_width = p.pump.width
        self.pump_peak = p.pump.peak
        w = cfg.wavepacket
        self.t0w = w.t0
        self.de = w.delta_eps
        self.offset = cfg.two_photon_offset
        # bare source amplitude per unit coupling: sqrt(2 pi) de (pi de^2)^(-1/4)
        self.k_source = math.sqrt(2.0 * math.pi) * w.delta_eps / (math.pi * w.delta_eps**2) ** 0.25
        self.source_model = source_model
        res = cfg.resonance
        if res is not None:
            self.q = res.q
            self.gamma_res = res.gamma
            self.detuning_f = cfg.feshbach_detuning
            self.g_factor = float(lineshape(res, w.eps0) * sign_from_resonance(res, w.eps0))
            self.xi = res.gamma / (math.sqrt(2.0) * w.delta_eps)
            self.big_d = (res.eps_f - w.eps0) / (math.sqrt(2.0) * w.delta_eps)
            self.d_gauss = math.exp(-self.big_d**2) if self.big_d**2 < 700 else 0.0
        self._exact_table = None
        if source_model == "exact":
            self._exact_table = self._build_exact_table()

    def omega_s(self, t: float) -> float:
        x = (t - self.stokes_center) / self.stokes_width
        return self.stokes_peak * math.exp(-x * x)

    def coupling(self, t: float) -> float:
        x = (t - self.pump_center) / self.pump_width
        return self.pump_peak * math.exp(-x * x)

    def source(self, t: float) -> complex:
        """S(t) for the configured source model, at the instantaneous coupling."""
        coup = self.coupling(t)
        if coup == 0.0:
            return 0.0 + 0.0j
        if self._exact_table is not None:
            return coup * self._exact_unit(t)
        u = (t - self.t0w) * self.de
        gauss = math.exp(-0.5 * u * u) if u * u < 1400 else 0.0
        phase = np.exp(-1j * self.offset * t)
        model = self.source_model
        if model == "no_res":
            return coup * self.k_source * gauss * phase
        if model == "broad":
            return coup * self.k_source * self.g_factor * gauss * phase
        # narrow_approx: Gaussian plus the Bessel/Struve bound-state tail
        dtau = u / math.sqrt(2.0)
        bracket = math.exp(-dtau * dtau) if dtau * dtau < 700 else 0.0
        if self.d_gauss > 0.0:
            x = self.xi * abs(dtau)
            sgn = 1.0 if dtau >= 0.0 else -1.0
            kern = complex(i1_minus_lm1_values(x)) - 1j * self.q * complex(i0_minus_l0_values(x)) * sgn
            bracket = bracket + (
                0.5 * self.xi * math.sqrt(math.pi) * self.d_gauss
                * np.exp(-2j * self.big_d * dtau) * kern
            )
        return coup * self.k_source * bracket * phase

    def _source_params(self, coupling: float) -> SourceParams:
        return SourceParams(
            wavepacket=self.cfg.wavepacket,
            resonance=self.cfg.resonance,
            two_photon=self.cfg.two_photon,
            pump_coupling=coupling,
        )

    def _build_exact_table(self):
        """Tabulate the unit-coupling general source on a dense grid and
        interpolate; direct quadrature per step would dominate the run."""
        from scipy.interpolate import CubicSpline

        ctl = self.cfg.controls()
        rate = abs(self.offset) / (2.0 * math.pi)
        if self.cfg.resonance is not None and self.d_gauss > 0.0:
            rate = max(rate, abs(self.detuning_f) / (2.0 * math.pi))
        n = int(min(200001, max(4001, 40 * rate * (ctl.t_end - ctl.t_start))))
        ts = np.linspace(ctl.t_start, ctl.t_end, n)
        vals = source_mod.source_exact_sampled(self._source_params(1.0), ts)
        return CubicSpline(ts, vals)

    def _exact_unit(self, t: float) -> complex:
        return complex(self._exact_table(t))


def _source_model_for(cfg: ScenarioConfig) -> str:
    if cfg.source_model != "auto":
        return cfg.source_model
    return {"none": "no_res", "broad": "broad", "narrow": "narrow_approx", "full_oracle": "no_res"}[
        cfg.regime
    ]


def _make_rhs(cfg: ScenarioConfig):
    """Complex right-hand side f(t, y) and the state dimension for a regime."""
    drive = _Drive(cfg, _source_model_for(cfg))
    delta = cfg.delta
    gamma = cfg.gamma

    if cfg.regime == "none":

        def f(t, y):
            om = drive.omega_s(t)
            coup = drive.coupling(t)
            s = drive.source(t)
            c1, c2 = y[0], y[1]
            dc1 = 1j * om * c2
            dc2 = 1j * om * c1 - (1j * delta + gamma + math.pi * coup * coup) * c2 + 1j * s
            return np.array([dc1, dc2])

        return f, 2, drive

    if cfg.regime == "broad":
        res = cfg.resonance
        bracket = broad_back_action_factor(res.q, cfg.feshbach_detuning, res.gamma)

        def f(t, y):
            om = drive.omega_s(t)
            coup = drive.coupling(t)
            s = drive.source(t)
            c1, c2 = y[0], y[1]
            dc1 = 1j * om * c2
            dc2 = (
                1j * om * c1
                - (1j * delta + gamma) * c2
                - math.pi * coup * coup * bracket * c2
                + 1j * s
            )
            return np.array([dc1, dc2])

        return f, 2, drive

    if cfg.regime == "narrow":
        res = cfg.resonance
        kernel_rate = 0.5 * res.gamma + 1j * cfg.feshbach_detuning
        mem_weight = 0.5 * math.pi * res.gamma * (res.q - 1j) ** 2

        def f(t, y):
            om = drive.omega_s(t)
            coup = drive.coupling(t)
            s = drive.source(t)
            c1, c2, m = y[0], y[1], y[2]
            dc1 = 1j * om * c2
            dc2 = (
                1j * om * c1
                - (1j * delta + gamma + math.pi * coup * coup) * c2
                - mem_weight * coup * m
                + 1j * s
            )
            dm = coup * c2 - kernel_rate * m
            return np.array([dc1, dc2, dm])

        return f, 3, drive

    raise ValueError(f"no reduced right-hand side for regime {cfg.regime!r}")


def _state_rhs(cfg: ScenarioConfig, regime: str, t: float, s: AmplitudeState) -> AmplitudeState:
    if cfg.regime != regime:
        raise ValueError(f"scenario regime is {cfg.regime!r}, expected {regime!r}")
    f, n, _ = _make_rhs(cfg)
    dy = f(t, s.as_array(with_mem=n == 3))
    return AmplitudeState(dy[0], dy[1], dy[2] if n == 3 else 0.0)


def rhs_no_res(cfg: ScenarioConfig, t: float, s: AmplitudeState) -> AmplitudeState:
    """Bare-continuum equations: Stokes coupling, continuum loss pi|coupling|^2,
    and the Gaussian source."""
    return _state_rhs(cfg, "none", t, s)


def rhs_broad(cfg: ScenarioConfig, t: float, s: AmplitudeState) -> AmplitudeState:
    """Broad-resonance equations: loss dressed by the complex back-action
    factor and the lineshape-enhanced source."""
    return _state_rhs(cfg, "broad", t, s)


def rhs_narrow(cfg: ScenarioConfig, t: float, s: AmplitudeState) -> AmplitudeState:
    """Narrow-resonance equations with the memory amplitude evolved alongside
    (c1, c2), keeping the system Markovian."""
    return _state_rhs(cfg, "narrow", t, s)


# ---------------------------------------------------------------------------
# integration


_COMPLEX_METHODS = {"rk45": "RK45", "dop853": "DOP853"}
_REAL_METHODS = {"lsoda": "LSODA", "bdf": "BDF", "radau": "Radau"}


def _solve(f, t_span, y0, t_eval, ctl: IntegrationControls):
    """solve_ivp wrapper handling complex state for the real-only methods."""
    kwargs = dict(rtol=ctl.rel_tol, atol=ctl.abs_tol)
    if ctl.max_step is not None:
        kwargs["max_step"] = ctl.max_step
    if ctl.method in _COMPLEX_METHODS:
        sol = solve_ivp(f, t_span, y0, method=_COMPLEX_METHODS[ctl.method], t_eval=t_eval, **kwargs)
        y = sol.y
    else:
        n = len(y0)

        def f_real(t, yr):
            dy = f(t, yr[:n] + 1j * yr[n:])
            return np.concatenate([dy.real, dy.imag])

        y0r = np.concatenate([y0.real, y0.imag])
        sol = solve_ivp(f_real, t_span, y0r, method=_REAL_METHODS[ctl.method], t_eval=t_eval, **kwargs)
        y = sol.y[:n] + 1j * sol.y[n:]
    if not sol.success:
        t_fail = float(sol.t[-1]) if len(sol.t) else t_span[0]
        raise IntegrationError(f"integration failed at t = {t_fail:.6e} s: {sol.message}", t_fail)
    return sol.t, y


def _sample_times(ctl: IntegrationControls) -> np.ndarray | None:
    if ctl.n_samples and ctl.n_samples >= 2:
        return np.linspace(ctl.t_start, ctl.t_end, ctl.n_samples)
    return None


def _default_max_step(cfg: ScenarioConfig, ctl: IntegrationControls) -> IntegrationControls:
    """Cap the step so no Gaussian feature can be stepped over while the
    amplitudes are still tiny."""
    if ctl.max_step is not None:
        return ctl
    feature = min(
        cfg.pulses.stokes.width,
        cfg.pulses.pump.width,
        math.sqrt(2.0) / cfg.wavepacket.delta_eps,
    )
    return replace(ctl, max_step=feature / 4.0)


def integrate(cfg: ScenarioConfig, initial_state: AmplitudeState | None = None) -> TimeSeries:
    """Integrate the configured regime over its window.

    Returns the sampled trajectory; deterministic for a given config.  The
    default initial state is empty bound amplitudes (all population in the
    continuum wavepacket).
    """
    if cfg.regime == "full_oracle":
        return full_model_oracle(cfg, cfg.n_oracle_states, initial_state=initial_state)
    ctl = _default_max_step(cfg, cfg.controls())
    f, n, drive = _make_rhs(cfg)
    y0 = (initial_state or AmplitudeState()).as_array(with_mem=n == 3)
    t_eval = _sample_times(ctl)
    t, y = _solve(f, (ctl.t_start, ctl.t_end), y0, t_eval, ctl)
    return _build_series(cfg, drive, t, y[0], y[1], y[2] if n == 3 else np.zeros_like(y[0]))


def _build_series(cfg, drive: _Drive, t, c1, c2, mem, continuum=None, meta=None) -> TimeSeries:
    om_s = np.array([drive.omega_s(float(ti)) for ti in t])
    coup = np.array([drive.coupling(float(ti)) for ti in t])
    gamma_res = cfg.resonance.gamma if cfg.resonance is not None else None
    disp = np.array(
        [
            display_pump_units(c, cfg.pump_convention, cfg.wavepacket.delta_eps, gamma_res)
            for c in coup
        ]
    )
    return TimeSeries(
        times=np.asarray(t, dtype=float),
        c1=np.asarray(c1),
        c2=np.asarray(c2),
        mem=np.asarray(mem),
        omega_s=om_s,
        pump_display=disp,
        continuum=continuum,
        meta=meta or {},
    )


def full_model_oracle(
    cfg: ScenarioConfig,
    n_states: int | None = None,
    window: tuple[float, float] | None = None,
    initial_state: AmplitudeState | None = None,
    check_resolution: bool = False,
) -> TimeSeries:
    """Direct integration of the three-level model with a discretized continuum.

    The continuum is a uniform energy grid over ``window`` (default: the
    wavepacket out to 6 bandwidths, merged with the resonance out to 3
    widths when that region is within reach), with sqrt(bin width)
    normalized amplitudes so the summed population approximates the energy
    integral.  Initial bin amplitudes sample the collisional wavepacket.

    ``check_resolution`` repeats the run with doubled n_states and records
    the difference in ``meta['resolution_delta']`` (reported, not fatal).
    """
    n = n_states or cfg.n_oracle_states
    if n < 64:
        raise ValueError(f"need at least 64 continuum states, got {n}")
    w = cfg.wavepacket
    res = cfg.resonance
    if window is None:
        lo, hi = w.eps0 - 6.0 * w.delta_eps, w.eps0 + 6.0 * w.delta_eps
        if res is not None:
            rlo, rhi = res.eps_f - 3.0 * res.gamma, res.eps_f + 3.0 * res.gamma
            if rlo <= hi and rhi >= lo:  # within reach: merge
                lo, hi = min(lo, rlo), max(hi, rhi)
    else:
        lo, hi = window

    eps = lo + (np.arange(n) + 0.5) * (hi - lo) / n
    d_eps = (hi - lo) / n
    if res is not None:
        g = np.asarray(lineshape(res, eps) * sign_from_resonance(res, eps), dtype=float)
    else:
        g = np.ones(n)
    weights = g * math.sqrt(d_eps)
    detun = eps - cfg.two_photon
    ctl = cfg.controls()
    # wavepacket amplitudes as of the window start: the t0 phase makes the
    # packet focus at the collision time, the detuning phase free-evolves
    # the reference-time amplitudes back to t_start
    c_init = (
        (math.pi * w.delta_eps**2) ** -0.25
        * np.exp(-((eps - w.eps0) ** 2) / (2.0 * w.delta_eps**2) + 1j * (eps - w.eps0) * w.t0)
        * math.sqrt(d_eps)
        * np.exp(-1j * detun * ctl.t_start)
    )

    drive = _Drive(cfg, "no_res")  # source handled by the explicit bins here
    delta, gamma = cfg.delta, cfg.gamma

    def f(t, y):
        om = drive.omega_s(t)
        coup = drive.coupling(t)
        c1, c2, cj = y[0], y[1], y[2:]
        dy = np.empty_like(y)
        dy[0] = 1j * om * c2
        dy[1] = 1j * om * c1 - (1j * delta + gamma) * c2 + 1j * coup * (weights @ cj)
        dy[2:] = -1j * detun * cj + (1j * coup * c2) * weights
        return dy

    if ctl.method not in _COMPLEX_METHODS:
        ctl = replace(ctl, method="dop853")
    y0 = np.concatenate(
        [(initial_state or AmplitudeState()).as_array(with_mem=False), c_init]
    )
    t_eval = _sample_times(ctl)
    t, y = _solve(f, (ctl.t_start, ctl.t_end), y0, t_eval, ctl)
    continuum = np.sum(np.abs(y[2:]) ** 2, axis=0)
    meta = {
        "n_states": n,
        "window": (float(lo), float(hi)),
        "bin_width": float(d_eps),
        "initial_norm": float(np.sum(np.abs(c_init) ** 2)),
    }
    if check_resolution:
        finer = full_model_oracle(cfg, 2 * n, window=(lo, hi), initial_state=initial_state)
        meta["resolution_delta"] = abs(
            finer.final_population - float(np.abs(y[0, -1]) ** 2)
        )
    return _build_series(cfg, drive, t, y[0], y[1], np.zeros_like(y[0]), continuum, meta)


def write_timeseries_csv(ts: TimeSeries, path) -> None:
    """Write the fixed 9-column trajectory schema (see CSV_COLUMNS)."""
    with open(path, "w", newline="") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        pop = ts.populations
        for i, t in enumerate(ts.times):
            row = (
                t,
                ts.c1[i].real,
                ts.c1[i].imag,
                ts.c2[i].real,
                ts.c2[i].imag,
                pop[i, 0],
                pop[i, 1],
                ts.omega_s[i],
                ts.pump_display[i],
            )
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
