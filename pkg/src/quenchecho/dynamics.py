"""Time evolution of the chain's momentum modes along a schedule.

Each mode is an independent two-level problem in the instantaneous
eigenbasis; integration restarts at every schedule breakpoint, hold segments
are applied as exact phase maps, and the whole-chain trajectory is assembled
in fixed k order so results are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .schedules import Schedule
from .tfim import Chain, mode_energy, wave_vectors

__all__ = [
    "IntegrationError",
    "IntegratorConfig",
    "ModeState",
    "TrajectoryTrace",
    "GROUND_STATE",
    "free_phase",
    "evolve_mode",
    "evolve_chain",
    "lz_mode_evolve",
    "diabatic_to_adiabatic",
    "adiabatic_to_diabatic",
]


class IntegrationError(RuntimeError):
    """Adaptive stepping failed (step size collapsed below the floor)."""


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_step: float | None = None  # None: min(T/1000, 0.05/Lambda_max)
    sample_count: int = 1000

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_step is not None and self.max_step <= 0:
            raise ValueError("max_step must be positive")
        if self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")


@dataclass(frozen=True)
class ModeState:
    """Amplitude pair in the instantaneous eigenbasis: alpha excited, beta ground."""

    alpha: complex
    beta: complex

    def norm(self) -> float:
        return math.sqrt(abs(self.alpha) ** 2 + abs(self.beta) ** 2)

    def populations(self) -> tuple[float, float]:
        return abs(self.alpha) ** 2, abs(self.beta) ** 2


GROUND_STATE = ModeState(0.0 + 0.0j, 1.0 + 0.0j)


@dataclass
class TrajectoryTrace:
    """Sampled time series of the whole-chain evolution.

    `mode_populations[i, m]` is |beta_k|^2 of mode m at sample i; `p_gs` is
    the product across modes.
    """

    times: np.ndarray
    g_values: np.ndarray
    p_gs: np.ndarray
    mode_populations: np.ndarray
    final_states: list = field(default_factory=list)

    @property
    def samples(self):
        """Rows (t, g, p_gs, per-mode |beta|^2 list)."""
        return [
            (self.times[i], self.g_values[i], self.p_gs[i], list(self.mode_populations[i]))
            for i in range(len(self.times))
        ]


def free_phase(state: ModeState, k: float, g: float, j: float, delta_t: float) -> ModeState:
    """Exact evolution at fixed g: alpha and beta pick up e^{-+ i Lambda dt}."""
    if delta_t < 0:
        raise ValueError("delta_t must be >= 0")
    lam = mode_energy(k, g, j)
    return ModeState(state.alpha * np.exp(-1j * lam * delta_t),
                     state.beta * np.exp(+1j * lam * delta_t))


def _default_max_step(s: Schedule, j: float, cfg: IntegratorConfig) -> float:
    if cfg.max_step is not None:
        return cfg.max_step
    g_min, g_max = s.g_range()
    # Lambda is maximal at the g extreme farthest from cos k; bound over all
    # modes by the k=pi limit.
    lam_max = max(mode_energy(np.pi, g_min, j), mode_energy(np.pi, g_max, j))
    return min(s.total_duration / 1000.0, 0.05 / lam_max)


def evolve_mode(k: float, s: Schedule, j: float, cfg: IntegratorConfig,
                initial: ModeState = GROUND_STATE,
                sample_times: np.ndarray | None = None):
    """Integrate one mode along the schedule.

    Returns the final ModeState; with `sample_times` given (sorted, within
    [0, T], containing 0 and T is not required) also returns an array of
    |beta|^2 at those times:  ``(state, pops)``.
    """
    kinds, durs, params, revs = s.packed()
    starts = np.concatenate(([0.0], np.cumsum(durs)[:-1]))
    total = s.total_duration
    max_step = _default_max_step(s, j, cfg)
    min_step = 1e-14 * total if total > 0 else 0.0

    want_samples = sample_times is not None
    if want_samples:
        sample_times = np.asarray(sample_times, dtype=float)
        pops = np.empty(len(sample_times))

    a = complex(initial.alpha)
    b = complex(initial.beta)
    si = 0  # next sample index
    for i in range(len(kinds)):
        t0, t1 = starts[i], starts[i] + durs[i]
        if want_samples:
            while si < len(sample_times) and sample_times[si] <= t0 + 1e-15 * max(total, 1.0):
                pops[si] = abs(b) ** 2
                si += 1
        # stop points inside this segment
        if want_samples:
            hi = np.searchsorted(sample_times, t1 - 1e-15 * max(total, 1.0))
            stops = list(sample_times[si:hi]) + [t1]
        else:
            stops = [t1]
        cur = t0
        for stop in stops:
            if stop > cur:
                if kinds[i] == _kernels.KIND_HOLD:
                    g = params[i, 0]
                    lam = mode_energy(k, g, j)
                    dt = stop - cur
                    a *= np.exp(-1j * lam * dt)
                    b *= np.exp(+1j * lam * dt)
                else:
                    a, b, status = _kernels.evolve_segment(
                        a, b, cur - t0, stop - t0, kinds[i], params[i], revs[i],
                        durs[i], k, j, cfg.rel_tol, cfg.abs_tol, max_step, min_step)
                    if status != _kernels.STATUS_OK:
                        raise IntegrationError(
                            f"step size underflow in segment {i} (k={k:.4f})")
                cur = stop
            if want_samples and stop < t1:
                pops[si] = abs(b) ** 2
                si += 1
    if want_samples:
        while si < len(sample_times):
            pops[si] = abs(b) ** 2
            si += 1
        return ModeState(a, b), pops
    return ModeState(a, b)


def evolve_chain(chain: Chain, s: Schedule, cfg: IntegratorConfig = IntegratorConfig()) -> TrajectoryTrace:
    """Evolve all N/2 modes from the instantaneous ground state.

    Samples `cfg.sample_count` uniformly spaced times plus every schedule
    breakpoint.  The final `p_gs` is the echo fidelity when `s` is an echo
    schedule.
    """
    ks = wave_vectors(chain)
    times = np.unique(np.concatenate([
        np.linspace(0.0, s.total_duration, cfg.sample_count),
        s.breakpoints,
    ]))
    mode_pops = np.empty((len(times), len(ks)))
    finals = []
    for m, k in enumerate(ks):
        state, pops = evolve_mode(float(k), s, chain.coupling_j, cfg,
                                  GROUND_STATE, times)
        mode_pops[:, m] = pops
        finals.append(state)
    p_gs = np.prod(mode_pops, axis=1)
    g_values = np.array([s.g(t) for t in times])
    return TrajectoryTrace(times, g_values, p_gs, mode_pops, finals)


def lz_mode_evolve(k: float, tau_q: float, g_range: tuple[float, float],
                   cfg: IntegratorConfig = IntegratorConfig(),
                   initial: tuple[complex, complex] = (0.0 + 0.0j, 1.0 + 0.0j)) -> ModeState:
    """Integrate the Landau-Zener frame equation for one mode (J = 1).

    The sweep runs downward from g_hi to g_lo at rate 1/tau_q, rescaled to
    t' = 4 tau_q sin(k) (cos k - g) with tau_q' = 4 tau_q sin^2(k).  The
    initial amplitudes are (v, u) in the Landau-Zener frame; the default
    (0, 1) is the asymptotic diabatic ground state.  Returned as
    ModeState(alpha=u, beta=v): after a full sweep across the crossing,
    |u|^2 is the excitation probability.
    """
    if tau_q <= 0:
        raise ValueError("tau_q must be positive")
    sk = math.sin(k)
    if sk == 0:
        raise ValueError("sin k must be nonzero")
    g_lo, g_hi = g_range
    if g_lo >= g_hi:
        raise ValueError("need g_lo < g_hi")
    taup = 4.0 * tau_q * sk * sk
    tp0 = 4.0 * tau_q * sk * (math.cos(k) - g_hi)
    tp1 = 4.0 * tau_q * sk * (math.cos(k) - g_lo)
    span = tp1 - tp0
    if cfg.max_step is not None:
        max_step = cfg.max_step
    else:
        e_max = 0.5 * math.sqrt((max(abs(tp0), abs(tp1)) / taup) ** 2 + 1.0)
        max_step = min(span / 1000.0, 0.05 / (2.0 * e_max))
    v0, u0 = complex(initial[0]), complex(initial[1])
    v, u, status = _kernels.evolve_lz(v0, u0, tp0, tp1, taup,
                                      cfg.rel_tol, cfg.abs_tol, max_step,
                                      1e-14 * span)
    if status != _kernels.STATUS_OK:
        raise IntegrationError(f"step size underflow in LZ sweep (k={k:.4f})")
    return ModeState(alpha=u, beta=v)


def diabatic_to_adiabatic(v: complex, u: complex, k: float, g: float) -> ModeState:
    """Rotate Landau-Zener frame amplitudes into the instantaneous eigenbasis
    at parameter g (J = 1 convention, matching `lz_mode_evolve`).

    The relative sign between the rows is fixed so that a state mapped at the
    start of a sweep and evolved by `evolve_mode` stays population-consistent
    with the Landau-Zener frame evolution throughout.
    """
    phi = math.atan2(-math.sin(k), g - math.cos(k))
    c, s = math.cos(0.5 * phi), math.sin(0.5 * phi)
    alpha = c * v + s * u
    beta = s * v - c * u
    return ModeState(alpha, beta)


def adiabatic_to_diabatic(state: ModeState, k: float, g: float) -> tuple[complex, complex]:
    """Inverse of `diabatic_to_adiabatic`: eigenbasis amplitudes to the
    Landau-Zener frame pair (v, u).  The rotation is its own inverse."""
    phi = math.atan2(-math.sin(k), g - math.cos(k))
    c, s = math.cos(0.5 * phi), math.sin(0.5 * phi)
    v = c * state.alpha + s * state.beta
    u = s * state.alpha - c * state.beta
    return v, u
