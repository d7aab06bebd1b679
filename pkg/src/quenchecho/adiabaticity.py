"""Decision procedures built on the echo test: threshold verdicts, tau_Q
sweeps, minimal adiabatic tau_Q search, and M-segment protocol synthesis."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import IntegratorConfig, evolve_chain
from .observables import ObservableSet, observable_set
from .schedules import Schedule, concat, hold, linear, reverse
from .tfim import Chain, gap, gap_minimum, wave_vectors

__all__ = [
    "EchoReport",
    "SweepTable",
    "NoBracketError",
    "echo_test",
    "sweep_tau",
    "min_adiabatic_tau",
    "segmented_protocol",
    "classify_regime",
]

DEFAULT_ECHO_THRESHOLD = 0.999
DEFAULT_SEARCH_THRESHOLD = 0.9


class NoBracketError(RuntimeError):
    """The sustained-threshold condition was never met within the search range."""


@dataclass(frozen=True)
class EchoReport:
    fidelity: float
    threshold: float
    verdict: str  # "adiabatic" | "not-adiabatic"
    regime_hint: str  # "adiabatic" | "intermediate" | "impulse" | "unknown"
    observables: ObservableSet
    delay_used: float


@dataclass(frozen=True)
class SweepTable:
    """Rows of (tau_q, fidelity, magnetization, kink_density, residual_energy)."""

    tau_q: np.ndarray
    fidelity: np.ndarray
    magnetization: np.ndarray
    kink_density: np.ndarray
    residual_energy: np.ndarray

    def rows(self):
        return list(zip(self.tau_q, self.fidelity, self.magnetization,
                        self.kink_density, self.residual_energy))


def _echo_protocol(forward: Schedule, delay: float) -> Schedule:
    back = reverse(forward)
    if delay > 0:
        return concat(concat(forward, hold(forward.g_end, delay)), back)
    return concat(forward, back)


def echo_test(chain: Chain, forward: Schedule, delay: float = 0.0,
              threshold: float = DEFAULT_ECHO_THRESHOLD,
              cfg: IntegratorConfig = IntegratorConfig()) -> EchoReport:
    """Run forward + hold(delay) + reversed-forward and report the final-state
    fidelity against the initial ground state.

    A nonzero delay scrambles the mode phases at the turnaround, which
    suppresses the impulse-regime false positive.
    """
    if not (0.0 < threshold <= 1.0):
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    if delay < 0:
        raise ValueError("delay must be >= 0")
    trace = evolve_chain(chain, _echo_protocol(forward, delay), cfg)
    fid = float(trace.p_gs[-1])
    if forward.meta.get("kind") == "linear":
        hint = classify_regime(chain, forward.meta["tau_q"],
                               forward.meta["g_start"], forward.meta["g_end"])
    else:
        hint = "unknown"
    obs = observable_set(trace.final_states, wave_vectors(chain),
                         chain.n_sites, trace.g_values[-1], chain.coupling_j)
    verdict = "adiabatic" if fid >= threshold else "not-adiabatic"
    return EchoReport(fidelity=fid, threshold=threshold, verdict=verdict,
                      regime_hint=hint, observables=obs, delay_used=delay)


def sweep_tau(chain: Chain, tau_grid, delay: float, g0: float, gT: float,
              cfg: IntegratorConfig = IntegratorConfig()) -> SweepTable:
    """One echo test per grid point; rows carry all distance gauges."""
    tau_grid = np.asarray(tau_grid, dtype=float)
    if tau_grid.size == 0 or np.any(tau_grid <= 0):
        raise ValueError("tau grid must be nonempty and positive")
    if np.any(np.diff(tau_grid) <= 0):
        raise ValueError("tau grid must be strictly increasing")
    fid = np.empty_like(tau_grid)
    mag = np.empty_like(tau_grid)
    kink = np.empty_like(tau_grid)
    res = np.empty_like(tau_grid)
    for i, tq in enumerate(tau_grid):
        rep = echo_test(chain, linear(g0, gT, float(tq)), delay=delay, cfg=cfg)
        fid[i] = rep.fidelity
        mag[i] = rep.observables.magnetization
        kink[i] = rep.observables.kink_density
        res[i] = rep.observables.residual_energy
    return SweepTable(tau_grid, fid, mag, kink, res)


def min_adiabatic_tau(chain: Chain, g0: float, gT: float,
                      threshold: float = DEFAULT_SEARCH_THRESHOLD,
                      delay: float = 0.0,
                      cfg: IntegratorConfig = IntegratorConfig(),
                      tau_min: float = 1e-2, tau_max: float = 1e4,
                      grid_ratio: float = 1.1, window: int = 5) -> float:
    """Smallest tau_Q whose echo fidelity sustainably clears the threshold.

    The fidelity oscillates with tau_Q, so a pointwise crossing is ill-posed;
    a candidate must clear the threshold at `window` consecutive ratio-spaced
    points above it.  The first sustained grid point is refined by bisection
    in log tau_Q to 1% relative width.
    """
    if not (0.0 < threshold < 1.0):
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    cache: dict[float, float] = {}

    def fid(tau: float) -> float:
        if tau not in cache:
            cache[tau] = echo_test(chain, linear(g0, gT, tau), delay=delay,
                                   cfg=cfg).fidelity
        return cache[tau]

    def sustained(tau: float) -> bool:
        return all(fid(tau * grid_ratio ** m) >= threshold
                   for m in range(window + 1))

    n_grid = int(math.ceil(math.log(tau_max / tau_min) / math.log(grid_ratio)))
    grid = [tau_min * grid_ratio ** i for i in range(n_grid + 1)]
    first = None
    for i, tau in enumerate(grid):
        if sustained(tau):
            first = i
            break
    if first is None:
        raise NoBracketError(
            f"fidelity never sustained >= {threshold} for tau_Q in "
            f"[{tau_min}, {tau_max}]")
    if first == 0:
        return grid[0]
    lo, hi = grid[first - 1], grid[first]
    while hi / lo > 1.01:
        mid = math.sqrt(lo * hi)
        if sustained(mid):
            hi = mid
        else:
            lo = mid
    return hi


def segmented_protocol(chain: Chain, g0: float, gT: float, M: int,
                       threshold: float = DEFAULT_SEARCH_THRESHOLD,
                       delay: float = 0.0,
                       cfg: IntegratorConfig = IntegratorConfig(),
                       **search_kwargs):
    """Split [gT, g0] into M equal parts, find the minimal adiabatic rate for
    each by a separate echo search, and concatenate the resulting linear
    pieces.  Returns (forward_schedule, per_segment_rates)."""
    if M < 1:
        raise ValueError("M must be >= 1")
    edges = np.linspace(g0, gT, M + 1)
    rates = []
    parts = None
    for i in range(M):
        rate = min_adiabatic_tau(chain, float(edges[i]), float(edges[i + 1]),
                                 threshold=threshold, delay=delay, cfg=cfg,
                                 **search_kwargs)
        rates.append(rate)
        piece = linear(float(edges[i]), float(edges[i + 1]), rate)
        parts = piece if parts is None else concat(parts, piece)
    return parts, rates


def classify_regime(chain: Chain, tau_q: float, g0: float, gT: float,
                    impulse_factor: float = 1.0,
                    adiabatic_factor: float = 2.0) -> str:
    """Heuristic regime label (advisory, constants configurable).

    impulse:   total sweep time below impulse_factor / Delta_max;
    adiabatic: tau_q at least adiabatic_factor / Delta_min^2 (Landau-Zener
               criterion at the minimal gap);
    otherwise intermediate.
    """
    if tau_q <= 0:
        raise ValueError("tau_q must be positive")
    span = abs(g0 - gT)
    if span == 0:
        return "adiabatic"
    d_max = max(gap(chain, g0), gap(chain, gT))
    g_star, d_min = gap_minimum(chain)
    if not (min(g0, gT) < g_star < max(g0, gT)):
        d_min = min(gap(chain, g0), gap(chain, gT))
    tau_impulse = impulse_factor / (d_max * span)
    tau_adiabatic = adiabatic_factor / (d_min * d_min)
    tau_impulse = min(tau_impulse, tau_adiabatic)
    if tau_q < tau_impulse:
        return "impulse"
    if tau_q >= tau_adiabatic:
        return "adiabatic"
    return "intermediate"
