"""Control trajectories g(t): construction, composition, evaluation, I/O.

A Schedule is an ordered list of contiguous segments starting at t = 0.
Constructors emit increasing- or decreasing-g schedules as stated; `reverse`
is the single source of time-reflection, and `echo` is forward + reverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .tfim import Chain, gap, gap_minimum

__all__ = [
    "Segment",
    "Schedule",
    "linear",
    "hold",
    "echo",
    "reverse",
    "concat",
    "kzm_schedule",
    "rc_schedule",
    "save_table",
    "load_table",
]

_KIND_CODES = {
    "linear": _kernels.KIND_LINEAR,
    "hold": _kernels.KIND_HOLD,
    "kzm_left": _kernels.KIND_KZM_LEFT,
    "kzm_right": _kernels.KIND_KZM_RIGHT,
    "rc": _kernels.KIND_RC,
}

_JOIN_TOL = 1e-12


@dataclass(frozen=True)
class Segment:
    """One piece of a schedule.  `params` layout depends on `kind`:

    linear:     (g_start, slope)
    hold:       (g,)
    kzm_left:   (cos_pin, sin_pin, gamma, j, t_offset, a)   with a = gamma / (2 J sin(pi/N))
    kzm_right:  same layout as kzm_left
    rc:         (cos_pin, sin_pin, rate, t_offset)          with rate = 4 J^2 sin(pi/N) / gamma'
    """

    kind: str
    duration: float
    params: tuple
    reversed: bool = False

    def __post_init__(self):
        if self.kind not in _KIND_CODES:
            raise ValueError(f"unknown segment kind {self.kind!r}")
        if self.kind == "hold":
            if self.duration < 0:
                raise ValueError("hold duration must be >= 0")
        elif self.duration <= 0:
            raise ValueError(f"{self.kind} segment duration must be positive")

    def eval(self, u: float) -> tuple[float, float]:
        """(g, gdot) at local time u in [0, duration]."""
        p = np.zeros(6)
        p[: len(self.params)] = self.params
        return _kernels.seg_eval(_KIND_CODES[self.kind], p, int(self.reversed),
                                 self.duration, float(u))


class Schedule:
    """Immutable piecewise control trajectory g(t) on [0, total_duration]."""

    def __init__(self, segments, meta=None):
        segments = list(segments)
        if not segments:
            raise ValueError("schedule must contain at least one segment")
        ends = np.cumsum([s.duration for s in segments])
        # g must be continuous across joins
        for i in range(len(segments) - 1):
            g_end = segments[i].eval(segments[i].duration)[0]
            g_next = segments[i + 1].eval(0.0)[0]
            if abs(g_end - g_next) > _JOIN_TOL:
                raise ValueError(
                    f"discontinuous join between segments {i} and {i + 1}: "
                    f"{g_end!r} vs {g_next!r}")
        self.segments = tuple(segments)
        self._ends = ends
        self.total_duration = float(ends[-1])
        self.meta = dict(meta or {})

    def eval(self, t: float) -> tuple[float, float]:
        """(g, gdot) at time t; right-limit derivative at breakpoints."""
        if t < -_JOIN_TOL or t > self.total_duration + _JOIN_TOL:
            raise ValueError(f"t={t} outside [0, {self.total_duration}]")
        t = min(max(t, 0.0), self.total_duration)
        i = int(np.searchsorted(self._ends, t, side="right"))
        if i >= len(self.segments):
            i = len(self.segments) - 1
        t0 = self._ends[i - 1] if i > 0 else 0.0
        return self.segments[i].eval(t - t0)

    def g(self, t: float) -> float:
        return self.eval(t)[0]

    @property
    def breakpoints(self) -> np.ndarray:
        """All segment boundaries, including t = 0 and t = total_duration."""
        return np.concatenate(([0.0], self._ends))

    @property
    def g_start(self) -> float:
        return self.segments[0].eval(0.0)[0]

    @property
    def g_end(self) -> float:
        return self.segments[-1].eval(self.segments[-1].duration)[0]

    def g_range(self) -> tuple[float, float]:
        """Min/max of g over the schedule (segments are monotone in g)."""
        vals = [self.g(t) for t in self.breakpoints]
        return min(vals), max(vals)

    def packed(self):
        """Arrays (kinds, durations, params, reversed) for the kernels."""
        n = len(self.segments)
        kinds = np.empty(n, dtype=np.int64)
        durs = np.empty(n)
        params = np.zeros((n, 6))
        revs = np.zeros(n, dtype=np.int64)
        for i, s in enumerate(self.segments):
            kinds[i] = _KIND_CODES[s.kind]
            durs[i] = s.duration
            params[i, : len(s.params)] = s.params
            revs[i] = int(s.reversed)
        return kinds, durs, params, revs


def linear(g_start: float, g_end: float, tau_q: float) -> Schedule:
    """Linear quench from g_start to g_end at rate |gdot| = 1/tau_q."""
    if tau_q <= 0:
        raise ValueError(f"tau_q must be positive, got {tau_q}")
    if g_start == g_end:
        raise ValueError("linear quench requires g_start != g_end")
    duration = abs(g_start - g_end) * tau_q
    slope = math.copysign(1.0 / tau_q, g_end - g_start)
    seg = Segment("linear", duration, (g_start, slope))
    return Schedule([seg], meta={"kind": "linear", "tau_q": tau_q,
                                 "g_start": g_start, "g_end": g_end})


def hold(g: float, delta_t: float) -> Schedule:
    """Constant segment at g for time delta_t (>= 0)."""
    if delta_t < 0:
        raise ValueError(f"hold duration must be >= 0, got {delta_t}")
    return Schedule([Segment("hold", delta_t, (g,))],
                    meta={"kind": "hold", "g": g, "delta_t": delta_t})


def reverse(s: Schedule) -> Schedule:
    """Time reflection: reverse(s).g(t) = s.g(T - t)."""
    segs = [replace(seg, reversed=not seg.reversed) for seg in reversed(s.segments)]
    return Schedule(segs, meta={"kind": "reverse", "of": s.meta.get("kind")})


def echo(s: Schedule) -> Schedule:
    """Forward schedule followed by its time-reversed copy (duration 2T)."""
    rev = reverse(s)
    return Schedule(list(s.segments) + list(rev.segments),
                    meta={"kind": "echo", "of": s.meta.get("kind"),
                          "forward_duration": s.total_duration})


def concat(a: Schedule, b: Schedule) -> Schedule:
    """Join two schedules in time; g must be continuous at the seam."""
    if abs(a.g_end - b.g_start) > _JOIN_TOL:
        raise ValueError(
            f"discontinuous join: a ends at g={a.g_end}, b starts at g={b.g_start}")
    return Schedule(list(a.segments) + list(b.segments),
                    meta={"kind": "concat"})


def kzm_schedule(chain: Chain, gamma: float, g_lo: float, g_hi: float) -> Schedule:
    """Uniformly adiabatic schedule from the gap-ratio criterion.

    Two monotone-increasing branches joined where g = cos(pi/N); along the
    trajectory |Delta/Delta_dot| * Delta = gamma, so the gap profile is
    Delta(t) = 1 / (1/Delta_min - |t - t_join|/gamma).  The full (unclamped)
    trajectory spans g in (-inf, +inf) over time gamma / (J sin(pi/N)); the
    returned schedule is clamped to [g_lo, g_hi] by solving for the clamp
    times in closed form.
    """
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    c0, d_min = gap_minimum(chain)
    if not (g_lo < c0 < g_hi):
        raise ValueError(
            f"need g_lo < cos(pi/N)={c0:.6f} < g_hi, got g_lo={g_lo}, g_hi={g_hi}")
    j = chain.coupling_j
    s = math.sin(math.pi / chain.n_sites)
    a = gamma / (2.0 * j * s)  # = gamma / Delta_min, half the unclamped duration
    t_lo = gamma / gap(chain, g_lo) - a  # in (-a, 0)
    t_hi = a - gamma / gap(chain, g_hi)  # in (0, a)
    left = Segment("kzm_left", -t_lo, (c0, s, gamma, j, t_lo, a))
    right = Segment("kzm_right", t_hi, (c0, s, gamma, j, 0.0, a))
    return Schedule([left, right], meta={
        "kind": "kzm", "gamma": gamma, "g_lo": g_lo, "g_hi": g_hi,
        "n_sites": chain.n_sites, "coupling_j": j,
        "unclamped_duration": gamma / (j * s),
        "delta_min": d_min,
        "t_join": -t_lo,
    })


def rc_schedule(chain: Chain, gamma_prime: float, g_lo: float, g_hi: float) -> Schedule:
    """Uniformly adiabatic schedule from the local adiabatic criterion
    |d|g - g_c|/dt| = Delta^2(g) / gamma'.

    Closed form g(t) = cos(pi/N) + sin(pi/N) tan(4 J^2 sin(pi/N) t / gamma'),
    which reduces to the rate 2 J sin(pi/N)/gamma' at J = 1/2.  The nominal
    unclamped duration is gamma' N / (4 J^2) (= gamma' N / (2J) at J = 1/2);
    the returned schedule is clamped to [g_lo, g_hi] by inverting the tangent.
    """
    if gamma_prime <= 0:
        raise ValueError(f"gamma_prime must be positive, got {gamma_prime}")
    c0, d_min = gap_minimum(chain)
    if not (g_lo < c0 < g_hi):
        raise ValueError(
            f"need g_lo < cos(pi/N)={c0:.6f} < g_hi, got g_lo={g_lo}, g_hi={g_hi}")
    j = chain.coupling_j
    s = math.sin(math.pi / chain.n_sites)
    b = 4.0 * j * j * s / gamma_prime
    t_lo = math.atan((g_lo - c0) / s) / b  # negative
    t_hi = math.atan((g_hi - c0) / s) / b
    seg = Segment("rc", t_hi - t_lo, (c0, s, b, t_lo))
    return Schedule([seg], meta={
        "kind": "rc", "gamma_prime": gamma_prime, "g_lo": g_lo, "g_hi": g_hi,
        "n_sites": chain.n_sites, "coupling_j": j,
        "unclamped_duration": gamma_prime * chain.n_sites / (4.0 * j * j),
        "delta_min": d_min,
        "t_mid": -t_lo,
    })


def save_table(s: Schedule, path, n_samples: int = 1000) -> None:
    """Write a (t, g) sample table with a typed header line."""
    items = " ".join(f"{k}={v}" for k, v in sorted(s.meta.items()))
    ts = np.linspace(0.0, s.total_duration, n_samples)
    ts = np.unique(np.concatenate([ts, s.breakpoints]))
    with open(path, "w", newline="\n") as fh:
        fh.write(f"# quenchecho-schedule {items}\n")
        fh.write("t,g\n")
        for t in ts:
            fh.write(f"{t:.17g},{s.g(t):.17g}\n")


def load_table(path) -> Schedule:
    """Rebuild a schedule from a (t, g) table as piecewise linear/hold parts."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    data = [ln for ln in lines if not ln.startswith("#") and not ln.startswith("t")]
    rows = np.array([[float(x) for x in (ln.split(",") if "," in ln else ln.split())]
                     for ln in data])
    if rows.ndim != 2 or rows.shape[1] != 2 or rows.shape[0] < 2:
        raise ValueError(f"malformed schedule table {path}")
    segs = []
    for i in range(len(rows) - 1):
        dt = rows[i + 1, 0] - rows[i, 0]
        dg = rows[i + 1, 1] - rows[i, 1]
        if dt <= 0:
            raise ValueError("table times must be strictly increasing")
        if dg == 0:
            segs.append(Segment("hold", dt, (rows[i, 1],)))
        else:
            segs.append(Segment("linear", dt, (rows[i, 1], dg / dt)))
    return Schedule(segs, meta={"kind": "file", "path": str(path)})
