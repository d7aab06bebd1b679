"""Command-line interface.

Subcommands: simulate, sweep, schedule-gen, compare-analytic, min-tau,
echo-test.  Options can come from a flat key=value config file (--config);
command-line flags override file values.  Every file-writing run leaves a
`<output>.meta` JSON sidecar with the fully resolved configuration.

Exit codes: 0 success, 2 configuration error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .adiabaticity import (
    DEFAULT_ECHO_THRESHOLD,
    DEFAULT_SEARCH_THRESHOLD,
    NoBracketError,
    echo_test,
    min_adiabatic_tau,
    segmented_protocol,
    sweep_tau,
)
from .analytic import fidelity_intermediate
from .dynamics import IntegrationError, IntegratorConfig, evolve_chain
from .schedules import (
    Schedule,
    concat,
    hold,
    kzm_schedule,
    linear,
    load_table,
    rc_schedule,
    reverse,
    save_table,
)
from .tfim import Chain


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    n: int = 50
    j: float = 1.0
    g0: float = 10.0
    gt: float = 0.0
    tau_q: float = 1.0
    delay: float = 0.0
    schedule: str = "linear"  # linear | kzm | rc | path to a table file
    gamma: float = 10.0
    gamma_prime: float | None = None  # default (2/pi) * gamma
    threshold: float | None = None
    segments: int = 1
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    sample_count: int = 1000
    tau_min: float = 0.01
    tau_max: float = 100.0
    tau_points: int = 20
    tau_log: bool = True
    out: str | None = None


_FIELD_TYPES = {
    "n": int, "j": float, "g0": float, "gt": float, "tau_q": float,
    "delay": float, "schedule": str, "gamma": float, "gamma_prime": float,
    "threshold": float, "segments": int, "rel_tol": float, "abs_tol": float,
    "sample_count": int, "tau_min": float, "tau_max": float,
    "tau_points": int, "tau_log": bool, "out": str,
}


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def load_config_file(path) -> dict:
    """Parse a flat key=value config file; '#' starts a comment."""
    values = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        typ = _FIELD_TYPES[key]
        try:
            values[key] = _parse_bool(val) if typ is bool else typ(val)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {val!r}") from exc
    return values


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, config file, and command-line flags (flags win)."""
    cfg = RunConfig()
    if getattr(args, "config", None):
        for key, val in load_config_file(args.config).items():
            setattr(cfg, key, val)
    for key in _FIELD_TYPES:
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, val)
    if cfg.n < 2 or cfg.n % 2:
        raise ConfigError(f"n must be an even integer >= 2, got {cfg.n}")
    if cfg.j <= 0:
        raise ConfigError(f"j must be positive, got {cfg.j}")
    if cfg.tau_q <= 0:
        raise ConfigError(f"tau_q must be positive, got {cfg.tau_q}")
    if cfg.delay < 0:
        raise ConfigError(f"delay must be >= 0, got {cfg.delay}")
    if cfg.segments < 1:
        raise ConfigError(f"segments must be >= 1, got {cfg.segments}")
    if cfg.gamma_prime is None:
        cfg.gamma_prime = 2.0 * cfg.gamma / math.pi
    return cfg


def _integrator(cfg: RunConfig) -> IntegratorConfig:
    return IntegratorConfig(rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol,
                            sample_count=cfg.sample_count)


def _forward_schedule(cfg: RunConfig, chain: Chain) -> Schedule:
    kind = cfg.schedule
    if kind == "linear":
        return linear(cfg.g0, cfg.gt, cfg.tau_q)
    if kind in ("kzm", "rc"):
        g_lo, g_hi = sorted((cfg.g0, cfg.gt))
        if kind == "kzm":
            return kzm_schedule(chain, cfg.gamma, g_lo, g_hi)
        return rc_schedule(chain, cfg.gamma_prime, g_lo, g_hi)
    try:
        return load_table(kind)
    except OSError as exc:
        raise ConfigError(
            f"schedule must be linear, kzm, rc, or a readable table file; "
            f"got {kind!r} ({exc})") from exc


def _echo_schedule(forward: Schedule, delay: float) -> Schedule:
    s = forward
    if delay > 0:
        s = concat(s, hold(forward.g_end, delay))
    return concat(s, reverse(forward))


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _write_rows(path, header: str, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) if isinstance(x, (int, float, np.floating))
                              else str(x) for x in row) + "\n")


def _write_meta(out_path, command: str, cfg: RunConfig) -> None:
    meta = {"command": command, "config": asdict(cfg), "version": __version__}
    with open(str(out_path) + ".meta", "w", newline="\n") as fh:
        fh.write(json.dumps(meta, sort_keys=True, indent=2) + "\n")


def _require_out(cfg: RunConfig) -> str:
    if not cfg.out:
        raise ConfigError("this command requires --out")
    return cfg.out


def cmd_simulate(cfg: RunConfig) -> int:
    chain = Chain(cfg.n, cfg.j)
    out = _require_out(cfg)
    forward = _forward_schedule(cfg, chain)
    trace = evolve_chain(chain, _echo_schedule(forward, cfg.delay), _integrator(cfg))
    n_modes = trace.mode_populations.shape[1]
    header = "t,g,p_gs," + ",".join(f"pop_k{i}" for i in range(n_modes))
    rows = [(trace.times[i], trace.g_values[i], trace.p_gs[i],
             *trace.mode_populations[i]) for i in range(len(trace.times))]
    _write_rows(out, header, rows)
    _write_meta(out, "simulate", cfg)
    print(f"simulate: {len(rows)} samples, final p_gs = {trace.p_gs[-1]:.6f}")
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    chain = Chain(cfg.n, cfg.j)
    out = _require_out(cfg)
    if cfg.tau_points < 1 or cfg.tau_min <= 0 or cfg.tau_max < cfg.tau_min:
        raise ConfigError("need 0 < tau_min <= tau_max and tau_points >= 1")
    if cfg.tau_points == 1:
        grid = np.array([cfg.tau_min])
    elif cfg.tau_log:
        grid = np.geomspace(cfg.tau_min, cfg.tau_max, cfg.tau_points)
    else:
        grid = np.linspace(cfg.tau_min, cfg.tau_max, cfg.tau_points)
    table = sweep_tau(chain, grid, cfg.delay, cfg.g0, cfg.gt, _integrator(cfg))
    _write_rows(out, "tau_q,fidelity,magnetization,kink_density,residual_energy",
                table.rows())
    _write_meta(out, "sweep", cfg)
    print(f"sweep: {len(grid)} points written to {out}")
    return 0


def cmd_schedule_gen(cfg: RunConfig) -> int:
    chain = Chain(cfg.n, cfg.j)
    out = _require_out(cfg)
    if cfg.schedule not in ("kzm", "rc"):
        raise ConfigError(f"schedule-gen requires --schedule kzm or rc, got {cfg.schedule!r}")
    s = _forward_schedule(cfg, chain)
    save_table(s, out, n_samples=cfg.sample_count)
    _write_meta(out, "schedule-gen", cfg)
    print(f"schedule-gen: {cfg.schedule} table written to {out} "
          f"(duration {s.total_duration:.6g})")
    return 0


def _compare_validity(cfg: RunConfig, tau: float) -> int:
    # The two-path closed form assumes each crossing mode completes its
    # Landau-Zener passage before the turnaround; the slowest crossing mode
    # k = pi/N sets the bound.
    d = math.cos(math.pi / cfg.n) - cfg.gt
    return 1 if 4.0 * tau * d * d >= 10.0 else 0


def cmd_compare_analytic(cfg: RunConfig) -> int:
    chain = Chain(cfg.n, cfg.j)
    out = _require_out(cfg)
    if abs(cfg.gt) >= 1.0:
        raise ConfigError(f"compare-analytic requires |gt| < 1, got {cfg.gt}")
    if cfg.tau_points < 1 or cfg.tau_min <= 0 or cfg.tau_max < cfg.tau_min:
        raise ConfigError("need 0 < tau_min <= tau_max and tau_points >= 1")
    if cfg.tau_points == 1:
        grid = np.array([cfg.tau_min])
    elif cfg.tau_log:
        grid = np.geomspace(cfg.tau_min, cfg.tau_max, cfg.tau_points)
    else:
        grid = np.linspace(cfg.tau_min, cfg.tau_max, cfg.tau_points)
    rows = []
    for tau in grid:
        fn = echo_test(chain, linear(cfg.g0, cfg.gt, float(tau)),
                       delay=cfg.delay, cfg=_integrator(cfg)).fidelity
        fa = fidelity_intermediate(chain, float(tau), cfg.gt)
        rows.append((float(tau), fn, fa, abs(fn - fa),
                     _compare_validity(cfg, float(tau))))
    _write_rows(out, "tau_q,f_numeric,f_analytic,abs_diff,valid", rows)
    _write_meta(out, "compare-analytic", cfg)
    diffs = np.array([r[3] for r in rows if r[4]])
    if diffs.size:
        print(f"compare-analytic: RMS |diff| = {math.sqrt(np.mean(diffs ** 2)):.4f} "
              f"over {diffs.size} in-validity points")
    else:
        print("compare-analytic: no points inside the validity range")
    return 0


def cmd_min_tau(cfg: RunConfig) -> int:
    chain = Chain(cfg.n, cfg.j)
    threshold = cfg.threshold if cfg.threshold is not None else DEFAULT_SEARCH_THRESHOLD
    icfg = _integrator(cfg)
    kwargs = dict(threshold=threshold, delay=cfg.delay, cfg=icfg,
                  tau_min=cfg.tau_min, tau_max=cfg.tau_max)
    rows = []
    if cfg.segments == 1:
        tau_c = min_adiabatic_tau(chain, cfg.g0, cfg.gt, **kwargs)
        duration = abs(cfg.g0 - cfg.gt) * tau_c
        rows.append((0, cfg.g0, cfg.gt, tau_c, duration))
        print(f"min-tau: tau_c = {tau_c:.6g}, sweep duration = {duration:.6g}")
    else:
        plain = min_adiabatic_tau(chain, cfg.g0, cfg.gt, **kwargs)
        plain_duration = abs(cfg.g0 - cfg.gt) * plain
        sched, rates = segmented_protocol(chain, cfg.g0, cfg.gt, cfg.segments,
                                          **kwargs)
        edges = np.linspace(cfg.g0, cfg.gt, cfg.segments + 1)
        for i, rate in enumerate(rates):
            dur = abs(edges[i + 1] - edges[i]) * rate
            rows.append((i, float(edges[i]), float(edges[i + 1]), rate, dur))
        print(f"min-tau: M=1 tau_c = {plain:.6g} (duration {plain_duration:.6g}); "
              f"M={cfg.segments} total duration {sched.total_duration:.6g}")
    if cfg.out:
        _write_rows(cfg.out, "segment,g_start,g_end,tau_c,duration", rows)
        _write_meta(cfg.out, "min-tau", cfg)
    return 0


def cmd_echo_test(cfg: RunConfig) -> int:
    chain = Chain(cfg.n, cfg.j)
    threshold = cfg.threshold if cfg.threshold is not None else DEFAULT_ECHO_THRESHOLD
    forward = _forward_schedule(cfg, chain)
    report = echo_test(chain, forward, delay=cfg.delay, threshold=threshold,
                       cfg=_integrator(cfg))
    obs = report.observables
    print(f"echo-test: fidelity = {report.fidelity:.6f} "
          f"(threshold {report.threshold}) -> {report.verdict} "
          f"[regime hint: {report.regime_hint}]")
    if cfg.out:
        _write_rows(
            cfg.out,
            "fidelity,threshold,verdict,regime_hint,delay,"
            "magnetization,kink_density,residual_energy",
            [(report.fidelity, report.threshold, report.verdict,
              report.regime_hint, report.delay_used, obs.magnetization,
              obs.kink_density, obs.residual_energy)])
        _write_meta(cfg.out, "echo-test", cfg)
    return 0


_COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "schedule-gen": cmd_schedule_gen,
    "compare-analytic": cmd_compare_analytic,
    "min-tau": cmd_min_tau,
    "echo-test": cmd_echo_test,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quenchecho",
        description="Quench-echo adiabaticity tests for the transverse-field "
                    "Ising chain.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=str, default=None,
                       help="flat key=value config file; flags override")
        p.add_argument("--n", type=int, default=None, help="number of spins (even)")
        p.add_argument("--j", type=float, default=None, help="coupling energy J")
        p.add_argument("--g0", type=float, default=None, help="start field")
        p.add_argument("--gt", type=float, default=None, help="turnaround field")
        p.add_argument("--tau-q", dest="tau_q", type=float, default=None,
                       help="quench time scale")
        p.add_argument("--delay", type=float, default=None,
                       help="free-evolution hold at the turnaround")
        p.add_argument("--schedule", type=str, default=None,
                       help="linear, kzm, rc, or a schedule table file")
        p.add_argument("--gamma", type=float, default=None,
                       help="gap-tracking ratio for the kzm schedule")
        p.add_argument("--gamma-prime", dest="gamma_prime", type=float,
                       default=None, help="ratio for the rc schedule "
                       "(default 2*gamma/pi)")
        p.add_argument("--threshold", type=float, default=None)
        p.add_argument("--segments", type=int, default=None,
                       help="number of equal field sub-intervals for min-tau")
        p.add_argument("--rel-tol", dest="rel_tol", type=float, default=None)
        p.add_argument("--abs-tol", dest="abs_tol", type=float, default=None)
        p.add_argument("--sample-count", dest="sample_count", type=int, default=None)
        p.add_argument("--tau-min", dest="tau_min", type=float, default=None)
        p.add_argument("--tau-max", dest="tau_max", type=float, default=None)
        p.add_argument("--tau-points", dest="tau_points", type=int, default=None)
        p.add_argument("--tau-log", dest="tau_log", action="store_const",
                       const=True, default=None, help="log-spaced tau grid")
        p.add_argument("--tau-linear", dest="tau_log", action="store_const",
                       const=False, help="linearly spaced tau grid")
        p.add_argument("--out", type=str, default=None, help="output CSV path")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return _COMMANDS[args.command](cfg)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (IntegrationError, NoBracketError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
