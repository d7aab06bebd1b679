"""Panel renderers.  Each takes input CSV path(s) and an output image path.

No numeric transformation of the data beyond axis scaling; splitting a trace
into its forward and return halves uses only the time column's midpoint.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .io import read_table  # noqa: E402


def _save(fig, out: str) -> None:
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)


def render_trace(inp: str, out: str) -> None:
    """Ground-state probability along the field axis: forward sweep as a red
    solid line, the echo's return as a green dashed line."""
    df = read_table(inp, ("t", "g", "p_gs"))
    t_mid = 0.5 * (df["t"].iloc[0] + df["t"].iloc[-1])
    fwd = df[df["t"] <= t_mid]
    back = df[df["t"] >= t_mid]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(fwd["g"], fwd["p_gs"], "r-", label="forward quench")
    ax.plot(back["g"], back["p_gs"], "g--", label="quench echo")
    ax.set_xlabel("g")
    ax.set_ylabel(r"$P_{\mathrm{GS}}$")
    ax.set_ylim(-0.02, 1.02)
    ax.legend()
    _save(fig, out)


def render_sweep(inp: str, out: str) -> None:
    """Echo fidelity against the quench timescale, log-x."""
    df = read_table(inp, ("tau_q", "fidelity"))
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.semilogx(df["tau_q"], df["fidelity"], "o-", color="tab:blue")
    ax.set_xlabel(r"$\tau_Q$")
    ax.set_ylabel("fidelity")
    ax.set_ylim(-0.02, 1.02)
    _save(fig, out)


def render_compare(inp: str, out: str) -> None:
    """Numeric (black dashed) vs analytic (red solid) fidelity, log-x.
    Points flagged out-of-validity are marked with open circles."""
    df = read_table(inp, ("tau_q", "f_numeric", "f_analytic", "valid"))
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.semilogx(df["tau_q"], df["f_analytic"], "r-", label="analytic")
    ax.semilogx(df["tau_q"], df["f_numeric"], "k--", label="numerical")
    invalid = df[df["valid"] == 0]
    if len(invalid):
        ax.semilogx(invalid["tau_q"], invalid["f_numeric"], "o",
                    mfc="none", mec="grey", label="outside validity")
    ax.set_xlabel(r"$\tau_Q$")
    ax.set_ylabel("fidelity")
    ax.legend()
    _save(fig, out)


def render_protocols(inputs: list[str], out: str) -> None:
    """Instantaneous ground-state probability versus time for one trace per
    input CSV, overlaid (schedule-comparison panel)."""
    if not inputs:
        raise ValueError("need at least one input CSV")
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for path in inputs:
        df = read_table(path, ("t", "p_gs"))
        ax.plot(df["t"], df["p_gs"], label=Path(path).stem)
    ax.set_xlabel("t")
    ax.set_ylabel(r"$P_{\mathrm{GS}}$")
    ax.set_ylim(-0.02, 1.02)
    ax.legend()
    _save(fig, out)


def render_distance(inp: str, out: str) -> None:
    """Fidelity and the distance gauges (magnetization, kink density) on one
    log-x panel, exposing their decoupling."""
    df = read_table(inp, ("tau_q", "fidelity", "magnetization", "kink_density"))
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.semilogx(df["tau_q"], df["fidelity"], "o-", label="fidelity")
    ax.semilogx(df["tau_q"], df["magnetization"], "s--", label="magnetization")
    ax.semilogx(df["tau_q"], df["kink_density"], "^:", label="kink density")
    ax.set_xlabel(r"$\tau_Q$")
    ax.legend()
    _save(fig, out)
