"""Scalar diagnostics built from per-mode amplitudes.

All quantities depend only on the moduli |alpha_k|, |beta_k|.  Each positive-k
mode carries multiplicity 2 (the +-k pair of the reduced description), which
is what makes m = 1 for the all-ground chain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tfim import mode_energy

__all__ = [
    "ObservableSet",
    "p_ground",
    "magnetization",
    "kink_density",
    "residual_energy",
    "observable_set",
]


@dataclass(frozen=True)
class ObservableSet:
    fidelity: float
    p_gs: float
    magnetization: float
    kink_density: float
    residual_energy: float


def _beta_sq(states) -> np.ndarray:
    return np.array([abs(st.beta) ** 2 for st in states])


def _alpha_sq(states) -> np.ndarray:
    return np.array([abs(st.alpha) ** 2 for st in states])


def _check_count(states, n_sites):
    if len(states) != n_sites // 2:
        raise ValueError(f"expected {n_sites // 2} mode states, got {len(states)}")


def p_ground(states) -> float:
    """Probability of the whole chain being in the instantaneous ground state:
    the product of per-mode |beta_k|^2.  At the end of an echo schedule this
    is the echo fidelity."""
    return float(np.prod(_beta_sq(states)))


def magnetization(states, n_sites: int) -> float:
    """Magnetization per site along the field, (2/N) sum_k 2|beta_k|^2 - 1."""
    _check_count(states, n_sites)
    return float((4.0 / n_sites) * np.sum(_beta_sq(states)) - 1.0)


def kink_density(states, n_sites: int) -> float:
    """Mean excitation probability with mode multiplicity 2: (2/N) sum_k |alpha_k|^2."""
    _check_count(states, n_sites)
    return float((2.0 / n_sites) * np.sum(_alpha_sq(states)))


def residual_energy(states, k_list, g: float, j: float) -> float:
    """Energy above the instantaneous ground state,
    sum over positive-k modes of 2 * 2 Lambda_k(g) |alpha_k|^2."""
    k_list = np.asarray(k_list, dtype=float)
    if len(states) != len(k_list):
        raise ValueError(f"got {len(states)} states for {len(k_list)} wave vectors")
    return float(np.sum(4.0 * mode_energy(k_list, g, j) * _alpha_sq(states)))


def observable_set(states, k_list, n_sites: int, g: float, j: float) -> ObservableSet:
    """Bundle all diagnostics at one point of the evolution."""
    p = p_ground(states)
    return ObservableSet(
        fidelity=p,
        p_gs=p,
        magnetization=magnetization(states, n_sites),
        kink_density=kink_density(states, n_sites),
        residual_energy=residual_energy(states, k_list, g, j),
    )
