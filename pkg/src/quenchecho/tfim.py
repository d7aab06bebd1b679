"""Static spectral data of the transverse-field Ising chain.

Everything here is closed-form: wave vectors, single-mode energies, the
finite-size gap, the Bogoliubov mixing angle, and the reduced distance
from the critical point.  hbar = 1 throughout; the coupling J carries the
energy scale explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Chain",
    "wave_vectors",
    "mode_energy",
    "gap",
    "gap_minimum",
    "bogoliubov_angle",
    "epsilon",
]


@dataclass(frozen=True)
class Chain:
    """Static problem definition for a periodic Ising chain of even size."""

    n_sites: int
    coupling_j: float = 1.0
    g_critical: float = 1.0

    def __post_init__(self):
        if self.n_sites < 2 or self.n_sites % 2 != 0:
            raise ValueError(f"n_sites must be even and >= 2, got {self.n_sites}")
        if self.coupling_j <= 0:
            raise ValueError(f"coupling_j must be positive, got {self.coupling_j}")


def wave_vectors(chain: Chain) -> np.ndarray:
    """Positive wave vectors k = (2s+1)pi/N, s = 0 .. N/2-1.

    Returns the N/2 values in strictly increasing order, all in (0, pi).
    """
    n = chain.n_sites
    s = np.arange(n // 2)
    return (2 * s + 1) * np.pi / n


def mode_energy(k, g, j=1.0):
    """Single-mode energy Lambda_k(g) = J sqrt(g^2 - 2 g cos k + 1).

    Accepts scalars or arrays in ``k`` and ``g``.
    """
    return j * np.sqrt(g * g - 2.0 * g * np.cos(k) + 1.0)


def gap(chain: Chain, g) -> float:
    """Energy gap of the finite chain, 2 J sqrt(1 - 2 g cos(pi/N) + g^2).

    Twice the smallest-k mode energy; minimized at g = cos(pi/N) where it
    equals 2 J sin(pi/N).
    """
    return 2.0 * mode_energy(np.pi / chain.n_sites, g, chain.coupling_j)


def gap_minimum(chain: Chain) -> tuple[float, float]:
    """Location and value of the minimal gap: (cos(pi/N), 2 J sin(pi/N))."""
    x = math.pi / chain.n_sites
    return math.cos(x), 2.0 * chain.coupling_j * math.sin(x)


def bogoliubov_angle(k, g):
    """Mixing angle theta_k = atan2(-sin k, cos k - g), in (-pi, pi].

    A fixed two-argument branch; only sin^2/cos^2 of half-angles enter any
    observable, so the convention is free but must be deterministic.
    """
    return np.arctan2(-np.sin(k), np.cos(k) - g)


def epsilon(g, g_c=1.0):
    """Reduced distance from the critical point, (g - g_c)/g_c."""
    if g_c == 0:
        raise ValueError("critical point g_c must be nonzero")
    return (g - g_c) / g_c
