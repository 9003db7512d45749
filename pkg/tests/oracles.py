"""Independent reference computations used only by the test-suite."""

from __future__ import annotations

import numpy as np
from scipy.linalg import eigh_tridiagonal


def fd_spectrum(b: float, states: int = 4, length: float | None = None, points: int = 6000):
    """Lowest levels of the shifted spiked oscillator by central differences.

    Dirichlet conditions at ``chi = 0`` and ``chi = length``; returns
    ``(energies, chi, vectors)`` with ``E = eigenvalue / 2``.
    """
    length = length or b + 12.0
    h = length / (points + 1)
    chi = h * np.arange(1, points + 1)
    diag = 2.0 / h**2 + 0.75 / chi**2 + (chi - b) ** 2
    off = -np.ones(points - 1) / h**2
    vals, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, states - 1))
    return vals / 2, chi, vecs


def richardson_levels(b: float, states: int = 4, points: int = 4000):
    """Second-order FD levels extrapolated from two grids (error ~ h^4)."""
    coarse, _, _ = fd_spectrum(b, states, points=points)
    fine, _, _ = fd_spectrum(b, states, points=2 * points + 1)
    return (4 * fine - coarse) / 3


def interior_nodes(values: np.ndarray, rel_floor: float = 1e-6) -> int:
    peak = np.max(np.abs(values))
    kept = values[np.abs(values) > rel_floor * peak]
    return int(np.sum(np.signbit(kept[1:]) != np.signbit(kept[:-1])))
