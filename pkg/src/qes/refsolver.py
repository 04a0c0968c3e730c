"""Finite-difference reference eigensolvers for periodic operators.

Second-order central differences with periodic wrap give a symmetric
matrix whose low-lying eigenvalues carry O(h^2) discretization error.
Every algebraic eigenvalue produced by the collocation engine is checked
against these spectra; the two routes share no code, so agreement is a
genuine cross-validation.  All elliptic problems are solved on [0, 4K]:
every gauge factor is 4K-periodic (the 2K-antiperiodic sectors fold into
4K-periodic states), so one boundary condition captures all sectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import NumericalError

__all__ = [
    "GridSpec",
    "fd_scalar",
    "fd_2channel",
    "MatchResult",
    "match",
    "richardson",
    "DEFAULT_POINTS",
    "DEFAULT_TOL",
]

DEFAULT_POINTS = 2048
DEFAULT_TOL = 1e-3


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid: period length, point count, spacing h = L/M."""

    length: float
    points: int

    def __post_init__(self):
        if self.length <= 0.0:
            raise ValueError(f"grid period must be positive, got {self.length}")
        if not isinstance(self.points, (int, np.integer)) or self.points < 64:
            raise ValueError(f"need at least 64 grid points, got {self.points}")

    @property
    def h(self) -> float:
        return self.length / self.points

    @property
    def nodes(self) -> np.ndarray:
        return self.h * np.arange(self.points)

    def refined(self) -> "GridSpec":
        return GridSpec(self.length, 2 * self.points)


def _add_kinetic(h: np.ndarray, block: int, spacing: float):
    m = block
    inv = 1.0 / (spacing * spacing)
    for q in range(h.shape[0] // m):
        idx = q * m + np.arange(m)
        h[idx, idx] += 2.0 * inv
        h[idx, q * m + (np.arange(m) + 1) % m] -= inv
        h[idx, q * m + (np.arange(m) - 1) % m] -= inv


def fd_scalar(potential: Callable, grid: GridSpec, count: int | None = None) -> np.ndarray:
    """Lowest eigenvalues of -d^2/dx^2 + v(x), periodic on [0, L]."""
    x = grid.nodes
    v = np.asarray(potential(x), dtype=np.float64).reshape(grid.points)
    if not np.all(np.isfinite(v)):
        raise NumericalError("potential not finite on the reference grid")
    h = np.zeros((grid.points, grid.points))
    _add_kinetic(h, grid.points, grid.h)
    h[np.arange(grid.points), np.arange(grid.points)] += v
    values = np.linalg.eigvalsh(h)
    return values if count is None else values[:count]


def fd_2channel(potential: Callable, grid: GridSpec, count: int | None = None) -> np.ndarray:
    """Lowest eigenvalues of the 2-channel operator with matrix potential."""
    m = grid.points
    x = grid.nodes
    v = np.asarray(potential(x), dtype=np.float64)
    if v.shape != (m, 2, 2):
        raise ValueError(f"matrix potential must have shape ({m}, 2, 2), got {v.shape}")
    if not np.all(np.isfinite(v)):
        raise NumericalError("potential not finite on the reference grid")
    asym = float(np.abs(v[:, 0, 1] - v[:, 1, 0]).max())
    if asym > 1e-12:
        raise ValueError(f"matrix potential not symmetric: max offdiag gap {asym:.3e}")
    h = np.zeros((2 * m, 2 * m))
    _add_kinetic(h, m, grid.h)
    i = np.arange(m)
    h[i, i] += v[:, 0, 0]
    h[m + i, m + i] += v[:, 1, 1]
    h[i, m + i] += v[:, 0, 1]
    h[m + i, i] += v[:, 0, 1]
    values = np.linalg.eigvalsh(h)
    return values if count is None else values[:count]


@dataclass(frozen=True)
class MatchResult:
    value: float
    reference: float
    error: float
    passed: bool


def match(algebraic: Sequence[float], reference: Sequence[float], tol: float) -> list:
    """Greedy nearest-reference matching without reuse, one verdict per value."""
    ref = np.asarray(reference, dtype=np.float64)
    if len(ref) < len(list(algebraic)):
        raise ValueError("reference spectrum shorter than the algebraic list")
    used = np.zeros(len(ref), dtype=bool)
    out = []
    for value in algebraic:
        dist = np.abs(ref - value)
        dist[used] = np.inf
        idx = int(np.argmin(dist))
        used[idx] = True
        err = float(abs(ref[idx] - value))
        out.append(MatchResult(float(value), float(ref[idx]), err, err <= tol))
    return out


def richardson(coarse: Sequence[float], fine: Sequence[float]) -> np.ndarray:
    """h^2 extrapolation of index-aligned sorted spectra: (4 E_2M - E_M) / 3."""
    coarse = np.asarray(coarse, dtype=np.float64)
    fine = np.asarray(fine, dtype=np.float64)
    n = min(len(coarse), len(fine))
    return (4.0 * fine[:n] - coarse[:n]) / 3.0
