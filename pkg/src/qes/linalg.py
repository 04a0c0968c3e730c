"""Dense eigendecomposition and least squares with certified residuals.

The gauged operator matrices are similar to self-adjoint operators but not
symmetric as matrices, so the general (Hessenberg + shifted QR, balanced)
solver is mandatory; it is provided by LAPACK ``geev`` through numpy.
Every returned eigenpair carries its relative residual and results are
ordered deterministically by (real, imaginary) part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConditioningError, NumericalError

__all__ = ["EigenResult", "eig", "lstsq"]

MAX_DIM = 512
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class EigenResult:
    """Full spectrum with right eigenvectors and per-pair residuals."""

    values: np.ndarray      # complex, sorted by (re, im)
    vectors: np.ndarray     # column j pairs with values[j]
    residuals: np.ndarray   # ||A v - w v|| / (||A|| ||v||)


def eig(a: np.ndarray) -> EigenResult:
    """Complete spectrum of a square real matrix of dimension <= 512."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"eig needs a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise ValueError(f"matrix dimension {a.shape[0]} exceeds cap {MAX_DIM}")
    if not np.all(np.isfinite(a)):
        raise NumericalError("matrix contains non-finite entries")
    try:
        w, v = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericalError(f"eigensolver did not converge: {exc}") from exc
    order = np.lexsort((w.imag, w.real))
    w, v = w[order], v[:, order]
    norm_a = np.linalg.norm(a)
    scale = norm_a if norm_a > 0.0 else 1.0
    res = np.array(
        [
            np.linalg.norm(a @ v[:, j] - w[j] * v[:, j]) / (scale * np.linalg.norm(v[:, j]))
            for j in range(len(w))
        ]
    )
    if np.any(res > RESIDUAL_TOL):
        raise NumericalError(
            f"eigenpair residual {res.max():.3e} exceeds {RESIDUAL_TOL:.0e}"
        )
    return EigenResult(w, v, res)


def lstsq(a: np.ndarray, b: np.ndarray, rcond: float = 1e-12):
    """Minimum-norm least squares; returns (coefficients, relative residual).

    ``b`` may hold several right-hand sides as columns; the residual is then
    the worst column.  Rank deficiency raises :class:`ConditioningError`.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape[0] < a.shape[1]:
        raise ValueError(f"need rows >= cols, got shape {a.shape}")
    coeffs, _, rank, _ = np.linalg.lstsq(a, b, rcond=rcond)
    if rank < a.shape[1]:
        raise ConditioningError(
            f"least-squares matrix of shape {a.shape} has rank {rank}"
        )
    misfit = a @ coeffs - b
    if b.ndim == 1:
        scale = np.linalg.norm(b)
        residual = np.linalg.norm(misfit) / scale if scale > 0 else np.linalg.norm(misfit)
    else:
        residual = 0.0
        for j in range(b.shape[1]):
            scale = np.linalg.norm(b[:, j])
            r = np.linalg.norm(misfit[:, j])
            residual = max(residual, r / scale if scale > 0 else r)
    return coeffs, float(residual)
