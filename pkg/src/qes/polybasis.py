"""Monomial bases: univariate P(n) and symmetric multivariate spans.

The symmetric spaces are spanned by monomials in the elementary symmetric
polynomials tau_1..tau_N of the transformed coordinates, with total degree
bounded by m; their dimension is C(N+m, N).  Bases stay monomial on purpose
(the degree caps keep generalized-Vandermonde conditioning acceptable) and
fits go through a rank-revealing SVD least-squares solve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import comb

import numpy as np

from .errors import ConditioningError
from .jets import Jet2, const

__all__ = ["UniBasis", "SymBasis", "FitResult", "tau_eval", "tau_eval_jets", "fit"]

MAX_UNI_DEGREE = 12
MAX_SYM_DIM = 200


def tau_eval(z) -> np.ndarray:
    """Elementary symmetric polynomials tau_1..tau_N of the entries of z."""
    z = np.asarray(z, dtype=np.float64)
    n = z.shape[-1]
    e = np.zeros(z.shape[:-1] + (n + 1,))
    e[..., 0] = 1.0
    for j in range(n):
        zk = z[..., j]
        for r in range(min(j + 1, n - 1) + 1, 0, -1):
            e[..., r] = e[..., r] + zk * e[..., r - 1]
    return e[..., 1:]


def tau_eval_jets(zjets: list[Jet2]) -> list[Jet2]:
    """Same recursion lifted to jets (one designated coordinate)."""
    n = len(zjets)
    e: list = [const(1.0)] + [const(0.0) for _ in range(n)]
    for j, zk in enumerate(zjets):
        for r in range(min(j + 1, n) , 0, -1):
            e[r] = e[r] + zk * e[r - 1]
    return e[1:]


@dataclass(frozen=True)
class UniBasis:
    """Monomials y^0 .. y^n."""

    n: int

    def __post_init__(self):
        if self.n < 0 or self.n > MAX_UNI_DEGREE:
            raise ValueError(f"univariate degree bound must be in [0, {MAX_UNI_DEGREE}]")

    @property
    def dim(self) -> int:
        return self.n + 1

    def eval_matrix(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=np.float64).ravel()
        return np.vander(y, self.n + 1, increasing=True)

    def eval_jets(self, yjet: Jet2) -> list[Jet2]:
        out = [const(np.ones_like(np.asarray(yjet.v, dtype=float)))]
        for _ in range(self.n):
            out.append(out[-1] * yjet)
        return out


@dataclass(frozen=True)
class SymBasis:
    """Monomials tau_1^l1 .. tau_N^lN with l1 + ... + lN <= m, graded-lex order."""

    n_vars: int
    m: int
    exponents: tuple = field(init=False)

    def __post_init__(self):
        if self.n_vars < 1 or self.m < 0:
            raise ValueError("need n_vars >= 1 and m >= 0")
        if comb(self.n_vars + self.m, self.n_vars) > MAX_SYM_DIM:
            raise ValueError(f"symmetric basis dimension exceeds cap {MAX_SYM_DIM}")
        exps = [
            e
            for e in product(range(self.m + 1), repeat=self.n_vars)
            if sum(e) <= self.m
        ]
        exps.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
        object.__setattr__(self, "exponents", tuple(exps))

    @property
    def dim(self) -> int:
        return len(self.exponents)

    def eval_matrix(self, taus: np.ndarray) -> np.ndarray:
        """(samples, dim) evaluation matrix from a (samples, N) tau array."""
        taus = np.asarray(taus, dtype=np.float64)
        powers = [
            np.vander(taus[:, j], self.m + 1, increasing=True)
            for j in range(self.n_vars)
        ]
        cols = [
            np.prod([powers[j][:, e[j]] for j in range(self.n_vars)], axis=0)
            for e in self.exponents
        ]
        return np.column_stack(cols)

    def eval_jets(self, taujets: list[Jet2]) -> list[Jet2]:
        tables = []
        for t in taujets:
            col = [const(np.ones_like(np.asarray(t.v, dtype=float)))]
            for _ in range(self.m):
                col.append(col[-1] * t)
            tables.append(col)
        out = []
        for e in self.exponents:
            acc = tables[0][e[0]]
            for j in range(1, self.n_vars):
                acc = acc * tables[j][e[j]]
            out.append(acc)
        return out


@dataclass(frozen=True)
class FitResult:
    coefficients: np.ndarray
    residual: float


def fit(design: np.ndarray, values: np.ndarray, rcond: float = 1e-12) -> FitResult:
    """Least-squares coefficients of ``values`` in the columns of ``design``.

    residual is the relative Euclidean misfit over the samples; it is
    <= 1e-10 whenever ``values`` lies in the column span.  Rank deficiency
    raises :class:`ConditioningError` naming the offending shape.
    """
    design = np.asarray(design, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    coeffs, _, rank, _ = np.linalg.lstsq(design, values, rcond=rcond)
    if rank < design.shape[1]:
        raise ConditioningError(
            f"sample matrix of shape {design.shape} has rank {rank} < {design.shape[1]}"
        )
    misfit = np.linalg.norm(design @ coeffs - values)
    scale = np.linalg.norm(values)
    residual = misfit / scale if scale > 0.0 else float(misfit)
    return FitResult(coeffs, float(residual))
