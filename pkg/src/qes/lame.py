"""Four algebraisations of the even Lame operator -psi'' + N(N+1) k^2 sn^2 psi.

For N = 2n the operator carries four invariant spaces at once: with the
variable y = sn^2(x, k), the gauge factors

    f1 = 1,  f2 = sn*cn,  f3 = sn*dn,  f4 = dn*cn

preserve P(n), P(n-1), P(n-1), P(n-1) respectively, so the four sectors
together hold 4n+1 algebraic eigenvalues (the band edges).  Each gauged
sector restricts to a small matrix whose enveloping-algebra content is a
quadratic in the sl(2) generators on P(n_a).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .algebraise import (
    AlgebraisationProblem,
    GaugeSpec,
    IntervalDomain,
    OperatorMatrix,
    ScalarMonomialBasis,
    build_matrix,
    eigenpairs,
)
from .elliptic import complete_K
from .jets import const, jacobi_jet
from .polybasis import UniBasis

__all__ = [
    "LameParams",
    "GAUGE_NAMES",
    "lame_problem",
    "sector_dimension",
    "full_spectrum",
    "LameSpectrum",
    "SectorResult",
    "sl2_generators",
    "enveloping_basis",
    "enveloping_fit",
    "perturbed_residual",
]

GAUGE_NAMES: Mapping[int, str] = {1: "1", 2: "sn*cn", 3: "sn*dn", 4: "dn*cn"}
DUPLICATE_TOL = 1e-6


@dataclass(frozen=True)
class LameParams:
    """Even Lame family: N = 2n, modulus k (k = 0 is the free limit)."""

    n: int
    k: float

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if not 0.0 <= self.k < 1.0:
            raise ValueError(f"modulus must satisfy 0 <= k < 1, got {self.k}")

    @classmethod
    def from_total_degree(cls, total_n: int, k: float) -> "LameParams":
        if total_n % 2 != 0:
            raise ValueError(
                f"only even N = 2n carries the four-gauge structure; got N = {total_n}"
            )
        return cls(total_n // 2, k)

    @property
    def total_degree(self) -> int:
        return 2 * self.n

    @property
    def coupling(self) -> float:
        nn = self.total_degree
        return nn * (nn + 1) * self.k**2


def sector_dimension(p: LameParams, gauge: int) -> int:
    return p.n + 1 if gauge == 1 else p.n


def _check_gauge(gauge: int) -> int:
    if gauge not in (1, 2, 3, 4):
        raise ValueError(f"gauge id must be 1..4, got {gauge}")
    return gauge


def lame_problem(p: LameParams, gauge: int, coupling_shift: float = 0.0) -> AlgebraisationProblem:
    """Collocation problem for one gauge sector; shift perturbs the coupling."""
    gauge = _check_gauge(gauge)
    k = p.k
    coupling = p.coupling + coupling_shift
    quarter = complete_K(k)

    def potential(nodes: np.ndarray) -> np.ndarray:
        xj = const(nodes[:, 0])
        sn, _, _ = jacobi_jet(xj, k)
        return coupling * np.asarray(sn.v) ** 2

    def varmap(xjets):
        sn, _, _ = jacobi_jet(xjets[0], k)
        return (sn * sn,)

    def factor(xjets):
        sn, cn, dn = jacobi_jet(xjets[0], k)
        if gauge == 1:
            return const(np.ones_like(np.asarray(xjets[0].v, dtype=float)))
        if gauge == 2:
            return sn * cn
        if gauge == 3:
            return sn * dn
        return dn * cn

    basis = ScalarMonomialBasis(UniBasis(sector_dimension(p, gauge) - 1))
    domain = IntervalDomain(0.0, quarter, avoid=(0.0, quarter))
    return AlgebraisationProblem(
        coords=1,
        channels=1,
        potential=potential,
        gauge=GaugeSpec(1, factor),
        varmap=varmap,
        basis=basis,
        domain=domain,
        label=f"lame-f{gauge}",
    )


@dataclass(frozen=True)
class SectorResult:
    gauge: int
    dim: int
    residual: float
    values: np.ndarray
    vectors: np.ndarray
    operator: OperatorMatrix


@dataclass(frozen=True)
class LameSpectrum:
    params: LameParams
    sectors: tuple  # SectorResult per gauge, index 0..3 for f1..f4
    entries: tuple  # (energy, gauge) sorted by energy
    duplicates: tuple  # (energy_i, gauge_i, energy_j, gauge_j) pairs

    @property
    def energies(self) -> np.ndarray:
        return np.array([e for e, _ in self.entries])


def build_sector(p: LameParams, gauge: int, seed: int) -> SectorResult:
    problem = lame_problem(p, gauge)
    op = build_matrix(problem, seed)
    values, vectors = eigenpairs(op)
    return SectorResult(gauge, problem.basis.dim, op.residual, values, vectors, op)


def full_spectrum(p: LameParams, seed: int = 42) -> LameSpectrum:
    """All 4n+1 band edges, each tagged with its gauge sector."""
    sectors = tuple(build_sector(p, g, seed) for g in (1, 2, 3, 4))
    entries = sorted(
        (float(e), s.gauge) for s in sectors for e in s.values
    )
    dups = []
    for i in range(len(entries) - 1):
        (ei, gi), (ej, gj) = entries[i], entries[i + 1]
        if abs(ej - ei) <= DUPLICATE_TOL * (1.0 + abs(ei)) and gi != gj:
            dups.append((ei, gi, ej, gj))
    return LameSpectrum(p, sectors, tuple(entries), tuple(dups))


def sl2_generators(n_a: int):
    """Matrices of (J+, J0, J-) on the monomial basis {1, y, ..., y^n_a}."""
    if n_a < 0:
        raise ValueError("representation label n_a must be >= 0")
    d = n_a + 1
    jp = np.zeros((d, d))
    j0 = np.zeros((d, d))
    jm = np.zeros((d, d))
    for j in range(d):
        # J+ = y^2 d/dy - n_a y ; top degree cancels so P(n_a) is preserved
        if j + 1 < d:
            jp[j + 1, j] = j - n_a
        j0[j, j] = j - n_a / 2.0
        if j >= 1:
            jm[j - 1, j] = j
    return jp, j0, jm


def enveloping_basis(n_a: int):
    """The ten quadratic-and-lower words {J+J+, J+J0, J0J0, J0J-, J-J-,
    J+, J0, J-, J+J-, 1} as matrices on P(n_a)."""
    jp, j0, jm = sl2_generators(n_a)
    eye = np.eye(n_a + 1)
    return [
        jp @ jp, jp @ j0, j0 @ j0, j0 @ jm, jm @ jm,
        jp, j0, jm, jp @ jm, eye,
    ]


def enveloping_fit(p: LameParams, gauge: int, seed: int = 42):
    """Least-squares expression of a sector matrix in the enveloping words.

    Returns (coefficients[10], relative residual).  A residual at rounding
    level is the computable form of the claim that the gauged operator
    lies in the quadratic enveloping algebra of sl(2).
    """
    sector = build_sector(p, gauge, seed)
    mat = sector.operator.matrix
    words = enveloping_basis(sector.dim - 1)
    design = np.column_stack([w.reshape(-1) for w in words])
    target = mat.reshape(-1)
    coeffs, _, _, _ = np.linalg.lstsq(design, target, rcond=1e-12)
    misfit = design @ coeffs - target
    scale = np.linalg.norm(target)
    residual = np.linalg.norm(misfit) / scale if scale > 1e-300 else np.linalg.norm(misfit)
    return coeffs, float(residual)


def perturbed_residual(p: LameParams, seed: int = 42, shift: float = 0.5) -> float:
    """Invariance residual with the coupling shifted off the QES locus."""
    problem = lame_problem(p, 1, coupling_shift=shift)
    return build_matrix(problem, seed).residual
