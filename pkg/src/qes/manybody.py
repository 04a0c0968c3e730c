"""N-body Weierstrass Hamiltonian and its gauge sectors.

The Hamiltonian couples N ordered coordinates through pair terms
wp(x_j + x_k) + wp(x_j - x_k), a one-body wp(2x_k) term weighted by
4b(b-1), and the shifted one-body term c * wp(x_k + i*beta).  With
z_k = wp(x_k + i*beta) and the gauge

    mu = prod_{j<k} (z_k - z_j)^a * prod_k wp'(x_k + i*beta)^b

the gauged operator preserves symmetric polynomials in z of tau-degree
<= m exactly when c = c_m (a quadratic in m).  Extra root factors
(z_k - e_i)^(1/2 - b) twist the gauge; a twist of n_f roots shifts the
invariant degree to m~ = m + (b - 1/2) n_f, which must be a non-negative
integer for the sector to exist.  All gauge pieces reduce to positive
powers of sn, cn, dn on the ordered domain, so no complex branch ever
appears.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement

import numpy as np

from .algebraise import (
    AlgebraisationProblem,
    GaugeSpec,
    OperatorMatrix,
    ScalarMonomialBasis,
    SimplexDomain,
    build_matrix,
    spectrum,
)
from .elliptic import WeierstrassRoots, jacobi
from .jets import Jet2, const, jacobi_jet
from .polybasis import SymBasis, tau_eval_jets

__all__ = [
    "ManyBodyParams",
    "SectorSpec",
    "coupling_cm",
    "invert_cm",
    "enumerate_sectors",
    "manybody_problem",
    "sector_spectrum",
    "perturbed_residual",
    "SectorResult",
    "symmetrized_sums",
    "MAX_BODIES",
    "MAX_SECTOR_DEGREE",
]

MAX_BODIES = 3
MAX_SECTOR_DEGREE = 4
INTEGRALITY_TOL = 1e-9
DOMAIN_MARGIN = 0.02

# root index -> position of the matching Jacobi factor in (sn, cn, dn):
# z - e1 is proportional to dn^2, z - e2 to cn^2, z - e3 to sn^2
_ROOT_FACTOR = {1: 2, 2: 1, 3: 0}


@dataclass(frozen=True)
class ManyBodyParams:
    n_bodies: int
    a: float
    b: float
    roots: WeierstrassRoots
    c: float

    def __post_init__(self):
        if not isinstance(self.n_bodies, (int, np.integer)) or self.n_bodies < 1:
            raise ValueError(f"body count must be a positive integer, got {self.n_bodies}")
        if not 0.0 <= self.b < 0.5:
            raise ValueError(f"b must satisfy 0 <= b < 1/2, got {self.b}")
        if self.a < 0.0:
            raise ValueError(f"a must be non-negative, got {self.a}")


@dataclass(frozen=True)
class SectorSpec:
    n_f: int
    twisted: tuple  # subset of root indices (1, 2, 3) carrying the 1/2-b exponent
    m: float
    m_tilde: int

    def __post_init__(self):
        if len(self.twisted) != self.n_f:
            raise ValueError("twisted root subset size must equal n_f")
        if self.m_tilde < 0:
            raise ValueError("sector degree m~ must be non-negative")


def coupling_cm(n_bodies: int, a: float, b: float, m: float) -> float:
    """The quantized coupling c_m of the shifted one-body term."""
    base = 2.0 * a * (n_bodies - 1)
    return (2.0 * m + base + 4.0 * b) * (2.0 * m + 1.0 + base + 2.0 * b)


def invert_cm(n_bodies: int, a: float, b: float, c: float) -> tuple:
    """Real roots m of c_m = c, ascending; empty if the quadratic has none."""
    base = 2.0 * a * (n_bodies - 1)
    # (2m + base + 4b)(2m + 1 + base + 2b) = c, quadratic in t = 2m
    p = base + 4.0 * b
    q = 1.0 + base + 2.0 * b
    disc = (p + q) ** 2 - 4.0 * (p * q - c)
    if disc < 0.0:
        return ()
    root = math.sqrt(disc)
    t1 = 0.5 * (-(p + q) - root)
    t2 = 0.5 * (-(p + q) + root)
    return (t1 / 2.0, t2 / 2.0)


def enumerate_sectors(p: ManyBodyParams) -> list:
    """All (n_f, twist subset) sectors whose m~ is a non-negative integer."""
    out = []
    for m in invert_cm(p.n_bodies, p.a, p.b, p.c):
        for n_f in range(4):
            m_tilde = m + (p.b - 0.5) * n_f
            nearest = round(m_tilde)
            if abs(m_tilde - nearest) > INTEGRALITY_TOL:
                continue
            if nearest < 0 or nearest > MAX_SECTOR_DEGREE:
                continue
            for subset in combinations((1, 2, 3), n_f):
                out.append(SectorSpec(n_f, subset, m, int(nearest)))
    out.sort(key=lambda s: (s.n_f, s.twisted, s.m))
    return out


def _body_jets(xjets, roots: WeierstrassRoots):
    """Per-body (z, sn, cn, dn) jets at the scaled coordinate."""
    s = roots.s
    e2, e3 = roots.e2, roots.e3
    out = []
    for xj in xjets:
        sn, cn, dn = jacobi_jet(xj * s, roots.k)
        out.append((sn * sn * (e2 - e3) + e3, sn, cn, dn))
    return out


def manybody_problem(
    p: ManyBodyParams, sector: SectorSpec, coupling_shift: float = 0.0
) -> AlgebraisationProblem:
    """Collocation problem for one twist sector of the N-body operator.

    ``coupling_shift`` perturbs the one-body coupling c while keeping the
    gauge and invariant space of the unshifted locus (negative control).
    """
    if p.n_bodies > MAX_BODIES:
        raise ValueError(f"body count capped at {MAX_BODIES} for dense collocation")
    if sector.m_tilde > MAX_SECTOR_DEGREE:
        raise ValueError(f"sector degree capped at {MAX_SECTOR_DEGREE}")
    n = p.n_bodies
    a, b, c = p.a, p.b, p.c + coupling_shift
    roots = p.roots
    e1, e2, e3 = roots.e1, roots.e2, roots.e3
    s = roots.s
    k = roots.k
    alpha = roots.alpha
    twist_exp = 1.0 - 2.0 * b

    def wp_real_of(x: np.ndarray) -> np.ndarray:
        sn = jacobi(s * x, k)[0]
        return e3 + (e1 - e3) / sn**2

    def wp_shifted_of(x: np.ndarray) -> np.ndarray:
        sn = jacobi(s * x, k)[0]
        return e3 + (e2 - e3) * sn**2

    def potential(nodes: np.ndarray) -> np.ndarray:
        out = np.zeros(len(nodes))
        if a != 0.0:
            for j in range(n):
                for l in range(n):
                    if j != l:
                        out += a * (a - 1.0) * (
                            wp_real_of(nodes[:, j] + nodes[:, l])
                            + wp_real_of(nodes[:, j] - nodes[:, l])
                        )
        for j in range(n):
            if b != 0.0:
                out += 4.0 * b * (b - 1.0) * wp_real_of(2.0 * nodes[:, j])
            out += c * wp_shifted_of(nodes[:, j])
        return out

    def varmap(xjets):
        zs = [body[0] for body in _body_jets(xjets, roots)]
        return tuple(tau_eval_jets(zs))

    def factor(xjets):
        bodies = _body_jets(xjets, roots)
        g: Jet2 = const(np.ones_like(np.asarray(xjets[0].v, dtype=float)))
        if a != 0.0:
            for j in range(n):
                for l in range(j + 1, n):
                    # z is increasing in x, so z_l - z_j > 0 on the ordered
                    # domain and fractional powers stay on the real branch
                    g = g * (bodies[l][0] - bodies[j][0]) ** a
        for _, sn, cn, dn in bodies:
            if b != 0.0:
                g = g * (sn * cn * dn) ** b
            for i in sector.twisted:
                g = g * (sn, cn, dn)[_ROOT_FACTOR[i]] ** twist_exp
        return g

    basis = ScalarMonomialBasis(SymBasis(n, sector.m_tilde))
    domain = SimplexDomain(
        upper=alpha, n=n, margin=DOMAIN_MARGIN * alpha, min_gap=DOMAIN_MARGIN * alpha
    )
    return AlgebraisationProblem(
        coords=n,
        channels=1,
        potential=potential,
        gauge=GaugeSpec(1, factor),
        varmap=varmap,
        basis=basis,
        domain=domain,
        label=f"manybody-nf{sector.n_f}-{''.join(map(str, sector.twisted))}",
    )


@dataclass(frozen=True)
class SectorResult:
    sector: SectorSpec
    dim: int
    residual: float
    values: np.ndarray
    operator: OperatorMatrix


def sector_spectrum(p: ManyBodyParams, sector: SectorSpec, seed: int = 42) -> SectorResult:
    problem = manybody_problem(p, sector)
    op = build_matrix(problem, seed)
    values = spectrum(op)
    return SectorResult(sector, problem.basis.dim, op.residual, values, op)


def perturbed_residual(
    p: ManyBodyParams, sector: SectorSpec, seed: int = 42, coupling_shift: float = 1.0
) -> float:
    """Invariance residual with c shifted off the locus; should be large."""
    problem = manybody_problem(p, sector, coupling_shift)
    return build_matrix(problem, seed).residual


def symmetrized_sums(values, n_bodies: int) -> np.ndarray:
    """Sorted multiset {sum over a size-n multiset of values} for bosonic
    products of single-particle states."""
    sums = [
        sum(combo) for combo in combinations_with_replacement(np.asarray(values), n_bodies)
    ]
    return np.sort(sums)
