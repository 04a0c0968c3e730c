"""Collocation engine: restrict a gauged Hamiltonian to a polynomial space.

Given a Hamiltonian H = -laplacian + V, an invertible gauge factor f
(scalar or 2x2 channel matrix), a variable map x -> u and a candidate
basis of the target space, the engine forms psi_j = f * b_j(u), applies H
through per-coordinate order-2 jets at deterministic sample nodes, and
least-squares fits f^-1 (H psi_j) back into the basis.  The fitted
coefficients are the operator matrix column; the worst relative fit misfit
is the invariance residual, which doubles as the computable QES
certificate: tiny residual means the space really is invariant, a large
one means "not QES at these parameters".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import linalg
from .errors import CertificationError, ConditioningError, NumericalError, PoleError
from .jets import Jet2, const, seed as jet_seed
from .polybasis import SymBasis, UniBasis

__all__ = [
    "IntervalDomain",
    "SimplexDomain",
    "GaugeSpec",
    "ScalarMonomialBasis",
    "TwoChannelBasis",
    "VectorFunctionBasis",
    "AlgebraisationProblem",
    "OperatorMatrix",
    "sample_nodes",
    "collocate",
    "build_matrix",
    "spectrum",
    "eigenpairs",
    "reconstruct",
    "eigenpair_residual",
    "INVARIANCE_TOL",
    "REALITY_TOL",
]

INVARIANCE_TOL = 1e-7
REALITY_TOL = 1e-7
MIN_NODE_DISTANCE = 1e-3
MAX_SAMPLE_RETRIES = 8


@dataclass(frozen=True)
class IntervalDomain:
    """Open interval (lo, hi) with excluded singular points."""

    lo: float
    hi: float
    avoid: tuple = ()
    min_distance: float = MIN_NODE_DISTANCE

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        lo = self.lo + self.min_distance
        hi = self.hi - self.min_distance
        if hi <= lo:
            raise ValueError("sampling interval is empty after margins")
        out = np.empty(0)
        for _ in range(64):
            cand = rng.uniform(lo, hi, 4 * count)
            ok = np.ones(cand.shape, dtype=bool)
            for a in self.avoid:
                ok &= np.abs(cand - a) >= self.min_distance
            out = np.concatenate([out, cand[ok]])
            if out.size >= count:
                return out[:count, None]
        raise ConditioningError("could not place nodes away from the singular locus")


@dataclass(frozen=True)
class SimplexDomain:
    """Ordered open simplex 0 < x_1 < ... < x_n < upper, margin-shrunk."""

    upper: float
    n: int
    margin: float
    min_gap: float

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        lo, hi = self.margin, self.upper - self.margin
        rows: list[np.ndarray] = []
        have = 0
        for _ in range(64):
            cand = np.sort(rng.uniform(lo, hi, (4 * count, self.n)), axis=1)
            if self.n > 1:
                ok = np.diff(cand, axis=1).min(axis=1) >= self.min_gap
                cand = cand[ok]
            rows.append(cand)
            have += len(cand)
            if have >= count:
                return np.vstack(rows)[:count]
        raise ConditioningError("could not place ordered nodes with the gap margin")


@dataclass(frozen=True)
class GaugeSpec:
    """Jet-capable gauge factor; scalar for 1 channel, 2x2 nested for 2."""

    channels: int
    factor: Callable


class ScalarMonomialBasis:
    """Adapter putting UniBasis / SymBasis behind the engine's protocol."""

    def __init__(self, inner: UniBasis | SymBasis):
        self.inner = inner
        self.channels = 1

    @property
    def dim(self) -> int:
        return self.inner.dim

    def eval_values(self, u_arrays: Sequence[np.ndarray]) -> np.ndarray:
        if isinstance(self.inner, UniBasis):
            mat = self.inner.eval_matrix(u_arrays[0])
        else:
            mat = self.inner.eval_matrix(np.column_stack(u_arrays))
        return mat[:, None, :]

    def elements_jets(self, ujets: Sequence[Jet2]):
        if isinstance(self.inner, UniBasis):
            elems = self.inner.eval_jets(ujets[0])
        else:
            elems = self.inner.eval_jets(list(ujets))
        return [(e,) for e in elems]


class TwoChannelBasis:
    """Stacked per-channel univariate spaces (top degree, bottom degree)."""

    def __init__(self, top: UniBasis, bottom: UniBasis):
        self.top = top
        self.bottom = bottom
        self.channels = 2

    @property
    def dim(self) -> int:
        return self.top.dim + self.bottom.dim

    def eval_values(self, u_arrays: Sequence[np.ndarray]) -> np.ndarray:
        y = np.asarray(u_arrays[0])
        s = y.shape[0]
        out = np.zeros((s, 2, self.dim))
        out[:, 0, : self.top.dim] = self.top.eval_matrix(y)
        out[:, 1, self.top.dim :] = self.bottom.eval_matrix(y)
        return out

    def elements_jets(self, ujets: Sequence[Jet2]):
        zero = const(np.zeros_like(np.asarray(ujets[0].v, dtype=float)))
        out = [(e, zero) for e in self.top.eval_jets(ujets[0])]
        out += [(zero, e) for e in self.bottom.eval_jets(ujets[0])]
        return out


class VectorFunctionBasis:
    """Explicit list of jet-capable vector-valued basis functions of u."""

    def __init__(self, channels: int, elements: Sequence[Callable]):
        self.channels = channels
        self.elements = list(elements)

    @property
    def dim(self) -> int:
        return len(self.elements)

    def eval_values(self, u_arrays: Sequence[np.ndarray]) -> np.ndarray:
        ujets = [const(np.asarray(u)) for u in u_arrays]
        s = np.asarray(u_arrays[0]).shape[0]
        out = np.zeros((s, self.channels, self.dim))
        for j, elem in enumerate(self.elements):
            vals = elem(ujets)
            for q in range(self.channels):
                out[:, q, j] = np.broadcast_to(vals[q].v, (s,))
        return out

    def elements_jets(self, ujets: Sequence[Jet2]):
        return [elem(list(ujets)) for elem in self.elements]


@dataclass(frozen=True)
class AlgebraisationProblem:
    """One candidate algebraisation: H, gauge, variable map, basis, domain."""

    coords: int
    channels: int
    potential: Callable            # nodes (S, coords) -> (S,) or (S, 2, 2)
    gauge: GaugeSpec
    varmap: Callable               # tuple of coordinate jets -> tuple of u jets
    basis: object
    domain: IntervalDomain | SimplexDomain
    label: str = ""


@dataclass(frozen=True)
class OperatorMatrix:
    """Gauged-operator matrix on the basis plus its invariance residual."""

    matrix: np.ndarray
    residual: float
    nodes: np.ndarray
    column_residuals: np.ndarray = field(repr=False, default=None)


def _u_values(problem: AlgebraisationProblem, nodes: np.ndarray):
    xjets = tuple(const(nodes[:, i]) for i in range(problem.coords))
    return [np.broadcast_to(np.asarray(u.v), (len(nodes),)) for u in problem.varmap(xjets)]


def _basis_matrix(problem: AlgebraisationProblem, nodes: np.ndarray) -> np.ndarray:
    b3 = problem.basis.eval_values(_u_values(problem, nodes))
    s, ch, dim = b3.shape
    return b3.reshape(s * ch, dim)


def sample_nodes(problem: AlgebraisationProblem, count: int, seed: int) -> np.ndarray:
    """Deterministic nodes giving a full-rank basis evaluation matrix."""
    dim = problem.basis.dim
    if count < 2 * dim:
        raise ValueError(f"need count >= {2 * dim} nodes for basis dimension {dim}")
    last_shape = None
    for attempt in range(MAX_SAMPLE_RETRIES):
        rng = np.random.default_rng([int(seed), attempt])
        nodes = problem.domain.sample(count, rng)
        b = _basis_matrix(problem, nodes)
        last_shape = b.shape
        if np.linalg.matrix_rank(b) == dim:
            return nodes
    raise ConditioningError(
        f"basis evaluation matrix {last_shape} stayed rank deficient "
        f"after {MAX_SAMPLE_RETRIES} node draws"
    )


def _apply_gauge(gj, pj, channels: int):
    if channels == 1:
        return (gj * pj[0],)
    return (
        gj[0][0] * pj[0] + gj[0][1] * pj[1],
        gj[1][0] * pj[0] + gj[1][1] * pj[1],
    )


def _gauge_value_matrix(gj, s: int, channels: int) -> np.ndarray:
    if channels == 1:
        return np.broadcast_to(np.asarray(gj.v, dtype=float), (s,)).copy()
    out = np.empty((s, 2, 2))
    for a in range(2):
        for b in range(2):
            out[:, a, b] = np.broadcast_to(np.asarray(gj[a][b].v, dtype=float), (s,))
    return out


def collocate(problem: AlgebraisationProblem, nodes: np.ndarray):
    """Evaluate the gauged operator action at the given nodes.

    Returns (basis matrix, gauged Laplacian part, gauged potential part),
    rows stacked channel-major as (nodes*channels, dim); the sum of the
    last two is f^-1 (H psi_j) columnwise.
    """
    dim = problem.basis.dim
    ch = problem.channels
    s = len(nodes)
    bmat = _basis_matrix(problem, nodes)

    lap = np.zeros((s, ch, dim))
    psi_vals = np.zeros((s, ch, dim))
    gauge_vals = None
    for c in range(problem.coords):
        xjets = tuple(
            jet_seed(nodes[:, i]) if i == c else const(nodes[:, i])
            for i in range(problem.coords)
        )
        ujets = problem.varmap(xjets)
        gj = problem.gauge.factor(xjets)
        elems = problem.basis.elements_jets(ujets)
        for j, pj in enumerate(elems):
            psi = _apply_gauge(gj, pj, ch)
            for q in range(ch):
                lap[:, q, j] -= psi[q].d2
                if c == 0:
                    psi_vals[:, q, j] = np.broadcast_to(np.asarray(psi[q].v), (s,))
        if c == 0:
            gauge_vals = _gauge_value_matrix(gj, s, ch)

    v = problem.potential(nodes)
    if ch == 1:
        pot = np.asarray(v).reshape(s, 1) * psi_vals[:, 0, :]
        if np.any(gauge_vals == 0.0):
            raise NumericalError("gauge factor vanished at a sample node")
        r_lap = lap[:, 0, :] / gauge_vals[:, None]
        r_pot = pot / gauge_vals[:, None]
    else:
        pot = np.einsum("sab,sbj->saj", np.asarray(v), psi_vals)
        det = np.linalg.det(gauge_vals)
        if np.any(det == 0.0):
            raise NumericalError("matrix gauge factor singular at a sample node")
        r_lap = np.linalg.solve(gauge_vals, lap).reshape(s * ch, dim)
        r_pot = np.linalg.solve(gauge_vals, pot).reshape(s * ch, dim)
    return bmat, r_lap, r_pot


def build_matrix(problem: AlgebraisationProblem, seed: int, count: int | None = None) -> OperatorMatrix:
    """Collocate the gauged operator on the basis and certify invariance."""
    dim = problem.basis.dim
    if count is None:
        count = 2 * dim
    nodes = sample_nodes(problem, count, seed)
    bmat, r_lap, r_pot = collocate(problem, nodes)
    rhs = r_lap + r_pot

    sol, _, rank, _ = np.linalg.lstsq(bmat, rhs, rcond=1e-12)
    if rank < dim:
        raise ConditioningError("collocation fit lost rank; nodes were degenerate")
    misfit = bmat @ sol - rhs
    # normalise against the un-cancelled operator terms, not the cancelled
    # result: an eigencolumn with eigenvalue near zero has a tiny rhs but the
    # invariance statement behind it is as sharp as anywhere else
    col_res = np.empty(dim)
    for j in range(dim):
        scale = np.linalg.norm(np.abs(r_lap[:, j]) + np.abs(r_pot[:, j]))
        r = np.linalg.norm(misfit[:, j])
        col_res[j] = r / scale if scale > 1e-300 else r
    return OperatorMatrix(sol, float(col_res.max()), nodes, col_res)


def spectrum(
    op: OperatorMatrix,
    invariance_tol: float = INVARIANCE_TOL,
    reality_tol: float = REALITY_TOL,
) -> np.ndarray:
    """Sorted real eigenvalues of a certified operator matrix."""
    return eigenpairs(op, invariance_tol, reality_tol)[0]


def eigenpairs(
    op: OperatorMatrix,
    invariance_tol: float = INVARIANCE_TOL,
    reality_tol: float = REALITY_TOL,
):
    """(sorted real eigenvalues, matching right eigenvectors) with gating."""
    if op.residual > invariance_tol:
        raise CertificationError(
            f"not QES at these parameters: invariance residual {op.residual:.3e} "
            f"exceeds {invariance_tol:.0e}",
            residual=op.residual,
        )
    res = linalg.eig(op.matrix)
    im_max = float(np.abs(res.values.imag).max()) if len(res.values) else 0.0
    re_max = float(np.abs(res.values.real).max()) if len(res.values) else 0.0
    if im_max > reality_tol * (1.0 + re_max):
        raise NumericalError(
            f"certified sector produced complex eigenvalues: max|im| = {im_max:.3e} "
            f"with max|re| = {re_max:.3e}"
        )
    return res.values.real.copy(), res.vectors


def reconstruct(problem: AlgebraisationProblem, coefficients, points) -> np.ndarray:
    """Wavefunction values f(x) * p(u(x)) at points (S, coords) -> (S, channels)."""
    coefficients = np.asarray(coefficients, dtype=np.float64)
    if coefficients.shape[0] != problem.basis.dim:
        raise ValueError(
            f"coefficient length {coefficients.shape[0]} != basis dimension {problem.basis.dim}"
        )
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 0:
        pts = pts.reshape(1, 1)
    elif pts.ndim == 1:
        # one point for multi-coordinate problems, a point list for 1-d ones
        pts = pts.reshape(1, -1) if problem.coords > 1 else pts.reshape(-1, 1)
    xjets = tuple(const(pts[:, i]) for i in range(problem.coords))
    ujets = problem.varmap(xjets)
    gj = problem.gauge.factor(xjets)
    elems = problem.basis.elements_jets(ujets)
    out = np.zeros((len(pts), problem.channels))
    for j, pj in enumerate(elems):
        psi = _apply_gauge(gj, pj, problem.channels)
        for q in range(problem.channels):
            out[:, q] += coefficients[j] * np.broadcast_to(np.asarray(psi[q].v), (len(pts),))
    if not np.all(np.isfinite(out)):
        raise PoleError("wavefunction evaluation hit the gauge singular locus")
    return out


def eigenpair_residual(
    problem: AlgebraisationProblem,
    energy: float,
    coefficients,
    points: np.ndarray,
) -> float:
    """max |H psi - E psi| / ((1+|E|) max|psi|) over the given points."""
    coefficients = np.asarray(coefficients, dtype=np.float64)
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    s = len(pts)
    ch = problem.channels
    hpsi = np.zeros((s, ch))
    psi_v = np.zeros((s, ch))
    for c in range(problem.coords):
        xjets = tuple(
            jet_seed(pts[:, i]) if i == c else const(pts[:, i])
            for i in range(problem.coords)
        )
        ujets = problem.varmap(xjets)
        gj = problem.gauge.factor(xjets)
        elems = problem.basis.elements_jets(ujets)
        for j, pj in enumerate(elems):
            psi = _apply_gauge(gj, pj, ch)
            for q in range(ch):
                hpsi[:, q] -= coefficients[j] * np.broadcast_to(np.asarray(psi[q].d2), (s,))
                if c == 0:
                    psi_v[:, q] += coefficients[j] * np.broadcast_to(np.asarray(psi[q].v), (s,))
    v = problem.potential(pts)
    if ch == 1:
        hpsi[:, 0] += np.asarray(v).reshape(s) * psi_v[:, 0]
    else:
        hpsi += np.einsum("sab,sb->sa", np.asarray(v), psi_v)
    scale = float(np.abs(psi_v).max())
    if scale == 0.0:
        return 0.0
    return float(np.abs(hpsi - energy * psi_v).max() / ((1.0 + abs(energy)) * scale))
