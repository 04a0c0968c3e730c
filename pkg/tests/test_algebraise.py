"""Collocation engine: node sampling, matrix construction, invariance certificate."""

import numpy as np
import pytest

from qes.algebraise import (
    AlgebraisationProblem,
    GaugeSpec,
    IntervalDomain,
    ScalarMonomialBasis,
    SimplexDomain,
    build_matrix,
    eigenpair_residual,
    eigenpairs,
    reconstruct,
    sample_nodes,
    spectrum,
)
from qes.errors import CertificationError
from qes.jets import const
from qes.polybasis import UniBasis


def _problem(potential, degree):
    """Gauge-free operator -d^2/dx^2 + V on polynomials of x, for engine tests."""

    def factor(xjets):
        return const(np.ones_like(np.asarray(xjets[0].v, dtype=float)))

    return AlgebraisationProblem(
        coords=1,
        channels=1,
        potential=potential,
        gauge=GaugeSpec(1, factor),
        varmap=lambda xjets: (xjets[0],),
        basis=ScalarMonomialBasis(UniBasis(degree)),
        domain=IntervalDomain(-1.0, 1.0),
        label="test",
    )


def test_interval_domain_sampling():
    d = IntervalDomain(0.0, 2.0, avoid=(1.0,), min_distance=0.05)
    rng = np.random.default_rng(0)
    nodes = d.sample(50, rng)
    assert nodes.shape == (50, 1)
    assert nodes.min() >= 0.05 and nodes.max() <= 1.95
    assert np.abs(nodes - 1.0).min() >= 0.05


def test_interval_domain_empty_after_margins():
    d = IntervalDomain(0.0, 1e-4)
    with pytest.raises(ValueError):
        d.sample(10, np.random.default_rng(0))


def test_simplex_domain_sampling():
    d = SimplexDomain(upper=2.0, n=3, margin=0.1, min_gap=0.02)
    nodes = d.sample(40, np.random.default_rng(1))
    assert nodes.shape == (40, 3)
    assert nodes.min() >= 0.1 and nodes.max() <= 1.9
    assert np.diff(nodes, axis=1).min() >= 0.02


def test_sample_nodes_deterministic():
    p = _problem(lambda nodes: np.zeros(len(nodes)), 3)
    a = sample_nodes(p, 12, seed=42)
    b = sample_nodes(p, 12, seed=42)
    np.testing.assert_array_equal(a, b)
    c = sample_nodes(p, 12, seed=7)
    assert np.abs(a - c).max() > 1e-6


def test_sample_nodes_requires_oversampling():
    p = _problem(lambda nodes: np.zeros(len(nodes)), 3)
    with pytest.raises(ValueError):
        sample_nodes(p, 7, seed=42)  # 2 * dim = 8


def test_free_particle_matrix():
    # -(y^j)'' = -j(j-1) y^(j-2); strictly upper triangular in the monomial basis
    p = _problem(lambda nodes: np.zeros(len(nodes)), 3)
    op = build_matrix(p, seed=42)
    expect = np.zeros((4, 4))
    expect[0, 2] = -2.0
    expect[1, 3] = -6.0
    np.testing.assert_allclose(op.matrix, expect, atol=1e-10)
    assert op.residual < 1e-10
    np.testing.assert_allclose(spectrum(op), np.zeros(4), atol=1e-8)


def test_constant_shift_moves_spectrum():
    p = _problem(lambda nodes: np.full(len(nodes), 5.0), 2)
    op = build_matrix(p, seed=42)
    np.testing.assert_allclose(spectrum(op), np.full(3, 5.0), atol=1e-9)


def test_linear_potential_breaks_invariance():
    # V = x maps the top monomial out of the space; the certificate must catch it
    p = _problem(lambda nodes: nodes[:, 0], 1)
    op = build_matrix(p, seed=42)
    assert op.residual > 1e-3
    with pytest.raises(CertificationError):
        spectrum(op)


def test_certification_error_carries_residual():
    p = _problem(lambda nodes: nodes[:, 0], 1)
    op = build_matrix(p, seed=42)
    with pytest.raises(CertificationError) as exc:
        spectrum(op)
    assert exc.value.residual == pytest.approx(op.residual)


def test_eigenpairs_and_reconstruct():
    p = _problem(lambda nodes: np.full(len(nodes), 2.0), 2)
    op = build_matrix(p, seed=42)
    values, vectors = eigenpairs(op)
    np.testing.assert_allclose(values, [2.0, 2.0, 2.0], atol=1e-9)
    pts = np.linspace(-0.8, 0.8, 9)
    psi = reconstruct(p, vectors[:, 0], pts)
    assert psi.shape == (9, 1)
    r = eigenpair_residual(p, values[0], vectors[:, 0], pts[:, None])
    assert r < 1e-8


def test_reconstruct_rejects_wrong_length():
    p = _problem(lambda nodes: np.zeros(len(nodes)), 2)
    with pytest.raises(ValueError):
        reconstruct(p, np.ones(5), np.array([0.0]))


def test_build_matrix_seed_stability():
    p = _problem(lambda nodes: np.full(len(nodes), 1.5), 3)
    m1 = build_matrix(p, seed=42).matrix
    m2 = build_matrix(p, seed=7).matrix
    # different nodes, same operator
    np.testing.assert_allclose(m1, m2, atol=1e-9)
