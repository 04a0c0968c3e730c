"""Polynomial bases: univariate monomials, symmetric invariants, least-squares fit."""

import itertools
import math

import numpy as np
import pytest

from qes.errors import ConditioningError
from qes.jets import const, seed
from qes.polybasis import MAX_SYM_DIM, MAX_UNI_DEGREE, SymBasis, UniBasis, fit, tau_eval


def _elementary_symmetric(z, r):
    return sum(math.prod(c) for c in itertools.combinations(z, r))


def test_tau_eval_matches_elementary_symmetric():
    z = np.array([[0.3, 1.1, 2.5], [0.1, 0.2, 0.4]])
    tau = tau_eval(z)
    assert tau.shape == (2, 3)
    for i in range(2):
        for r in range(1, 4):
            assert tau[i, r - 1] == pytest.approx(_elementary_symmetric(z[i], r), rel=1e-13)


def test_unibasis_eval_matrix():
    b = UniBasis(3)
    assert b.dim == 4
    y = np.array([0.0, 1.0, 2.0])
    m = b.eval_matrix(y)
    np.testing.assert_allclose(m, [[1, 0, 0, 0], [1, 1, 1, 1], [1, 2, 4, 8]], atol=1e-14)


def test_unibasis_jets():
    b = UniBasis(2)
    y = np.array([0.5, 1.5])
    jets = b.eval_jets(seed(y))
    # element y^2 has derivative 2y and curvature 2
    np.testing.assert_allclose(jets[2].v, y * y, atol=1e-14)
    np.testing.assert_allclose(jets[2].d1, 2.0 * y, atol=1e-14)
    np.testing.assert_allclose(jets[2].d2, 2.0 * np.ones_like(y), atol=1e-14)


def test_unibasis_degree_cap():
    UniBasis(MAX_UNI_DEGREE)
    with pytest.raises(ValueError):
        UniBasis(MAX_UNI_DEGREE + 1)
    with pytest.raises(ValueError):
        UniBasis(-1)


def test_symbasis_dimension():
    # graded space of symmetric polynomials in tau of total weighted degree <= m
    for n, m in [(2, 1), (2, 2), (3, 1), (3, 2)]:
        b = SymBasis(n, m)
        assert b.dim == math.comb(n + m, n)


def test_symbasis_first_element_is_constant():
    b = SymBasis(2, 2)
    z = np.array([[0.4, 0.9]])
    m = b.eval_matrix(z)
    assert m.shape == (1, b.dim)
    assert m[0, 0] == pytest.approx(1.0)


def test_symbasis_composed_with_tau_is_symmetric():
    # the basis itself is monomial in the invariant coordinates; symmetry
    # under particle exchange enters through tau_eval upstream
    b = SymBasis(3, 2)
    z = np.array([[0.2, 0.7, 1.3]])
    zp = np.array([[1.3, 0.2, 0.7]])
    np.testing.assert_allclose(b.eval_matrix(tau_eval(z)), b.eval_matrix(tau_eval(zp)), atol=1e-12)


def test_symbasis_dimension_cap():
    with pytest.raises(ValueError):
        SymBasis(6, 12)  # C(18, 6) = 18564 > MAX_SYM_DIM
    assert MAX_SYM_DIM >= SymBasis(2, 2).dim


def test_symbasis_jets_match_values():
    b = SymBasis(2, 2)
    z = np.array([[0.3, 0.8], [0.5, 1.1]])
    vals = b.eval_matrix(z)
    jets = b.eval_jets([seed(z[:, 0]), const(z[:, 1])])
    for j, jj in enumerate(jets):
        np.testing.assert_allclose(np.broadcast_to(np.asarray(jj.v), (2,)), vals[:, j], atol=1e-13)


def test_fit_exact_span():
    y = np.linspace(0.0, 2.0, 9)
    b = UniBasis(3)
    target = 2.0 - y + 0.5 * y**3
    res = fit(b.eval_matrix(y), target)
    np.testing.assert_allclose(res.coefficients, [2.0, -1.0, 0.0, 0.5], atol=1e-12)
    assert res.residual < 1e-13


def test_fit_out_of_span_reports_residual():
    y = np.linspace(0.0, 2.0, 30)
    b = UniBasis(2)
    res = fit(b.eval_matrix(y), np.exp(y))
    assert res.residual > 1e-3


def test_fit_rank_deficiency_raises():
    # duplicated nodes collapse the Vandermonde rank
    y = np.full(8, 0.7)
    b = UniBasis(3)
    with pytest.raises(ConditioningError):
        fit(b.eval_matrix(y), np.ones(8))


def test_fit_rejects_underdetermined():
    # two samples cannot pin four coefficients; surfaces as a rank failure
    b = UniBasis(3)
    y = np.array([0.1, 0.2])
    with pytest.raises(ConditioningError):
        fit(b.eval_matrix(y), np.zeros(2))
