"""Periodic finite-difference reference solvers and spectrum matching."""

import numpy as np
import pytest

from qes.errors import NumericalError
from qes.refsolver import GridSpec, fd_2channel, fd_scalar, match, richardson

TWO_PI = 2.0 * np.pi


def test_gridspec_validation():
    g = GridSpec(TWO_PI, 128)
    assert g.h == pytest.approx(TWO_PI / 128)
    assert len(g.nodes) == 128
    assert g.refined().points == 256
    with pytest.raises(ValueError):
        GridSpec(TWO_PI, 32)  # too coarse to trust
    with pytest.raises(ValueError):
        GridSpec(-1.0, 128)


def test_free_particle_spectrum():
    # -psi'' on the circle: 0, 1, 1, 4, 4, 9, 9 with O(h^2) discretization error
    # worst mode q = 3: error ~ q^4 h^2 / 12 = 2.5e-4 at this resolution
    vals = fd_scalar(lambda x: np.zeros_like(x), GridSpec(TWO_PI, 1024), count=7)
    np.testing.assert_allclose(vals, [0, 1, 1, 4, 4, 9, 9], atol=5e-4)


def test_shift_identity():
    # V -> V + c moves every level by exactly c up to roundoff at modest size
    g = GridSpec(TWO_PI, 64)
    base = fd_scalar(lambda x: np.sin(x) ** 2, g, count=6)
    lift = fd_scalar(lambda x: np.sin(x) ** 2 + 2.5, g, count=6)
    assert np.abs(lift - base - 2.5).max() < 1e-12


def test_richardson_tightens_free_particle():
    coarse = fd_scalar(lambda x: np.zeros_like(x), GridSpec(TWO_PI, 256), count=7)
    fine = fd_scalar(lambda x: np.zeros_like(x), GridSpec(TWO_PI, 512), count=7)
    extr = richardson(coarse, fine)
    exact = np.array([0, 1, 1, 4, 4, 9, 9], dtype=float)
    worst_plain = np.abs(fine - exact).max()
    worst_extr = np.abs(extr - exact).max()
    assert worst_extr < worst_plain / 3.0


def test_second_order_convergence():
    exact = 9.0  # q = 3 mode of the free particle
    e256 = fd_scalar(lambda x: np.zeros_like(x), GridSpec(TWO_PI, 256), count=7)[-1]
    e512 = fd_scalar(lambda x: np.zeros_like(x), GridSpec(TWO_PI, 512), count=7)[-1]
    ratio = (exact - e256) / (exact - e512)
    assert ratio == pytest.approx(4.0, abs=0.1)


def test_richardson_truncates_to_common_length():
    out = richardson(np.array([1.0, 2.0, 3.0]), np.array([1.0, 2.0, 3.0, 4.0]))
    assert len(out) == 3
    np.testing.assert_allclose(out, [1.0, 2.0, 3.0], atol=1e-14)


def test_two_channel_decoupled_union():
    # block-diagonal V: spectrum is the union of the two scalar problems
    def pot(x):
        out = np.zeros((len(x), 2, 2))
        out[:, 0, 0] = np.cos(x)
        out[:, 1, 1] = 2.0 + np.sin(x)
        return out

    g = GridSpec(TWO_PI, 256)
    both = fd_2channel(pot, g, count=8)
    a = fd_scalar(np.cos, g, count=8)
    b = fd_scalar(lambda x: 2.0 + np.sin(x), g, count=8)
    union = np.sort(np.concatenate([a, b]))[:8]
    np.testing.assert_allclose(both, union, atol=1e-10)


def test_two_channel_rejects_asymmetric_potential():
    def pot(x):
        out = np.zeros((len(x), 2, 2))
        out[:, 0, 1] = 1.0
        out[:, 1, 0] = -1.0
        return out

    with pytest.raises(ValueError):
        fd_2channel(pot, GridSpec(TWO_PI, 64), count=4)


def test_fd_rejects_nonfinite_potential():
    with pytest.raises(NumericalError):
        fd_scalar(lambda x: np.full_like(x, np.nan), GridSpec(TWO_PI, 64), count=4)


def test_match_pairs_nearest_without_reuse():
    verdicts = match([1.0, 2.0], [0.9995, 2.1, 5.0], tol=1e-2)
    assert [v.passed for v in verdicts] == [True, False]
    assert verdicts[0].reference == pytest.approx(0.9995)
    assert verdicts[0].error == pytest.approx(5e-4)
    # no reuse: two near-identical values must consume two references
    verdicts = match([1.0, 1.0], [1.0, 3.0], tol=1e-2)
    assert [v.passed for v in verdicts] == [True, False]


def test_match_single_displacement():
    # one value off by 2 tol: exactly that verdict fails
    ref = np.array([0.0, 1.0, 4.0])
    verdicts = match([0.0, 1.0 + 2e-3, 4.0], ref, tol=1e-3)
    assert [v.passed for v in verdicts] == [True, False, True]


def test_match_requires_enough_references():
    with pytest.raises(ValueError):
        match([1.0, 2.0], [1.0], tol=1e-3)
