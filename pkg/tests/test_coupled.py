"""Two-channel elliptic family, its gauge pair, and the trigonometric limit."""

import math

import numpy as np
import pytest

from qes import coupled
from qes.coupled import (
    CoupledParams,
    TrigParams,
    coupled_spectrum,
    potential_2x2,
    trig_block,
    trig_eigenvalues,
    trig_offset,
    trig_potential,
    trig_closed_form,
)

# seed-42 collocation values; F and G interlace and share no level
FROZEN = {
    (1, 0.6, 1.0): {
        "F": [0.84545022, 2.22402009, 8.73052968],
        "G": [0.67927940, 5.12072060],
    },
    (2, 0.3, 0.5): {
        "F": [1.10887366, 2.13589863, 9.53845550, 9.58518146, 24.83159075],
        "G": [0.69303934, 4.75947279, 4.99583824, 16.25164962],
    },
    (1, 0.3, 0.3): {
        "F": [0.92927479, 1.30178437, 8.91894085],
        "G": [0.26815943, 4.18184057],
    },
}


def test_params_validation():
    with pytest.raises(ValueError):
        CoupledParams(0, 0.5, 1.0)
    with pytest.raises(ValueError):
        CoupledParams(1, 1.0, 5.0)
    # real off-diagonal coupling needs 2|b| >= k^2(4m+1)
    with pytest.raises(ValueError):
        CoupledParams(1, 0.6, 0.3)


def test_derived_constants():
    p = CoupledParams(1, 0.6, 1.0)
    assert p.a_const == pytest.approx(0.36 * 7.0)
    assert p.theta_sq == pytest.approx(4.0 - 0.6**4 * 25.0)
    assert p.theta == pytest.approx(math.sqrt(p.theta_sq))
    assert p.kappa1 == pytest.approx(-p.theta / (2.0 + 0.36 * 5.0))


def test_potential_is_symmetric():
    p = CoupledParams(1, 0.6, 1.0)
    v = potential_2x2(np.linspace(0.0, 2.0, 11), p)
    assert v.shape == (11, 2, 2)
    np.testing.assert_allclose(v[:, 0, 1], v[:, 1, 0], atol=1e-15)


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_frozen_sector_spectra(key):
    p = CoupledParams(*key)
    for sector, expect in FROZEN[key].items():
        r = coupled_spectrum(p, sector, seed=42)
        assert r.residual < 1e-8
        np.testing.assert_allclose(np.sort(r.values), expect, atol=1e-6)
        assert len(r.values) == (2 * p.m + 1 if sector == "F" else 2 * p.m)


def test_sector_dimensions():
    p = CoupledParams(2, 0.3, 0.5)
    assert coupled_spectrum(p, "F", seed=42).dim == 5
    assert coupled_spectrum(p, "G", seed=42).dim == 4


def test_theta_zero_boundary():
    # 2b = k^2(4m+1) exactly, with dyadic parameters so theta_sq is exactly 0
    p = CoupledParams(1, 0.5, 0.625)
    assert p.theta == 0.0
    r = coupled_spectrum(p, "F", seed=42)
    np.testing.assert_allclose(np.sort(r.values), [0.96987516, 1.875, 8.78012484], atol=1e-7)
    with pytest.raises(ValueError):
        coupled.gauge_G(p)


def test_unknown_sector_rejected():
    p = CoupledParams(1, 0.6, 1.0)
    with pytest.raises(ValueError):
        coupled_spectrum(p, "H", seed=42)


def test_perturbed_constant_breaks_invariance():
    p = CoupledParams(1, 0.6, 1.0)
    assert coupled.perturbed_residual(p, sector="F", seed=42, a_shift=0.1) > 1e-3


def test_trig_limit_continuity():
    """Small k spectra approach the trigonometric pair eigenvalues."""
    p = CoupledParams(1, 0.02, 0.2)
    vals = np.sort(
        np.concatenate(
            [coupled_spectrum(p, "F", seed=42).values, coupled_spectrum(p, "G", seed=42).values]
        )
    )
    trig = []
    for fam in ("E", "G"):
        for q in (0, 1, 2):
            trig.extend(trig_eigenvalues(TrigParams(1, 0.2, q), fam))
    # every sector value sits within O(k^2) of a trigonometric level
    err = np.abs(np.asarray(trig)[:, None] - vals[None, :]).min(axis=0).max()
    assert err < 5e-3


def test_trig_block_structure():
    t = TrigParams(2, 0.4, 1)
    b = trig_block(t, "E")
    np.testing.assert_allclose(b, [[2.25, 0.4], [0.4, 0.25]], atol=1e-14)
    g = trig_block(t, "G")
    np.testing.assert_allclose(g, [[2.25, -0.4], [-0.4, 0.25]], atol=1e-14)
    assert trig_block(TrigParams(2, 0.4, 0), "E").shape == (1, 1)
    with pytest.raises(ValueError):
        trig_block(t, "X")


def test_trig_families_isospectral():
    for n, b, p in [(1, 0.3, 1), (2, 0.5, 3), (3, 0.2, 2)]:
        t = TrigParams(n, b, p)
        np.testing.assert_allclose(
            trig_eigenvalues(t, "E"), trig_eigenvalues(t, "G"), atol=1e-14
        )


def test_trig_band_gaps():
    t = TrigParams(2, 0.4, 1)
    vals = trig_eigenvalues(t, "E")
    assert vals[1] - vals[0] == pytest.approx(2.0 * math.sqrt(0.16 + 4.0 * 0.25), abs=1e-13)


def test_trig_closed_form_at_b_zero():
    # with b = 0 the shifted closed form and the direct blocks must coincide
    for n in (1, 2, 3):
        for p in range(0, 4):
            t = TrigParams(n, 0.0, p)
            direct = trig_eigenvalues(t, "E")
            closed = np.sort(trig_closed_form(t))
            for v in direct:
                assert np.abs(closed - v).min() < 1e-12


def test_trig_offset_reported():
    t = TrigParams(2, 0.3, 1)
    assert trig_offset(t) == pytest.approx(2.0 * 0.3, abs=1e-12)


def test_trig_potential_values():
    x = np.array([0.0, np.pi / 4.0])
    v = trig_potential(x, 0.5)
    np.testing.assert_allclose(v[0], [[0.5, 0.0], [0.0, -0.5]], atol=1e-15)
    np.testing.assert_allclose(v[1], [[0.0, 0.5], [0.5, 0.0]], atol=1e-15)


def test_trig_params_validation():
    with pytest.raises(ValueError):
        TrigParams(0, 0.1, 1)
    with pytest.raises(ValueError):
        TrigParams(1, 0.1, -1)
