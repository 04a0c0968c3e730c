"""Acceptance gate: the nine verification suites, one pass/fail line each.

Each test drives one named criterion through the same code path the
``verify`` subcommand uses and fails loudly with the full check table if
any single check inside the criterion misses its stated tolerance.
"""

from qes import verify


def _run(label, checks):
    failed = [c for c in checks if not c.passed]
    status = "FAIL" if failed else "PASS"
    table = "; ".join(f"{c.name}: {c.detail}" for c in checks)
    print(f"[{status}] {label} -- {table}")
    assert not failed, f"{label}: " + "; ".join(f"{c.name} ({c.detail})" for c in failed)


def test_criterion_1_elliptic_identities():
    """Jacobi and Weierstrass identities hold to 1e-12 / 1e-8 on dense samples."""
    _run("criterion 1: elliptic function identities", verify.criterion_elliptic())


def test_criterion_2_lame_band_edges():
    """All 4n+1 band edges match the finite-difference reference within 1e-3."""
    _run("criterion 2: band-edge spectra vs reference", verify.criterion_lame())


def test_criterion_3_certificates_and_controls():
    """Certified residuals below 1e-8; perturbed negatives exceed 1e-3."""
    _run("criterion 3: invariance certificates and negative controls", verify.criterion_controls())


def test_criterion_4_sl2_structure():
    """Commutation relations exact; gauged operators fit the quadratic envelope."""
    _run("criterion 4: sl2 representation structure", verify.criterion_sl2())


def test_criterion_5_decoupling_limit():
    """Interaction-free N-body spectra equal symmetrized one-body sums to 1e-8."""
    _run("criterion 5: many-body decoupling limit", verify.criterion_decoupling())


def test_criterion_6_sector_quantization():
    """Sector enumeration matches the coupling quantization locus exactly."""
    _run("criterion 6: sector counting on and off the locus", verify.criterion_sector_counts())


def test_criterion_7_coupled_channels():
    """Derived constants satisfy the substitution identities; spectra match FD."""
    _run("criterion 7: coupled-channel family", verify.criterion_coupled())


def test_criterion_8_trigonometric_limit():
    """Block closure, band gaps, isospectral pair, closed form, FD cross-check."""
    _run("criterion 8: trigonometric limit", verify.criterion_trig())


def test_criterion_9_engine_robustness():
    """Seed independence, byte-stable JSON, second-order grid convergence."""
    _run("criterion 9: engine robustness and determinism", verify.criterion_robustness())
