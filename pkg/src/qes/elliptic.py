"""Real-axis elliptic special functions.

Complete elliptic integrals via the arithmetic-geometric mean, the Jacobi
triple (sn, cn, dn) via descending Landen transformation, and the two
real-axis forms of the Weierstrass function expressed through sn**2:

* ``wp_shifted``: the bounded form on the line shifted by the imaginary
  half-period, taking values in [e3, e2];
* ``wp_real``: the singular form on the real axis with double poles on the
  lattice spanned by twice the real half-period.

No complex arithmetic is used anywhere; the imaginary half-period never
needs a numeric value because both forms reduce to sn**2 identities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .backends import jacobi_arrays
from .errors import PoleError

__all__ = [
    "complete_K",
    "jacobi",
    "WeierstrassRoots",
    "wp_shifted",
    "wp_real",
]


def _check_modulus(k: float, allow_one: bool = True) -> float:
    k = float(k)
    if not math.isfinite(k) or k < 0.0 or k > 1.0:
        raise ValueError(f"elliptic modulus must lie in [0, 1], got {k}")
    if k == 1.0 and not allow_one:
        raise PoleError("complete elliptic integral diverges at modulus 1")
    return k


def complete_K(k: float) -> float:
    """Complete elliptic integral of the first kind, K(k) = pi / (2 agm(1, k'))."""
    k = _check_modulus(k, allow_one=False)
    a, b = 1.0, math.sqrt(1.0 - k * k)
    # quadratic convergence; the cap guards against ulp-level oscillation
    for _ in range(40):
        if abs(a - b) <= 4e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


def jacobi(x, k: float):
    """Jacobi elliptic functions (sn, cn, dn) of modulus ``k``.

    ``x`` may be a scalar or an ndarray; the return mirrors the input shape.
    """
    k = _check_modulus(k)
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("jacobi argument must be finite")
    flat = np.atleast_1d(arr).ravel()
    sn, cn, dn = jacobi_arrays(flat, k)
    if arr.ndim == 0:
        return float(sn[0]), float(cn[0]), float(dn[0])
    shape = arr.shape
    return sn.reshape(shape), cn.reshape(shape), dn.reshape(shape)


@dataclass(frozen=True)
class WeierstrassRoots:
    """Root triple (e1, e2, e3) of the Weierstrass cubic, from (e2, e3) input.

    e1 is forced to -(e2 + e3) so the roots sum to zero exactly.  Inputs
    violating the strict ordering e1 > e2 > e3 are rejected rather than
    reordered: silent reordering would change the modulus invisibly.

    Derived quantities:
      g2, g3  invariants of the cubic 4 t^3 - g2 t - g3
      k       modulus, k^2 = (e2 - e3) / (e1 - e3)
      s       scale sqrt(e1 - e3) mapping x to the sn argument
      alpha   real half-period K(k) / s
    """

    e2: float
    e3: float

    def __post_init__(self):
        e2, e3 = float(self.e2), float(self.e3)
        e1 = -(e2 + e3)
        if not (e1 > e2 > e3):
            raise ValueError(
                f"roots must satisfy e1 > e2 > e3 with e1 = -(e2+e3); "
                f"got e1={e1}, e2={e2}, e3={e3}"
            )
        object.__setattr__(self, "e2", e2)
        object.__setattr__(self, "e3", e3)

    @property
    def e1(self) -> float:
        return -(self.e2 + self.e3)

    @property
    def g2(self) -> float:
        e1, e2, e3 = self.e1, self.e2, self.e3
        return -4.0 * (e1 * e2 + e2 * e3 + e3 * e1)

    @property
    def g3(self) -> float:
        return 4.0 * self.e1 * self.e2 * self.e3

    @property
    def k(self) -> float:
        return math.sqrt((self.e2 - self.e3) / (self.e1 - self.e3))

    @property
    def s(self) -> float:
        return math.sqrt(self.e1 - self.e3)

    @property
    def alpha(self) -> float:
        return complete_K(self.k) / self.s


def wp_shifted(x, r: WeierstrassRoots):
    """Weierstrass function on the imaginary-half-period-shifted line.

    Equals e3 + (e2 - e3) sn^2(s x, k): real, smooth and bounded in [e3, e2]
    for every real x.
    """
    sn, _, _ = jacobi(np.asarray(x, dtype=np.float64) * r.s, r.k)
    return r.e3 + (r.e2 - r.e3) * sn * sn


def wp_real(x, r: WeierstrassRoots):
    """Weierstrass function on the real axis: e3 + (e1 - e3) / sn^2(s x, k).

    Diverges like 1/x^2 at the origin and at every multiple of 2 alpha.
    Raises :class:`PoleError` exactly on the singular lattice.
    """
    sn, _, _ = jacobi(np.asarray(x, dtype=np.float64) * r.s, r.k)
    if np.any(np.asarray(sn) == 0.0):
        raise PoleError("wp_real evaluated on its singular lattice (x in 2*alpha*Z)")
    return r.e3 + (r.e1 - r.e3) / (sn * sn)
