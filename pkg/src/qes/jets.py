"""Order-2 forward jets: (value, first, second derivative) triples.

A ``Jet2`` carries f, f' and f'' with respect to one designated coordinate.
Components may be floats or numpy arrays (one entry per sample node), so a
single jet pass evaluates a Hamiltonian at every collocation node at once.
Every operator appearing in this package is second order, so order 2 is
exact, not a truncation of anything deeper.
"""

from __future__ import annotations

import numpy as np

from . import elliptic
from .elliptic import WeierstrassRoots

__all__ = [
    "Jet2",
    "seed",
    "const",
    "jet_sqrt",
    "sin_jet",
    "cos_jet",
    "jacobi_jet",
    "wp_shifted_jet",
    "wp_real_jet",
]


class Jet2:
    """Truncated second-order Taylor coefficient triple with exact arithmetic."""

    __slots__ = ("v", "d1", "d2")

    def __init__(self, v, d1=0.0, d2=0.0):
        self.v = v
        self.d1 = d1
        self.d2 = d2

    def __repr__(self):
        return f"Jet2({self.v!r}, {self.d1!r}, {self.d2!r})"

    def _coerce(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            return other
        return Jet2(other, 0.0, 0.0)

    def __add__(self, other):
        o = self._coerce(other)
        return Jet2(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return Jet2(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2)

    def __rsub__(self, other):
        o = self._coerce(other)
        return Jet2(o.v - self.v, o.d1 - self.d1, o.d2 - self.d2)

    def __neg__(self):
        return Jet2(-self.v, -self.d1, -self.d2)

    def __mul__(self, other):
        o = self._coerce(other)
        return Jet2(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if np.any(np.asarray(o.v) == 0.0):
            raise ZeroDivisionError("division by a jet with zero value")
        q = self.v / o.v
        q1 = (self.d1 - q * o.d1) / o.v
        q2 = (self.d2 - 2.0 * q1 * o.d1 - q * o.d2) / o.v
        return Jet2(q, q1, q2)

    def __rtruediv__(self, other):
        return self._coerce(other).__truediv__(self)

    def __pow__(self, p):
        if p == 0:
            return Jet2(np.ones_like(np.asarray(self.v, dtype=float)) if np.ndim(self.v) else 1.0)
        if p == 1:
            return self
        # v**(p-2) is the only fractional-power evaluation; callers keep the
        # base positive for non-integer p (domain margins guarantee it).
        vp2 = self.v ** (p - 2)
        vp1 = vp2 * self.v
        vp = vp1 * self.v
        return Jet2(
            vp,
            p * vp1 * self.d1,
            p * ((p - 1) * vp2 * self.d1 * self.d1 + vp1 * self.d2),
        )


def seed(x) -> Jet2:
    """The identity coordinate jet (x, 1, 0)."""
    if np.ndim(x):
        x = np.asarray(x, dtype=np.float64)
        return Jet2(x, np.ones_like(x), np.zeros_like(x))
    return Jet2(float(x), 1.0, 0.0)


def const(c) -> Jet2:
    """A constant lift (c, 0, 0)."""
    if np.ndim(c):
        c = np.asarray(c, dtype=np.float64)
        return Jet2(c, np.zeros_like(c), np.zeros_like(c))
    return Jet2(float(c), 0.0, 0.0)


def _compose(fv, f1, f2, g: Jet2) -> Jet2:
    # chain rule for outer derivatives (fv, f1, f2) at g.v
    return Jet2(fv, f1 * g.d1, f2 * g.d1 * g.d1 + f1 * g.d2)


def jet_sqrt(a: Jet2) -> Jet2:
    if np.any(np.asarray(a.v) <= 0.0):
        raise ValueError("jet_sqrt requires a strictly positive value part")
    r = np.sqrt(a.v)
    return _compose(r, 0.5 / r, -0.25 / (r * a.v), a)


def sin_jet(a: Jet2) -> Jet2:
    s, c = np.sin(a.v), np.cos(a.v)
    return _compose(s, c, -s, a)


def cos_jet(a: Jet2) -> Jet2:
    s, c = np.sin(a.v), np.cos(a.v)
    return _compose(c, -s, -c, a)


def jacobi_jet(x: Jet2, k: float):
    """Lift sn, cn, dn through a jet via sn' = cn dn, cn' = -sn dn, dn' = -k^2 sn cn."""
    s0, c0, d0 = elliptic.jacobi(x.v, k)
    k2 = k * k
    sn = _compose(s0, c0 * d0, -s0 * (d0 * d0 + k2 * c0 * c0), x)
    cn = _compose(c0, -s0 * d0, c0 * (k2 * s0 * s0 - d0 * d0), x)
    dn = _compose(d0, -k2 * s0 * c0, -k2 * d0 * (c0 * c0 - s0 * s0), x)
    return sn, cn, dn


def wp_shifted_jet(x: Jet2, r: WeierstrassRoots) -> Jet2:
    sn, _, _ = jacobi_jet(Jet2(x.v * r.s, x.d1 * r.s, x.d2 * r.s), r.k)
    return r.e3 + (r.e2 - r.e3) * sn * sn


def wp_real_jet(x: Jet2, r: WeierstrassRoots) -> Jet2:
    sn, _, _ = jacobi_jet(Jet2(x.v * r.s, x.d1 * r.s, x.d2 * r.s), r.k)
    if np.any(np.asarray(sn.v) == 0.0):
        raise elliptic.PoleError("wp_real_jet evaluated on its singular lattice")
    return r.e3 + (r.e1 - r.e3) / (sn * sn)
