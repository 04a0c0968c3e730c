"""Kernel backend selection: numba-jitted loops vs pure-numpy vectorized code.

The one genuinely hot kernel in this package is the evaluation of the
Jacobi elliptic triple (sn, cn, dn) on arrays of points; it sits inside
every jet pass of the collocation engine and inside every finite-difference
potential assembly.  Both backends implement the same descending Landen
transformation seeded by the arithmetic-geometric mean, iterated until the
residual modulus drops below 1e-12 (one further implicit AGM step then puts
the error below double-precision roundoff).

Backend choice is made once at import time from the environment variable
``QES_BACKEND``:

* ``auto`` (default, or unset): use numba when importable, else numpy
* ``numba``: require the jitted kernels, raise if numba is missing
* ``numpy``: force the pure-numpy path

Both implementations are importable directly (``jacobi_numpy``,
``jacobi_numba``) for cross-checking and benchmarks regardless of the
selected default.
"""

from __future__ import annotations

import math
import os

import numpy as np

_AGM_TOL = 1.0e-12
_AGM_MAX = 24


def _agm_sequence(k: float):
    """AGM iterates for (1, k'): arrays (a_i, b_i), the limit, and depth."""
    emc = 1.0 - k * k
    a = 1.0
    em = np.empty(_AGM_MAX)
    en = np.empty(_AGM_MAX)
    c = a
    level = 0
    for i in range(_AGM_MAX):
        level = i
        em[i] = a
        emc = math.sqrt(emc)
        en[i] = emc
        c = 0.5 * (a + emc)
        if abs(a - emc) <= _AGM_TOL * a:
            break
        emc = emc * a
        a = c
    return em[: level + 1], en[: level + 1], c, level


def jacobi_numpy(x: np.ndarray, k: float):
    """sn, cn, dn at every entry of ``x`` for modulus ``k``, vectorized."""
    x = np.asarray(x, dtype=np.float64)
    if k == 1.0:
        cn = 1.0 / np.cosh(x)
        return np.tanh(x), cn, cn.copy()
    em, en, agm, level = _agm_sequence(k)
    u = agm * x
    sn = np.sin(u)
    cn = np.cos(u)
    dn = np.ones_like(u)
    at_zero = sn == 0.0
    sn_safe = np.where(at_zero, 1.0, sn)
    a = cn / sn_safe
    c = a * agm
    for i in range(level, -1, -1):
        b = em[i]
        a = c * a
        c = c * dn
        dn = (en[i] + a) / (b + a)
        a = c / b
    inv = 1.0 / np.sqrt(c * c + 1.0)
    sn_out = np.where(sn >= 0.0, inv, -inv)
    cn_out = c * sn_out
    if np.any(at_zero):
        sn_out = np.where(at_zero, 0.0, sn_out)
        cn_out = np.where(at_zero, np.where(np.cos(u) >= 0.0, 1.0, -1.0), cn_out)
        dn = np.where(at_zero, 1.0, dn)
    return sn_out, cn_out, dn


def _build_numba_kernel():
    from numba import njit

    @njit(cache=True)
    def jacobi_kernel(x, k):  # pragma: no cover - exercised via wrapper
        n = x.shape[0]
        sn = np.empty(n)
        cn = np.empty(n)
        dn = np.empty(n)
        if k == 1.0:
            for j in range(n):
                sn[j] = math.tanh(x[j])
                cn[j] = 1.0 / math.cosh(x[j])
                dn[j] = cn[j]
            return sn, cn, dn
        em = np.empty(_AGM_MAX)
        en = np.empty(_AGM_MAX)
        emc = 1.0 - k * k
        a0 = 1.0
        agm = a0
        level = 0
        for i in range(_AGM_MAX):
            level = i
            em[i] = a0
            emc = math.sqrt(emc)
            en[i] = emc
            agm = 0.5 * (a0 + emc)
            if abs(a0 - emc) <= _AGM_TOL * a0:
                break
            emc = emc * a0
            a0 = agm
        for j in range(n):
            u = agm * x[j]
            s = math.sin(u)
            co = math.cos(u)
            d = 1.0
            if s == 0.0:
                sn[j] = 0.0
                cn[j] = 1.0 if co >= 0.0 else -1.0
                dn[j] = 1.0
                continue
            a = co / s
            c = a * agm
            for i in range(level, -1, -1):
                b = em[i]
                a = c * a
                c = c * d
                d = (en[i] + a) / (b + a)
                a = c / b
            inv = 1.0 / math.sqrt(c * c + 1.0)
            sn[j] = inv if s >= 0.0 else -inv
            cn[j] = c * sn[j]
            dn[j] = d
        return sn, cn, dn

    def jacobi_numba(x, k):
        x = np.ascontiguousarray(x, dtype=np.float64)
        return jacobi_kernel(x, float(k))

    return jacobi_numba


def _resolve_backend():
    flag = os.environ.get("QES_BACKEND", "auto").strip().lower() or "auto"
    if flag not in ("auto", "numba", "numpy"):
        raise ValueError(f"QES_BACKEND must be auto, numba or numpy (got {flag!r})")
    if flag == "numpy":
        return "numpy", jacobi_numpy
    try:
        kernel = _build_numba_kernel()
    except ImportError:
        if flag == "numba":
            raise ImportError("QES_BACKEND=numba but numba is not installed")
        return "numpy", jacobi_numpy
    return "numba", kernel


BACKEND, jacobi_arrays = _resolve_backend()

try:
    jacobi_numba = _build_numba_kernel() if BACKEND != "numba" else jacobi_arrays
except ImportError:  # pragma: no cover
    jacobi_numba = None
