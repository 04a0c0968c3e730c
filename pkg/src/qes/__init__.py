"""Certified algebraic sectors of quasi-exactly-solvable operators.

Three operator families carry finite invariant polynomial spaces after a
gauge transformation and a change of variable: the even elliptic
band-edge family (four coexisting sectors), the N-body Weierstrass
family on the symmetric simplex, and a 2x2 coupled-channel family with a
trigonometric limit.  Every sector matrix is built by collocation, its
invariance is certified by a computable residual, and every algebraic
eigenvalue is cross-checked against an independent finite-difference
reference solver.
"""

from .backends import BACKEND
from .coupled import CoupledParams, TrigParams, coupled_spectrum, trig_eigenvalues
from .elliptic import WeierstrassRoots, complete_K, jacobi
from .errors import CertificationError, NumericalError, PoleError, QesError
from .lame import LameParams, full_spectrum
from .manybody import ManyBodyParams, enumerate_sectors, sector_spectrum
from .refsolver import GridSpec, fd_2channel, fd_scalar
from .report import RunReport

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CertificationError",
    "CoupledParams",
    "GridSpec",
    "LameParams",
    "ManyBodyParams",
    "NumericalError",
    "PoleError",
    "QesError",
    "RunReport",
    "TrigParams",
    "WeierstrassRoots",
    "complete_K",
    "coupled_spectrum",
    "enumerate_sectors",
    "fd_2channel",
    "fd_scalar",
    "full_spectrum",
    "jacobi",
    "sector_spectrum",
    "trig_eigenvalues",
    "__version__",
]
