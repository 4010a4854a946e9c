"""Complex QZ: generalized Schur decomposition of a dense pair, plus
eigenvalue / eigenvector extraction from the triangular pair.

Single complex shifts only; deflated infinite eigenvalues are kept as
beta = 0 diagonal entries and flagged at extraction time.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .dense_core import EPS, as_dense, frobenius_norm

DEFLATE_EPS = EPS


class QzConvergenceError(RuntimeError):
    """QZ ran out of sweeps; .partial carries the progress so far."""

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


@dataclass
class GeneralizedEigenvalue:
    alpha: complex
    beta: complex
    finite: bool

    @property
    def value(self):
        return self.alpha / self.beta if self.finite else None


@dataclass
class GeneralizedSchur:
    s_a: np.ndarray
    s_b: np.ndarray
    q: np.ndarray
    z: np.ndarray

    @property
    def size(self):
        return self.s_a.shape[0]

    def eigenvalues(self):
        """Diagonal (alpha, beta) pairs; beta within s*eps of zero relative
        to |alpha| + |beta| marks an infinite eigenvalue."""
        s = self.size
        out = []
        for i in range(s):
            alpha = complex(self.s_a[i, i])
            beta = complex(self.s_b[i, i])
            finite = abs(beta) > DEFLATE_EPS * (abs(alpha) + abs(beta)) * s
            out.append(GeneralizedEigenvalue(alpha, beta, finite))
        return out


def _check_pair(a, b):
    if a.shape[0] != a.shape[1] or b.shape[0] != b.shape[1]:
        raise ValueError("matrices of the pair must be square")
    if a.shape != b.shape:
        raise ValueError(f"pair shape mismatch: {a.shape} vs {b.shape}")


def hessenberg_triangular(a, b):
    """Unitary reduction to (upper Hessenberg, upper triangular).

    Returns (h, t, q, z) with q^H a z = h and q^H b z = t. Standard first
    phase of QZ: QR of b followed by Givens chasing on a (Golub & Van Loan,
    "Matrix Computations", sec. 7.7).
    """
    a = as_dense(a)
    b = as_dense(b)
    _check_pair(a, b)
    n = a.shape[0]
    q = np.eye(n, dtype=np.complex128, order="F")
    z = np.eye(n, dtype=np.complex128, order="F")
    _kernels.hess_tri_inplace(a, b, q, z)
    return a, b, q, z


def qz_iterate(h, t, q, z, max_sweeps=None):
    """Drive a Hessenberg/triangular pair to generalized Schur form.

    Deflation uses |H[i+1, i]| <= eps * (|H[i, i]| + |H[i+1, i+1]|). Raises
    QzConvergenceError carrying partial progress after max_sweeps (default
    30 * n) shifted sweeps.
    """
    h = as_dense(h)
    t = as_dense(t)
    q = as_dense(q)
    z = as_dense(z)
    n = h.shape[0]
    if max_sweeps is None:
        max_sweeps = 30 * n
    status = _kernels.qz_iterate_inplace(h, t, q, z, DEFLATE_EPS, max_sweeps)
    gs = GeneralizedSchur(h, t, q, z)
    if status != 0:
        raise QzConvergenceError(
            f"QZ did not converge within {max_sweeps} sweeps", gs
        )
    return gs


def generalized_schur(a, b, max_sweeps=None):
    """Full decomposition: q^H a z = s_a, q^H b z = s_b, both triangular."""
    h, t, q, z = hessenberg_triangular(a, b)
    return qz_iterate(h, t, q, z, max_sweeps=max_sweeps)


def eig_triangular_pair(gs):
    """Eigenvalues of the triangular pair with right eigenvectors.

    Returns a list of (GeneralizedEigenvalue, y) where y solves
    (s_a - lambda s_b) y = 0 by back substitution with unit 2-norm;
    infinite eigenvalues get y = None.
    """
    s = gs.size
    scale_a = frobenius_norm(gs.s_a)
    scale_b = frobenius_norm(gs.s_b)
    out = []
    for i, ev in enumerate(gs.eigenvalues()):
        if not ev.finite:
            out.append((ev, None))
            continue
        lam = ev.value
        floor = EPS * (scale_a + abs(lam) * scale_b)
        if floor == 0.0:
            floor = EPS
        y = _kernels.tri_pair_eigvec(gs.s_a, gs.s_b, lam, i, floor)
        out.append((ev, y))
    return out
