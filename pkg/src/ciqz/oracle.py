"""Test support: synthetic pencils with prescribed spectra, a full dense
reference solve, and a determinant-based spot check that stays independent
of the QZ kernel.

The generator builds a pair from its canonical block form, A = T^-1 J' S^-1
and B = T^-1 N' S^-1 with J' = blkdiag(Jordan part, I) and
N' = blkdiag(I, nilpotent part), so eigenvalues, Jordan structure and the
count of infinite eigenvalues are known exactly by construction.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import qr_factor_inplace, form_q_inplace
from .dense_core import (
    SingularMatrixError,
    as_dense,
    lu_factor,
    lu_solve,
)
from .qz_kernel import generalized_schur


@dataclass(frozen=True)
class SyntheticSpec:
    """Finite spectrum as (eigenvalue, block size) pairs plus sizes of the
    nilpotent blocks carrying infinite eigenvalues; cond caps the condition
    number of the random transforms."""

    jordan_blocks: tuple
    nilpotent_sizes: tuple = ()
    cond: float = 1.0

    def __post_init__(self):
        object.__setattr__(
            self,
            "jordan_blocks",
            tuple((complex(lam), int(size)) for lam, size in self.jordan_blocks),
        )
        object.__setattr__(
            self, "nilpotent_sizes", tuple(int(s) for s in self.nilpotent_sizes)
        )
        if not self.jordan_blocks and not self.nilpotent_sizes:
            raise ValueError("spec describes an empty pencil")
        for _, size in self.jordan_blocks:
            if size < 1:
                raise ValueError(f"jordan block size must be >= 1, got {size}")
        for size in self.nilpotent_sizes:
            if size < 1:
                raise ValueError(f"nilpotent block size must be >= 1, got {size}")
        if not (self.cond >= 1.0):
            raise ValueError(f"cond must be >= 1, got {self.cond}")

    @property
    def n(self):
        d = sum(size for _, size in self.jordan_blocks)
        return d + sum(self.nilpotent_sizes)

    @property
    def finite_count(self):
        return sum(size for _, size in self.jordan_blocks)


@dataclass
class GroundTruth:
    eigenvalues: np.ndarray
    infinite_count: int
    eigenvectors: np.ndarray = field(repr=False)
    s: np.ndarray = field(repr=False)
    t: np.ndarray = field(repr=False)


def _jordan(lam, size):
    j = np.eye(size, dtype=np.complex128) * lam
    for i in range(size - 1):
        j[i, i + 1] = 1.0
    return j


def _blkdiag(blocks, n):
    out = np.zeros((n, n), dtype=np.complex128)
    at = 0
    for blk in blocks:
        k = blk.shape[0]
        out[at : at + k, at : at + k] = blk
        at += k
    return out


def random_unitary(n, rng):
    """Haar-ish unitary from the in-repo QR of a complex Gaussian matrix."""
    g = as_dense(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    tau = np.zeros(n, dtype=np.float64)
    qr_factor_inplace(g, tau)
    q = np.eye(n, dtype=np.complex128, order="F")
    form_q_inplace(g, tau, q)
    return q


def _conditioned_transform(n, cond, rng):
    """Product of two random unitaries around a log-spaced diagonal scaling,
    so the condition number equals cond exactly."""
    u1 = random_unitary(n, rng)
    u2 = random_unitary(n, rng)
    if n == 1:
        d = np.ones(1)
    else:
        d = np.logspace(-0.5 * math.log10(cond), 0.5 * math.log10(cond), n)
    return u1 * d @ u2


def generate(spec, seed, identity_transforms=False):
    """Instantiate a pencil from the spec.

    Returns (a, b, truth); truth carries the finite eigenvalues with
    multiplicity, the infinite count, one exact right eigenvector per finite
    block (the leading column of the block's slice of S), and S, T.
    """
    n = spec.n
    d = spec.finite_count
    rng = np.random.default_rng(seed)
    j_blocks = [_jordan(lam, size) for lam, size in spec.jordan_blocks]
    nil_blocks = [_jordan(0.0, size) for size in spec.nilpotent_sizes]
    m_a = _blkdiag(j_blocks + [np.eye(n - d, dtype=np.complex128)], n)
    m_b = _blkdiag([np.eye(d, dtype=np.complex128)] + nil_blocks, n)
    if identity_transforms:
        s = np.eye(n, dtype=np.complex128)
        t = np.eye(n, dtype=np.complex128)
        a, b = m_a, m_b
    else:
        s = _conditioned_transform(n, spec.cond, rng)
        t = _conditioned_transform(n, spec.cond, rng)
        s_inv = lu_solve(lu_factor(s), np.eye(n, dtype=np.complex128))
        t_fact = lu_factor(t)
        a = lu_solve(t_fact, m_a @ s_inv)
        b = lu_solve(t_fact, m_b @ s_inv)
    eigenvalues = np.concatenate(
        [np.full(size, lam, dtype=np.complex128) for lam, size in spec.jordan_blocks]
    ) if spec.jordan_blocks else np.zeros(0, dtype=np.complex128)
    starts = np.cumsum([0] + [size for _, size in spec.jordan_blocks])[:-1]
    eigenvectors = (
        s[:, starts] if len(starts) else np.zeros((n, 0), dtype=np.complex128)
    )
    truth = GroundTruth(
        eigenvalues=eigenvalues,
        infinite_count=n - d,
        eigenvectors=np.ascontiguousarray(eigenvectors),
        s=s,
        t=t,
    )
    return as_dense(a), as_dense(b), truth


def dense_spectrum(a, b, size_limit=1500):
    """All generalized eigenvalues via the full QZ decomposition. Meant as a
    reference at test scale, hence the size guard."""
    a = as_dense(a)
    if a.shape[0] > size_limit:
        raise ValueError(
            f"dense reference solve capped at n = {size_limit}, got {a.shape[0]}"
        )
    return generalized_schur(a, b).eigenvalues()


def charpoly_spotcheck(a, b, lam, size_limit=200):
    """Normalized |det(lam B - A)|, small iff lam is (near) an eigenvalue.

    The determinant comes from the LU diagonal, evaluated in log space and
    normalized by the product of row maxima, so the check shares no code
    with the QZ path. Exact singularity returns 0.
    """
    a = as_dense(a)
    b = as_dense(b)
    n = a.shape[0]
    if n > size_limit:
        raise ValueError(f"spot check capped at n = {size_limit}, got {n}")
    m = lam * b - a
    row_max = np.max(np.abs(m), axis=1)
    if np.any(row_max == 0.0):
        return 0.0
    try:
        fact = lu_factor(m)
    except SingularMatrixError:
        return 0.0
    diag = np.abs(np.diagonal(fact.lu))
    if np.any(diag == 0.0):
        return 0.0
    log_value = float(np.sum(np.log(diag)) - np.sum(np.log(row_max)))
    if log_value > 700.0:
        return math.inf
    return math.exp(log_value)


def _scaled_det(a, b, z, log_ref):
    """det(z B - A) rescaled by exp(log_ref): LU pivots give magnitude (log
    space) and phase, the pivot permutation parity gives the sign."""
    m = z * b - a
    try:
        fact = lu_factor(m)
    except SingularMatrixError:
        return 0.0 + 0.0j
    diag = np.diagonal(fact.lu)
    mags = np.abs(diag)
    if np.any(mags == 0.0):
        return 0.0 + 0.0j
    logmag = float(np.sum(np.log(mags)))
    phase = complex(np.prod(diag / mags))
    swaps = int(np.sum(fact.piv != np.arange(len(diag))))
    sign = -1.0 if swaps % 2 else 1.0
    return sign * phase * math.exp(min(logmag - log_ref, 700.0))


def charpoly_root(a, b, z0, max_iter=60, size_limit=200):
    """Recover the characteristic root nearest z0 by sampling det(z B - A)
    along a secant iteration; independent of the QZ path.

    Intended as a cross-check: started near a claimed eigenvalue, it settles
    on the determinant path's own root, which can then be compared with the
    claim.
    """
    a = as_dense(a)
    b = as_dense(b)
    if a.shape[0] > size_limit:
        raise ValueError(f"root recovery capped at n = {size_limit}")
    scale = max(abs(z0), 1.0)
    m0 = z0 * b - a
    row_max = np.max(np.abs(m0), axis=1)
    log_ref = float(np.sum(np.log(np.maximum(row_max, 1e-300))))
    z_prev = z0 + scale * (1e-6 + 1e-6j)
    z_cur = complex(z0)
    f_prev = _scaled_det(a, b, z_prev, log_ref)
    f_cur = _scaled_det(a, b, z_cur, log_ref)
    for _ in range(max_iter):
        if f_cur == 0.0 or f_cur == f_prev:
            break
        step = f_cur * (z_cur - z_prev) / (f_cur - f_prev)
        z_prev, f_prev = z_cur, f_cur
        z_cur = z_cur - step
        f_cur = _scaled_det(a, b, z_cur, log_ref)
        if abs(step) <= 1e-15 * max(abs(z_cur), 1.0):
            break
    return z_cur
