"""Complex dense linear algebra kernels.

All factorizations are implemented in this repository (compiled loops live in
``_kernels``); nothing here calls an external LAPACK-style routine. Matrices
are numpy complex128 arrays; kernels normalize them to Fortran order since the
algorithms sweep columns.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels

EPS = 2.220446049250313e-16


class SingularMatrixError(ValueError):
    """A pivot column was exactly zero during LU elimination."""


def as_dense(a):
    """Coerce to a Fortran-ordered complex128 2-d array (copying as needed)."""
    m = np.array(a, dtype=np.complex128, order="F", copy=True)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d array, got ndim={m.ndim}")
    return m


def default_rank_tol(nrows, ncols):
    """Relative cutoff for numerical-rank decisions: max(m, n) * eps."""
    return max(nrows, ncols) * EPS


@dataclass
class LuFactorization:
    lu: np.ndarray
    piv: np.ndarray

    @property
    def n(self):
        return self.lu.shape[0]


@dataclass
class Svd:
    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    def rank(self, rel_tol=None):
        if self.sigma.size == 0 or self.sigma[0] == 0.0:
            return 0
        if rel_tol is None:
            rel_tol = default_rank_tol(self.u.shape[0], self.v.shape[0])
        return int(np.count_nonzero(self.sigma >= rel_tol * self.sigma[0]))


def lu_factor(a):
    """LU with partial pivoting. Near-singular input is allowed; an exactly
    zero pivot column raises SingularMatrixError."""
    a = as_dense(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"lu_factor needs a square matrix, got {a.shape}")
    piv = np.zeros(a.shape[0], dtype=np.int64)
    status = _kernels.lu_factor_inplace(a, piv)
    if status != 0:
        raise SingularMatrixError(
            f"exactly zero pivot in column {status - 1}"
        )
    return LuFactorization(a, piv)


def lu_solve(fact, b):
    """Solve the factored system for a multi-right-hand-side block."""
    b = np.array(b, dtype=np.complex128, order="F", copy=True)
    single = b.ndim == 1
    if single:
        b = b.reshape(-1, 1, order="F")
    if b.shape[0] != fact.n:
        raise ValueError(
            f"rhs has {b.shape[0]} rows, factorization is {fact.n}x{fact.n}"
        )
    _kernels.lu_solve_inplace(fact.lu, fact.piv, b)
    return b[:, 0] if single else b


def qr_thin(a):
    """Unpivoted Householder QR, thin Q. Internal building block."""
    r = as_dense(a)
    m, n = r.shape
    k = min(m, n)
    tau = np.zeros(k, dtype=np.float64)
    _kernels.qr_factor_inplace(r, tau)
    q = np.zeros((m, k), dtype=np.complex128, order="F")
    for i in range(k):
        q[i, i] = 1.0
    _kernels.form_q_inplace(r, tau, q)
    rr = np.triu(r[:k, :])
    return q, np.asfortranarray(rr)


def cpqr_rank(a, rel_tol=None):
    """Column-pivoted Householder QR with a numerical-rank decision.

    Returns (q, r, perm, rank) with a[:, perm] = q @ r and nonincreasing
    |r[i, i]|; rank counts diagonals >= rel_tol * |r[0, 0]|.
    """
    r = as_dense(a)
    m, n = r.shape
    if r.size == 0:
        raise ValueError("cpqr_rank needs a nonempty matrix")
    k = min(m, n)
    if rel_tol is None:
        rel_tol = default_rank_tol(m, n)
    tau = np.zeros(k, dtype=np.float64)
    jpvt = np.arange(n, dtype=np.int64)
    _kernels.cpqr_factor_inplace(r, tau, jpvt)
    q = np.zeros((m, k), dtype=np.complex128, order="F")
    for i in range(k):
        q[i, i] = 1.0
    _kernels.form_q_inplace(r, tau, q)
    diag = np.abs(np.diagonal(r)[:k])
    if diag.size == 0 or diag[0] == 0.0:
        rank = 0
    else:
        rank = int(np.count_nonzero(diag >= rel_tol * diag[0]))
    rr = np.asfortranarray(np.triu(r[:k, :]))
    return q, rr, jpvt, rank


def svd_jacobi(a, tol=1e-15, max_sweeps=60):
    """Thin SVD by one-sided Jacobi rotations.

    Wide inputs are transposed first; tall inputs go through an unpivoted QR
    so the rotations run on a square factor. Singular values come back
    nonincreasing; exact zero columns are completed to an orthonormal U.
    """
    m_in = as_dense(a)
    m, n = m_in.shape
    if m < n:
        s = svd_jacobi(m_in.conj().T, tol=tol, max_sweeps=max_sweeps)
        return Svd(s.v, s.sigma, s.u)
    if m > n:
        q0, work = qr_thin(m_in)
    else:
        q0, work = None, m_in
    work = np.asfortranarray(work)
    k = work.shape[1]
    v = np.eye(k, dtype=np.complex128, order="F")
    sweeps = _kernels.jacobi_sweeps(work, v, tol, max_sweeps)
    if sweeps < 0:
        raise RuntimeError(f"jacobi svd did not settle in {max_sweeps} sweeps")
    sigma = np.sqrt(np.sum(np.abs(work) ** 2, axis=0))
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    work = work[:, order]
    v = v[:, order]
    u = np.zeros((k, k), dtype=np.complex128, order="F")
    # directions below the resolution of the sweep carry no reliable left
    # vector (they may have stalled while still correlated with the strong
    # columns); rebuild them from the orthogonal complement instead
    u_floor = 10.0 * EPS * (sigma[0] if k else 0.0)
    for j in range(k):
        if sigma[j] > u_floor:
            u[:, j] = work[:, j] / sigma[j]
        else:
            u[:, j] = _fill_orthonormal(u, j)
    if q0 is not None:
        u = q0 @ u
    return Svd(np.asfortranarray(u), sigma, np.asfortranarray(v))


def _fill_orthonormal(u, j):
    """Unit vector orthogonal to u[:, :j], for singular directions below the
    sweep's resolution. Seeded candidates keep repeated runs bit-identical."""
    k = u.shape[0]
    rng = np.random.default_rng(24036583 + 131 * k + j)
    basis = u[:, :j]
    for _ in range(64):
        cand = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        cand /= np.sqrt(np.sum(np.abs(cand) ** 2))
        for _ in range(3):
            cand -= basis @ (basis.conj().T @ cand)
        nrm = np.sqrt(np.sum(np.abs(cand) ** 2))
        if nrm > 1e-6:
            return cand / nrm
    raise RuntimeError("could not complete an orthonormal basis")


def qr_orth(a, rel_tol=None):
    """Orthonormal basis of the numerical column space (SVD based, matching
    the usual orth() semantics: drop sigma_i < rel_tol * sigma_1)."""
    a = as_dense(a)
    if a.size == 0 or not np.any(a):
        raise ValueError("qr_orth needs a nonzero matrix")
    s = svd_jacobi(a)
    r = s.rank(rel_tol)
    return np.asfortranarray(s.u[:, :r])


def matmul(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] != b.shape[0]:
        raise ValueError(f"matmul mismatch: {a.shape} x {b.shape}")
    return a @ b


def conj_transpose(a):
    return np.asarray(a).conj().T


def frobenius_norm(a):
    a = np.asarray(a)
    return float(np.sqrt(np.sum(np.abs(a) ** 2)))


def two_norm(v):
    v = np.asarray(v)
    return float(np.sqrt(np.sum(np.abs(v) ** 2)))
