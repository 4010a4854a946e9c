"""Compiled inner loops for the dense complex kernels.

Everything here works on preallocated complex128 Fortran-ordered arrays and
returns integer status codes instead of raising; the public wrappers in
dense_core / qz_kernel do validation, allocation and error handling.
"""

import numpy as np
from numba import njit

EPS = 2.220446049250313e-16


@njit(cache=True)
def lu_factor_inplace(a, piv):
    """Partial-pivoting LU, combined storage. Returns 0, or k+1 when column k
    is exactly zero from the pivot row down."""
    n = a.shape[0]
    for k in range(n):
        p = k
        best = abs(a[k, k])
        for i in range(k + 1, n):
            v = abs(a[i, k])
            if v > best:
                best = v
                p = i
        piv[k] = p
        if best == 0.0:
            return k + 1
        if p != k:
            for j in range(n):
                tmp = a[k, j]
                a[k, j] = a[p, j]
                a[p, j] = tmp
        akk = a[k, k]
        for i in range(k + 1, n):
            a[i, k] /= akk
        for j in range(k + 1, n):
            akj = a[k, j]
            if akj != 0.0:
                for i in range(k + 1, n):
                    a[i, j] -= a[i, k] * akj
    return 0


@njit(cache=True)
def lu_solve_inplace(lu, piv, b):
    """Overwrite b (n x m) with the solution of the factored system."""
    n = lu.shape[0]
    m = b.shape[1]
    for k in range(n):
        p = piv[k]
        if p != k:
            for j in range(m):
                tmp = b[k, j]
                b[k, j] = b[p, j]
                b[p, j] = tmp
    for j in range(m):
        for k in range(n):
            bk = b[k, j]
            if bk != 0.0:
                for i in range(k + 1, n):
                    b[i, j] -= lu[i, k] * bk
    for j in range(m):
        for k in range(n - 1, -1, -1):
            b[k, j] /= lu[k, k]
            bk = b[k, j]
            if bk != 0.0:
                for i in range(k):
                    b[i, j] -= lu[i, k] * bk


@njit(cache=True, inline="always")
def _reflector(r, tau, k, m):
    """Build the Householder reflector for column k of r from row k down,
    store v (v[0] = 1 implicit) below the diagonal and beta on it."""
    xnorm2 = 0.0
    for i in range(k, m):
        xnorm2 += r[i, k].real * r[i, k].real + r[i, k].imag * r[i, k].imag
    xnorm = np.sqrt(xnorm2)
    if xnorm == 0.0:
        tau[k] = 0.0
        return
    alpha = r[k, k]
    aa = abs(alpha)
    if aa == 0.0:
        phase = 1.0 + 0.0j
    else:
        phase = alpha / aa
    beta = -phase * xnorm
    v0 = alpha - beta
    wnorm2 = 1.0
    for i in range(k + 1, m):
        r[i, k] = r[i, k] / v0
        wnorm2 += r[i, k].real * r[i, k].real + r[i, k].imag * r[i, k].imag
    tau[k] = 2.0 / wnorm2
    r[k, k] = beta


@njit(cache=True, inline="always")
def _apply_reflector(r, tau, k, m, jlo, jhi):
    """Apply H_k = I - tau w w* to columns [jlo, jhi) of r, rows k..m-1."""
    tk = tau[k]
    if tk == 0.0:
        return
    for j in range(jlo, jhi):
        u = r[k, j]
        for i in range(k + 1, m):
            u += np.conj(r[i, k]) * r[i, j]
        u *= tk
        r[k, j] -= u
        for i in range(k + 1, m):
            r[i, j] -= u * r[i, k]


@njit(cache=True, inline="always")
def _apply_reflector_other(src, tau, k, m, dst, jlo, jhi):
    """Apply the reflector stored in column k of src to columns of dst."""
    tk = tau[k]
    if tk == 0.0:
        return
    for j in range(jlo, jhi):
        u = dst[k, j]
        for i in range(k + 1, m):
            u += np.conj(src[i, k]) * dst[i, j]
        u *= tk
        dst[k, j] -= u
        for i in range(k + 1, m):
            dst[i, j] -= u * src[i, k]


@njit(cache=True)
def qr_factor_inplace(r, tau):
    """Unpivoted Householder QR in compact storage."""
    m, n = r.shape
    kmax = min(m, n)
    for k in range(kmax):
        _reflector(r, tau, k, m)
        _apply_reflector(r, tau, k, m, k + 1, n)


@njit(cache=True)
def cpqr_factor_inplace(r, tau, jpvt):
    """Column-pivoted Householder QR. Column norms are recomputed at every
    step (no downdating) for robustness; fine at the sizes this code sees."""
    m, n = r.shape
    kmax = min(m, n)
    for k in range(kmax):
        pbest = k
        nbest = -1.0
        for j in range(k, n):
            s = 0.0
            for i in range(k, m):
                s += r[i, j].real * r[i, j].real + r[i, j].imag * r[i, j].imag
            if s > nbest:
                nbest = s
                pbest = j
        if pbest != k:
            for i in range(m):
                tmp = r[i, k]
                r[i, k] = r[i, pbest]
                r[i, pbest] = tmp
            tmpj = jpvt[k]
            jpvt[k] = jpvt[pbest]
            jpvt[pbest] = tmpj
        _reflector(r, tau, k, m)
        _apply_reflector(r, tau, k, m, k + 1, n)


@njit(cache=True)
def form_q_inplace(qr, tau, q):
    """Accumulate the reflectors of a compact QR into q (m x ncols, q starts
    as leading columns of the identity)."""
    m = qr.shape[0]
    kmax = min(m, qr.shape[1])
    ncols = q.shape[1]
    for k in range(kmax - 1, -1, -1):
        tk = tau[k]
        if tk == 0.0:
            continue
        for j in range(ncols):
            u = q[k, j]
            for i in range(k + 1, m):
                u += np.conj(qr[i, k]) * q[i, j]
            u *= tk
            q[k, j] -= u
            for i in range(k + 1, m):
                q[i, j] -= u * qr[i, k]


@njit(cache=True)
def jacobi_sweeps(m_mat, v, tol, max_sweeps):
    """One-sided Jacobi on the columns of m_mat, accumulating the right
    rotations into v. Returns the sweep count, or -1 if max_sweeps was hit.

    Columns whose norm has fallen below an absolute floor (relative to the
    largest initial column) are treated as numerically zero and skipped;
    without the floor, a column that is exactly dependent on the others
    decays geometrically while staying correlated, and the relative rotation
    criterion never releases it."""
    m, n = m_mat.shape
    scale2 = 0.0
    for j in range(n):
        s = 0.0
        for k in range(m):
            s += m_mat[k, j].real * m_mat[k, j].real + m_mat[k, j].imag * m_mat[k, j].imag
        if s > scale2:
            scale2 = s
    floor2 = scale2 * 4.93e-38  # (1e-3 * eps)^2 relative
    # the Gram dot products themselves carry O(m eps) rounding noise, so a
    # tighter request than that can never settle
    noise = (4.0 + 2.0 * m) * EPS
    if tol < noise:
        tol = noise
    for sweep in range(max_sweeps):
        rotated = 0
        for i in range(n - 1):
            for j in range(i + 1, n):
                aa = 0.0
                bb = 0.0
                cc = 0.0 + 0.0j
                for k in range(m):
                    mi = m_mat[k, i]
                    mj = m_mat[k, j]
                    aa += mi.real * mi.real + mi.imag * mi.imag
                    bb += mj.real * mj.real + mj.imag * mj.imag
                    cc += np.conj(mi) * mj
                if aa <= floor2 or bb <= floor2:
                    continue
                absc = abs(cc)
                if absc <= tol * np.sqrt(aa * bb):
                    continue
                rotated += 1
                phc = np.conj(cc) / absc
                tau_ = (bb - aa) / (2.0 * absc)
                if tau_ >= 0.0:
                    t = 1.0 / (tau_ + np.sqrt(1.0 + tau_ * tau_))
                else:
                    t = -1.0 / (-tau_ + np.sqrt(1.0 + tau_ * tau_))
                cs = 1.0 / np.sqrt(1.0 + t * t)
                sn = t * cs
                for k in range(m):
                    vi = m_mat[k, i]
                    vj = m_mat[k, j]
                    m_mat[k, i] = cs * vi - sn * phc * vj
                    m_mat[k, j] = sn * vi + cs * phc * vj
                for k in range(n):
                    vi = v[k, i]
                    vj = v[k, j]
                    v[k, i] = cs * vi - sn * phc * vj
                    v[k, j] = sn * vi + cs * phc * vj
        if rotated == 0:
            return sweep
    return -1


@njit(cache=True, inline="always")
def _givens_left(f, g):
    """(c, s) with [[c, s], [-conj(s), c]] @ [f, g]^T = [r, 0]^T, c real."""
    ag = abs(g)
    if ag == 0.0:
        return 1.0, 0.0 + 0.0j
    af = abs(f)
    if af == 0.0:
        return 0.0, np.conj(g) / ag
    d = np.hypot(af, ag)
    c = af / d
    s = (f / af) * np.conj(g) / d
    return c, s


@njit(cache=True, inline="always")
def _givens_right(x, y):
    """(c, s) with [x, y] @ [[c, s], [-conj(s), c]] = [0, r], c real."""
    ax = abs(x)
    if ax == 0.0:
        return 1.0, 0.0 + 0.0j
    ay = abs(y)
    if ay == 0.0:
        return 0.0, np.conj(x) / ax
    d = np.hypot(ax, ay)
    c = ay / d
    s = (ay / d) * np.conj(x) / np.conj(y)
    return c, s


@njit(cache=True, inline="always")
def _rot_rows(m_mat, i1, i2, c, s, jlo, jhi):
    for j in range(jlo, jhi):
        v1 = m_mat[i1, j]
        v2 = m_mat[i2, j]
        m_mat[i1, j] = c * v1 + s * v2
        m_mat[i2, j] = -np.conj(s) * v1 + c * v2


@njit(cache=True, inline="always")
def _rot_cols(m_mat, j1, j2, c, s, ilo, ihi):
    for i in range(ilo, ihi):
        v1 = m_mat[i, j1]
        v2 = m_mat[i, j2]
        m_mat[i, j1] = c * v1 - np.conj(s) * v2
        m_mat[i, j2] = s * v1 + c * v2


@njit(cache=True, inline="always")
def _acc_q(q, i1, i2, c, s, n):
    # left rotation G on rows (i1, i2) of the pair: Q <- Q G^H
    for i in range(n):
        v1 = q[i, i1]
        v2 = q[i, i2]
        q[i, i1] = c * v1 + np.conj(s) * v2
        q[i, i2] = -s * v1 + c * v2


@njit(cache=True)
def hess_tri_inplace(a, b, q, z):
    """Reduce (a, b) to (Hessenberg, triangular) with unitary q, z so that
    q^H a_in z = a_out and q^H b_in z = b_out. q, z start as the identity."""
    n = a.shape[0]
    # phase 1: QR of b, reflectors applied to a and accumulated into q
    tau = np.zeros(n, dtype=np.float64)
    for k in range(n):
        _reflector(b, tau, k, n)
        _apply_reflector(b, tau, k, n, k + 1, n)
        _apply_reflector_other(b, tau, k, n, a, 0, n)
        # q <- q H_k (reflector data lives below b's diagonal)
        tk = tau[k]
        if tk != 0.0:
            for i in range(n):
                u = q[i, k]
                for l in range(k + 1, n):
                    u += q[i, l] * b[l, k]
                u *= tk
                q[i, k] -= u
                for l in range(k + 1, n):
                    q[i, l] -= u * np.conj(b[l, k])
        for i in range(k + 1, n):
            b[i, k] = 0.0
    # phase 2: zero a below the first subdiagonal with Givens pairs
    for j in range(n - 2):
        for i in range(n - 1, j + 1, -1):
            c, s = _givens_left(a[i - 1, j], a[i, j])
            _rot_rows(a, i - 1, i, c, s, j, n)
            _rot_rows(b, i - 1, i, c, s, i - 1, n)
            _acc_q(q, i - 1, i, c, s, n)
            a[i, j] = 0.0
            # restore b's triangularity: kill the (i, i-1) fill
            c, s = _givens_right(b[i, i - 1], b[i, i])
            _rot_cols(b, i - 1, i, c, s, 0, i + 1)
            _rot_cols(a, i - 1, i, c, s, 0, n)
            _rot_cols(z, i - 1, i, c, s, 0, n)
            b[i, i - 1] = 0.0


@njit(cache=True)
def qz_iterate_inplace(h, t, q, z, eps_deflate, max_sweeps):
    """Single-shift complex QZ with deflation on a Hessenberg/triangular pair.
    Returns 0 on success, 1 if max_sweeps was exhausted."""
    n = h.shape[0]
    normh = 0.0
    normt = 0.0
    for j in range(n):
        for i in range(n):
            normh += h[i, j].real * h[i, j].real + h[i, j].imag * h[i, j].imag
            normt += t[i, j].real * t[i, j].real + t[i, j].imag * t[i, j].imag
    normh = np.sqrt(normh)
    normt = np.sqrt(normt)
    tthresh = eps_deflate * normt

    ihi = n - 1
    sweeps = 0
    stalled = 0
    while ihi > 0:
        # flag negligible subdiagonals
        for i in range(ihi):
            if h[i + 1, i] != 0.0:
                thr = eps_deflate * (abs(h[i, i]) + abs(h[i + 1, i + 1]))
                if thr == 0.0:
                    thr = eps_deflate * normh
                if abs(h[i + 1, i]) <= thr:
                    h[i + 1, i] = 0.0
        if h[ihi, ihi - 1] == 0.0:
            ihi -= 1
            stalled = 0
            continue
        # start of the unreduced block
        l = ihi
        while l > 0 and h[l, l - 1] != 0.0:
            l -= 1
        # flag negligible t diagonal entries (infinite eigenvalues)
        for jj in range(l, ihi + 1):
            if t[jj, jj] != 0.0 and abs(t[jj, jj]) <= tthresh:
                t[jj, jj] = 0.0
        if t[ihi, ihi] == 0.0:
            # deflate an infinite eigenvalue at the bottom
            c, s = _givens_right(h[ihi, ihi - 1], h[ihi, ihi])
            _rot_cols(h, ihi - 1, ihi, c, s, 0, ihi + 1)
            _rot_cols(t, ihi - 1, ihi, c, s, 0, ihi + 1)
            _rot_cols(z, ihi - 1, ihi, c, s, 0, n)
            h[ihi, ihi - 1] = 0.0
            ihi -= 1
            stalled = 0
            continue
        if t[l, l] == 0.0:
            # infinite eigenvalue at the top of the block: isolate position l
            # (row l has no support left of column l, so this is exact)
            c, s = _givens_left(h[l, l], h[l + 1, l])
            _rot_rows(h, l, l + 1, c, s, l, n)
            _rot_rows(t, l, l + 1, c, s, l, n)
            _acc_q(q, l, l + 1, c, s, n)
            h[l + 1, l] = 0.0
            continue
        mid = -1
        for jj in range(l + 1, ihi):
            if t[jj, jj] == 0.0:
                mid = jj
                break
        if mid >= 0:
            # chase the interior zero on t's diagonal down to the bottom,
            # where the next pass deflates it; each row rotation moves the
            # zero one position and a column rotation repairs h's Hessenberg
            # structure
            for jch in range(mid, ihi):
                c, s = _givens_left(t[jch, jch + 1], t[jch + 1, jch + 1])
                _rot_rows(t, jch, jch + 1, c, s, jch + 1, n)
                t[jch + 1, jch + 1] = 0.0
                _rot_rows(h, jch, jch + 1, c, s, jch - 1, n)
                _acc_q(q, jch, jch + 1, c, s, n)
                c, s = _givens_right(h[jch + 1, jch - 1], h[jch + 1, jch])
                hrows = jch + 2 if jch + 2 <= ihi + 1 else ihi + 1
                _rot_cols(h, jch - 1, jch, c, s, 0, hrows)
                _rot_cols(t, jch - 1, jch, c, s, 0, jch + 1)
                _rot_cols(z, jch - 1, jch, c, s, 0, n)
                h[jch + 1, jch - 1] = 0.0
            continue
        if sweeps >= max_sweeps:
            return 1
        sweeps += 1
        stalled += 1
        # shift from the trailing 2x2, exceptional every 10 stalled sweeps
        a11 = h[ihi - 1, ihi - 1]
        a12 = h[ihi - 1, ihi]
        a21 = h[ihi, ihi - 1]
        a22 = h[ihi, ihi]
        b11 = t[ihi - 1, ihi - 1]
        b12 = t[ihi - 1, ihi]
        b22 = t[ihi, ihi]
        if stalled % 10 == 0:
            sigma = (a22 + (0.736428 + 0.297353j) * abs(a21)) / b22
        else:
            qa = b11 * b22
            qb = -(a11 * b22 + a22 * b11 - a21 * b12)
            qc = a11 * a22 - a12 * a21
            disc = np.sqrt(qb * qb - 4.0 * qa * qc)
            if (qb * np.conj(disc)).real > 0.0:
                disc = -disc
            den = qb - disc
            target = a22 / b22
            if abs(den) > 0.0:
                r1 = (-2.0 * qc) / den
                r2 = -den / (2.0 * qa)
                if abs(r1 - target) <= abs(r2 - target):
                    sigma = r1
                else:
                    sigma = r2
            else:
                sigma = target
        # implicit single-shift sweep on [l, ihi]
        x = h[l, l] / t[l, l] - sigma
        y = h[l + 1, l] / t[l, l]
        c, s = _givens_left(x, y)
        _rot_rows(h, l, l + 1, c, s, l, n)
        _rot_rows(t, l, l + 1, c, s, l, n)
        _acc_q(q, l, l + 1, c, s, n)
        c, s = _givens_right(t[l + 1, l], t[l + 1, l + 1])
        _rot_cols(t, l, l + 1, c, s, 0, l + 2)
        hrows = l + 3 if l + 3 <= ihi + 1 else ihi + 1
        _rot_cols(h, l, l + 1, c, s, 0, hrows)
        _rot_cols(z, l, l + 1, c, s, 0, n)
        t[l + 1, l] = 0.0
        for k in range(l, ihi - 1):
            c, s = _givens_left(h[k + 1, k], h[k + 2, k])
            _rot_rows(h, k + 1, k + 2, c, s, k, n)
            _rot_rows(t, k + 1, k + 2, c, s, k + 1, n)
            _acc_q(q, k + 1, k + 2, c, s, n)
            h[k + 2, k] = 0.0
            c, s = _givens_right(t[k + 2, k + 1], t[k + 2, k + 2])
            _rot_cols(t, k + 1, k + 2, c, s, 0, k + 3)
            hrows = k + 4 if k + 4 <= ihi + 1 else ihi + 1
            _rot_cols(h, k + 1, k + 2, c, s, 0, hrows)
            _rot_cols(z, k + 1, k + 2, c, s, 0, n)
            t[k + 2, k + 1] = 0.0
    # exact zeros below the diagonals
    for j in range(n):
        for i in range(j + 1, n):
            h[i, j] = 0.0
            t[i, j] = 0.0
    return 0


@njit(cache=True)
def tri_pair_eigvec(sa, sb, lam, idx, floor):
    """Back-substitute for the right eigenvector of the triangular pair at
    position idx; near-zero denominators are pushed to the floor magnitude."""
    n = sa.shape[0]
    y = np.zeros(n, dtype=np.complex128)
    y[idx] = 1.0 + 0.0j
    for j in range(idx - 1, -1, -1):
        acc = 0.0 + 0.0j
        for k in range(j + 1, idx + 1):
            acc += (sa[j, k] - lam * sb[j, k]) * y[k]
        d = sa[j, j] - lam * sb[j, j]
        ad = abs(d)
        if ad < floor:
            if ad == 0.0:
                d = floor + 0.0j
            else:
                d = (d / ad) * floor
        y[j] = -acc / d
    nrm = 0.0
    for j in range(idx + 1):
        nrm += y[j].real * y[j].real + y[j].imag * y[j].imag
    nrm = np.sqrt(nrm)
    for j in range(idx + 1):
        y[j] /= nrm
    return y
