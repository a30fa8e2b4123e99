# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels.

A self-contained cyclic Jacobi eigensolver for small Hermitian matrices
drives the alternating product-state minimization and the grid scans; no
LAPACK round trips, so the per-iteration cost stays at the scale of the
tiny matrices involved.  ``hdmkit._kernels_py`` is the drop-in fallback.
"""

from libc.math cimport INFINITY, sqrt

import numpy as np

cdef double PHASE_CUTOFF = 1e-12

# buffers cover factor dimensions up to 64 (desk scale)
cdef enum:
    MAXN = 64
    MAXN2 = 4096


cdef inline double _cabs2(double complex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef int _jacobi(double complex* a, double complex* v, double* w, int n) noexcept nogil:
    """In-place cyclic Jacobi on Hermitian a (row-major n x n).

    Eigenvalues land on the diagonal (copied to w, unsorted); the unitary
    accumulates in v so that column k of v pairs with w[k].
    """
    cdef int i, p, q, sweep
    cdef double off, thresh, app, aqq, zeta, t, c, s, absb, fn
    cdef double complex apq, ph, xp, xq

    for i in range(n):
        for p in range(n):
            v[i * n + p] = 1.0 if i == p else 0.0

    fn = 0.0
    for i in range(n * n):
        fn += _cabs2(a[i])
    fn = sqrt(fn)
    if fn == 0.0:
        for i in range(n):
            w[i] = 0.0
        return 0
    thresh = 1e-15 * fn

    for sweep in range(80):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += _cabs2(a[p * n + q])
        if sqrt(2.0 * off) <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p * n + q]
                absb = sqrt(_cabs2(apq))
                if absb == 0.0:
                    continue
                app = a[p * n + p].real
                aqq = a[q * n + q].real
                zeta = (app - aqq) / (2.0 * absb)
                if zeta >= 0.0:
                    t = 1.0 / (zeta + sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + sqrt(1.0 + zeta * zeta))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                ph = apq / absb
                for i in range(n):
                    if i == p or i == q:
                        continue
                    xp = a[i * n + p]
                    xq = a[i * n + q]
                    a[i * n + p] = c * xp + s * ph.conjugate() * xq
                    a[i * n + q] = -s * ph * xp + c * xq
                    a[p * n + i] = a[i * n + p].conjugate()
                    a[q * n + i] = a[i * n + q].conjugate()
                a[p * n + p] = app * c * c + aqq * s * s + 2.0 * c * s * absb
                a[q * n + q] = app * s * s + aqq * c * c - 2.0 * c * s * absb
                a[p * n + q] = 0.0
                a[q * n + p] = 0.0
                for i in range(n):
                    xp = v[i * n + p]
                    xq = v[i * n + q]
                    v[i * n + p] = c * xp + s * ph.conjugate() * xq
                    v[i * n + q] = -s * ph * xp + c * xq
    for i in range(n):
        w[i] = a[i * n + i].real
    return 0


cdef void _phase_fix(double complex* col, int n) noexcept nogil:
    cdef int i, j
    cdef double mag
    cdef double complex rot
    for i in range(n):
        mag = sqrt(_cabs2(col[i]))
        if mag > PHASE_CUTOFF:
            rot = col[i].conjugate() / mag
            for j in range(n):
                col[j] = col[j] * rot
            return


cdef int _argmin(double* w, int n) noexcept nogil:
    cdef int i, best = 0
    for i in range(1, n):
        if w[i] < w[best]:
            best = i
    return best


def eigh_small(a):
    """Ascending eigenpairs of a small Hermitian matrix, phases anchored."""
    cdef double complex[:, :] am = np.ascontiguousarray(a, dtype=np.complex128)
    cdef int n = am.shape[0]
    if am.shape[1] != n or n < 1 or n > MAXN:
        raise ValueError("eigh_small needs a square matrix of size 1..64")
    cdef double complex abuf[MAXN2]
    cdef double complex vbuf[MAXN2]
    cdef double wbuf[MAXN]
    cdef int i, j
    cdef double complex z
    for i in range(n):
        abuf[i * n + i] = am[i, i].real
        for j in range(i + 1, n):
            z = 0.5 * (am[i, j] + am[j, i].conjugate())
            abuf[i * n + j] = z
            abuf[j * n + i] = z.conjugate()
    _jacobi(abuf, vbuf, wbuf, n)

    order = np.argsort(np.asarray([wbuf[i] for i in range(n)]), kind="stable")
    w_out = np.empty(n, dtype=np.float64)
    v_out = np.empty((n, n), dtype=np.complex128)
    cdef double[:] wv = w_out
    cdef double complex[:, :] vv = v_out
    cdef long[:] om = np.ascontiguousarray(order, dtype=np.int64)
    cdef int k, src
    cdef double complex col[MAXN]
    for k in range(n):
        src = <int> om[k]
        wv[k] = wbuf[src]
        for i in range(n):
            col[i] = vbuf[i * n + src]
        _phase_fix(col, n)
        for i in range(n):
            vv[i, k] = col[i]
    return w_out, v_out


def seesaw_run(h4, beta0, int max_iters, double conv_tol):
    """One alternating-minimization restart over product states.

    See ``_kernels_py.seesaw_run`` for the contract; this version runs the
    sweep loop and the per-sweep eigensolves entirely in C.
    """
    cdef double complex[:, :, :, :] h = np.ascontiguousarray(h4, dtype=np.complex128)
    cdef int s = h.shape[0]
    cdef int L = h.shape[1]
    if h.shape[2] != s or h.shape[3] != L:
        raise ValueError("h4 must have shape (s, L, s, L)")
    if s < 1 or L < 1 or s > MAXN or L > MAXN:
        raise ValueError("factor dimensions must be 1..64")
    if max_iters < 1:
        raise ValueError("max_iters must be positive")

    cdef double complex[:] b0 = np.ascontiguousarray(beta0, dtype=np.complex128)
    if b0.shape[0] != L:
        raise ValueError("beta0 length does not match the second factor")

    cdef double complex alpha[MAXN]
    cdef double complex beta[MAXN]
    cdef double complex fbuf[MAXN2]
    cdef double complex gbuf[MAXN2]
    cdef double complex vbuf[MAXN2]
    cdef double wbuf[MAXN]
    cdef double complex acc, bc, ac
    cdef double nrm, v_prev, v_cur, value
    cdef int it, i, m, p, nn, q, kmin, sweeps = 0, converged = 0

    nrm = 0.0
    for i in range(L):
        nrm += _cabs2(b0[i])
    nrm = sqrt(nrm)
    if nrm == 0.0:
        raise ValueError("beta0 must be nonzero")
    for i in range(L):
        beta[i] = b0[i] / nrm

    trace = np.empty(2 * max_iters, dtype=np.float64)
    cdef double[:] tr = trace
    v_prev = INFINITY

    for it in range(max_iters):
        # F[m, p] = sum_{n, q} conj(beta_n) H[m, n, p, q] beta_q
        for m in range(s):
            for p in range(m, s):
                acc = 0.0
                for nn in range(L):
                    bc = beta[nn].conjugate()
                    for q in range(L):
                        acc = acc + bc * h[m, nn, p, q] * beta[q]
                if p == m:
                    fbuf[m * s + m] = acc.real
                else:
                    fbuf[m * s + p] = acc
                    fbuf[p * s + m] = acc.conjugate()
        _jacobi(fbuf, vbuf, wbuf, s)
        kmin = _argmin(wbuf, s)
        for i in range(s):
            alpha[i] = vbuf[i * s + kmin]
        tr[2 * it] = wbuf[kmin]

        # G[n, q] = sum_{m, p} conj(alpha_m) H[m, n, p, q] alpha_p
        for nn in range(L):
            for q in range(nn, L):
                acc = 0.0
                for m in range(s):
                    ac = alpha[m].conjugate()
                    for p in range(s):
                        acc = acc + ac * h[m, nn, p, q] * alpha[p]
                if q == nn:
                    gbuf[nn * L + nn] = acc.real
                else:
                    gbuf[nn * L + q] = acc
                    gbuf[q * L + nn] = acc.conjugate()
        _jacobi(gbuf, vbuf, wbuf, L)
        kmin = _argmin(wbuf, L)
        for i in range(L):
            beta[i] = vbuf[i * L + kmin]
        v_cur = wbuf[kmin]
        tr[2 * it + 1] = v_cur

        sweeps += 1
        if v_prev - v_cur < conv_tol:
            converged = 1
            break
        v_prev = v_cur

    _phase_fix(alpha, s)
    _phase_fix(beta, L)

    value = 0.0
    for m in range(s):
        for nn in range(L):
            acc = 0.0
            for p in range(s):
                for q in range(L):
                    acc = acc + h[m, nn, p, q] * alpha[p] * beta[q]
            acc = alpha[m].conjugate() * beta[nn].conjugate() * acc
            value += acc.real

    alpha_out = np.empty(s, dtype=np.complex128)
    beta_out = np.empty(L, dtype=np.complex128)
    cdef double complex[:] av = alpha_out
    cdef double complex[:] bv = beta_out
    for i in range(s):
        av[i] = alpha[i]
    for i in range(L):
        bv[i] = beta[i]
    return value, alpha_out, beta_out, sweeps, bool(converged), trace[:2 * sweeps].copy()


def pairwise_product_min(h4, alphas, betas):
    """Minimum of <a,b|H|a,b> over all rows of ``alphas`` x rows of ``betas``.

    Returns (value, alpha_index, beta_index); ties resolve to the first
    minimum in (beta, alpha) scan order.
    """
    cdef double complex[:, :, :, :] h = np.ascontiguousarray(h4, dtype=np.complex128)
    cdef double complex[:, :] A = np.ascontiguousarray(alphas, dtype=np.complex128)
    cdef double complex[:, :] B = np.ascontiguousarray(betas, dtype=np.complex128)
    cdef int s = h.shape[0]
    cdef int L = h.shape[1]
    if h.shape[2] != s or h.shape[3] != L:
        raise ValueError("h4 must have shape (s, L, s, L)")
    if s > MAXN or L > MAXN:
        raise ValueError("factor dimensions must be 1..64")
    if A.shape[1] != s or B.shape[1] != L:
        raise ValueError("state arrays do not match the factor dimensions")
    cdef Py_ssize_t na = A.shape[0]
    cdef Py_ssize_t nb = B.shape[0]
    if na == 0 or nb == 0:
        raise ValueError("state arrays must be nonempty")

    cdef double complex fbuf[MAXN2]
    cdef double complex acc, bc
    cdef double best = INFINITY, val
    cdef Py_ssize_t a_, b_, best_a = 0, best_b = 0
    cdef int m, p, nn, q

    for b_ in range(nb):
        for m in range(s):
            for p in range(m, s):
                acc = 0.0
                for nn in range(L):
                    bc = B[b_, nn].conjugate()
                    for q in range(L):
                        acc = acc + bc * h[m, nn, p, q] * B[b_, q]
                fbuf[m * s + p] = acc
                if p > m:
                    fbuf[p * s + m] = acc.conjugate()
        for a_ in range(na):
            acc = 0.0
            for m in range(s):
                for p in range(s):
                    acc = acc + A[a_, m].conjugate() * fbuf[m * s + p] * A[a_, p]
            val = acc.real
            if val < best:
                best = val
                best_a = a_
                best_b = b_
    return best, int(best_a), int(best_b)
