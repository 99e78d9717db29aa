# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Compiled search-objective kernel.

Contracts and parameter layout match fudist._kernels._fallback; parity is
enforced by tests.  Hermitian blocks are diagonalized with a cyclic Jacobi
iteration (100-sweep cap, off-diagonal Frobenius threshold 1e-12), which is
exact enough at these block sizes and keeps the extension free of any
external linear-algebra dependency.
"""

from libc.stdlib cimport free, malloc
from libc.math cimport cos, hypot, sin, sqrt

import numpy as np

BACKEND = "cython"

cdef int MAX_SWEEPS = 100
cdef double OFF_TOL = 1e-12


cdef int _jacobi(double complex* a, double* w, double complex* v, int s) nogil:
    """Diagonalize Hermitian a (s x s, row-major, destroyed) in place.

    Eigenvalues land in w, eigenvector columns in v.  Returns 0 on
    convergence, -1 after the sweep cap.
    """
    cdef int i, p, q, sweep
    cdef double offsq, r, tau, t, c, sn
    cdef double complex apq, ph, x, y
    for i in range(s * s):
        v[i] = 0
    for i in range(s):
        v[i * s + i] = 1
    for sweep in range(MAX_SWEEPS):
        offsq = 0
        for p in range(s):
            for q in range(p + 1, s):
                apq = a[p * s + q]
                offsq += apq.real * apq.real + apq.imag * apq.imag
        if sqrt(2 * offsq) <= OFF_TOL:
            for i in range(s):
                w[i] = a[i * s + i].real
            return 0
        for p in range(s):
            for q in range(p + 1, s):
                apq = a[p * s + q]
                r = hypot(apq.real, apq.imag)
                if r == 0:
                    continue
                tau = (a[q * s + q].real - a[p * s + p].real) / (2 * r)
                if tau >= 0:
                    t = 1.0 / (tau + sqrt(1 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1 + tau * tau))
                c = 1.0 / sqrt(1 + t * t)
                sn = t * c
                ph = apq / r
                # right-multiply a and v by the rotation (columns p, q)
                for i in range(s):
                    x = a[i * s + p]
                    y = a[i * s + q]
                    a[i * s + p] = c * x - sn * ph.conjugate() * y
                    a[i * s + q] = sn * ph * x + c * y
                    x = v[i * s + p]
                    y = v[i * s + q]
                    v[i * s + p] = c * x - sn * ph.conjugate() * y
                    v[i * s + q] = sn * ph * x + c * y
                # left-multiply a by the adjoint rotation (rows p, q)
                for i in range(s):
                    x = a[p * s + i]
                    y = a[q * s + i]
                    a[p * s + i] = c * x - sn * ph * y
                    a[q * s + i] = sn * ph.conjugate() * x + c * y
    return -1


cdef int _expi_block(const double* params, int s, double complex* e,
                     double complex* wa, double complex* wv, double* ww) nogil:
    """exp(i H) for the Hermitian H encoded by params, written into e."""
    cdef int i, j, k, idx
    cdef double re, im
    cdef double complex z, phase
    for i in range(s * s):
        wa[i] = 0
    for i in range(s):
        wa[i * s + i] = params[i]
    idx = s
    for i in range(s):
        for j in range(i + 1, s):
            re = params[idx]
            im = params[idx + 1]
            idx += 2
            wa[i * s + j] = re + 1j * im
            wa[j * s + i] = re - 1j * im
    if _jacobi(wa, ww, wv, s) != 0:
        return -1
    for i in range(s):
        for j in range(s):
            z = 0
            for k in range(s):
                phase = cos(ww[k]) + 1j * sin(ww[k])
                z += wv[i * s + k] * phase * wv[j * s + k].conjugate()
            e[i * s + j] = z
    return 0


cdef int _build_w(const int* csizes, int nclusters, const double* params, int n,
                  double complex* wmat, double complex* wa, double complex* wv,
                  double complex* we, double* ww) nogil:
    """Assemble the block-diagonal unitary into wmat (n x n, zero-filled here)."""
    cdef int ci, s, off, k, i, j
    for i in range(n * n):
        wmat[i] = 0
    off = 0
    k = 0
    for ci in range(nclusters):
        s = csizes[ci]
        if s == 1:
            wmat[off * n + off] = cos(params[k]) + 1j * sin(params[k])
            k += 1
        else:
            if _expi_block(&params[k], s, we, wa, wv, ww) != 0:
                return -1
            for i in range(s):
                for j in range(s):
                    wmat[(off + i) * n + (off + j)] = we[i * s + j]
            k += s * s
        off += s
    return 0


cdef int* _sizes_to_c(sizes, int* nclusters_out, int* max_s_out, int* total_out) except NULL:
    cdef int nclusters = len(sizes)
    cdef int* csizes = <int*> malloc(nclusters * sizeof(int))
    if csizes == NULL:
        raise MemoryError()
    cdef int i, s, max_s = 1, total = 0
    for i in range(nclusters):
        s = sizes[i]
        csizes[i] = s
        if s > max_s:
            max_s = s
        total += s
    nclusters_out[0] = nclusters
    max_s_out[0] = max_s
    total_out[0] = total
    return csizes


def block_unitary(int n, sizes, const double[::1] params):
    """Block-diagonal unitary blockdiag(exp(i H_c)) from the parameter vector."""
    cdef int nclusters = 0, max_s = 0, total = 0
    cdef int* csizes = _sizes_to_c(sizes, &nclusters, &max_s, &total)
    if total != n:
        free(csizes)
        raise ValueError("cluster sizes do not sum to n")
    w_np = np.empty((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] wview = w_np
    cdef double complex* wa = <double complex*> malloc(max_s * max_s * sizeof(double complex))
    cdef double complex* wv = <double complex*> malloc(max_s * max_s * sizeof(double complex))
    cdef double complex* we = <double complex*> malloc(max_s * max_s * sizeof(double complex))
    cdef double* ww = <double*> malloc(max_s * sizeof(double))
    cdef int ok
    if wa == NULL or wv == NULL or we == NULL or ww == NULL:
        free(csizes); free(wa); free(wv); free(we); free(ww)
        raise MemoryError()
    ok = _build_w(csizes, nclusters, &params[0], n, &wview[0, 0], wa, wv, we, ww)
    free(csizes); free(wa); free(wv); free(we); free(ww)
    if ok != 0:
        raise RuntimeError("Jacobi eigensolver did not converge within 100 sweeps")
    return w_np


def fu_objective(const double complex[:, ::1] rho_t, int m, int n, sizes,
                 const double[::1] params, double tr_rho_sq):
    """d(rho, I (x) W(params)) for rho already rotated into the B eigenbasis."""
    cdef int nclusters = 0, max_s = 0, total = 0
    cdef int* csizes = _sizes_to_c(sizes, &nclusters, &max_s, &total)
    if total != n:
        free(csizes)
        raise ValueError("cluster sizes do not sum to n")
    cdef int mn = m * n
    cdef double complex* wmat = <double complex*> malloc(n * n * sizeof(double complex))
    cdef double complex* wa = <double complex*> malloc(max_s * max_s * sizeof(double complex))
    cdef double complex* wv = <double complex*> malloc(max_s * max_s * sizeof(double complex))
    cdef double complex* we = <double complex*> malloc(max_s * max_s * sizeof(double complex))
    cdef double* ww = <double*> malloc(max_s * sizeof(double))
    cdef double complex* fbuf = <double complex*> malloc(mn * mn * sizeof(double complex))
    cdef double complex* kbuf = <double complex*> malloc(mn * mn * sizeof(double complex))
    cdef int* cstart = <int*> malloc(n * sizeof(int))
    cdef int* cstop = <int*> malloc(n * sizeof(int))
    cdef int ok, ci, s, off, b, c, x, y, j, base
    cdef double complex zf, zk, rv
    cdef double tre, val
    if (wmat == NULL or wa == NULL or wv == NULL or we == NULL or ww == NULL
            or fbuf == NULL or kbuf == NULL or cstart == NULL or cstop == NULL):
        free(csizes); free(wmat); free(wa); free(wv); free(we); free(ww)
        free(fbuf); free(kbuf); free(cstart); free(cstop)
        raise MemoryError()
    try:
        ok = _build_w(csizes, nclusters, &params[0], n, wmat, wa, wv, we, ww)
        if ok != 0:
            raise RuntimeError("Jacobi eigensolver did not converge within 100 sweeps")
        off = 0
        for ci in range(nclusters):
            s = csizes[ci]
            for b in range(off, off + s):
                cstart[b] = off
                cstop[b] = off + s
            off += s
        # fbuf = rho (I x W), kbuf = rho (I x W^dag), using W's block structure
        for x in range(mn):
            for j in range(m):
                base = j * n
                for b in range(n):
                    zf = 0
                    zk = 0
                    for c in range(cstart[b], cstop[b]):
                        rv = rho_t[x, base + c]
                        zf = zf + rv * wmat[c * n + b]
                        zk = zk + rv * wmat[b * n + c].conjugate()
                    fbuf[x * mn + base + b] = zf
                    kbuf[x * mn + base + b] = zk
        # Re tr(rho U rho U^dag) = Re sum_{x,y} F[x,y] K[y,x]
        tre = 0
        for x in range(mn):
            for y in range(mn):
                zf = fbuf[x * mn + y]
                zk = kbuf[y * mn + x]
                tre += zf.real * zk.real - zf.imag * zk.imag
        val = tr_rho_sq - tre
        if val < 0:
            val = 0
        return sqrt(val)
    finally:
        free(csizes); free(wmat); free(wa); free(wv); free(we); free(ww)
        free(fbuf); free(kbuf); free(cstart); free(cstop)


def jacobi_eigh(a):
    """Cyclic-Jacobi eigendecomposition of a Hermitian matrix (test surface).

    Returns (values, vectors) with values ascending, matching the ordering
    convention of the LAPACK-backed path.
    """
    arr = np.array(a, dtype=np.complex128, order="C")
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("expected a square matrix")
    cdef int s = arr.shape[0]
    cdef double complex[:, ::1] aview = arr
    cdef double complex* buf = <double complex*> malloc(s * s * sizeof(double complex))
    cdef double complex* vbuf = <double complex*> malloc(s * s * sizeof(double complex))
    cdef double* wbuf = <double*> malloc(s * sizeof(double))
    cdef int i, j, ok
    if buf == NULL or vbuf == NULL or wbuf == NULL:
        free(buf); free(vbuf); free(wbuf)
        raise MemoryError()
    for i in range(s):
        for j in range(s):
            buf[i * s + j] = aview[i, j]
    ok = _jacobi(buf, wbuf, vbuf, s)
    values = np.empty(s, dtype=np.float64)
    vectors = np.empty((s, s), dtype=np.complex128)
    cdef double[::1] valview = values
    cdef double complex[:, ::1] vecview = vectors
    for i in range(s):
        valview[i] = wbuf[i]
        for j in range(s):
            vecview[i, j] = vbuf[i * s + j]
    free(buf); free(vbuf); free(wbuf)
    if ok != 0:
        raise RuntimeError("Jacobi eigensolver did not converge within 100 sweeps")
    order = np.argsort(values, kind="stable")
    return values[order], vectors[:, order]
