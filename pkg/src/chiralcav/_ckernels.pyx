# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: Pade matrix exponential and fixed-step RK4.

Same algorithms as ``_pykernels``; the loops run over raw C buffers so the
small (<= 10x10) sector blocks avoid numpy call overhead.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport ceil, log2, fabs
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy, memset
from scipy.linalg.cython_lapack cimport zgesv

cnp.import_array()

ctypedef double complex cplx

cdef double[5] _THETA = [1.495585217958292e-2, 2.539398330063230e-1,
                         9.504178996162932e-1, 2.097847961257068e0,
                         5.371920351148152e0]
cdef int[5] _DEGREES = [3, 5, 7, 9, 13]

cdef double[4] _B3 = [120.0, 60.0, 12.0, 1.0]
cdef double[6] _B5 = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0]
cdef double[8] _B7 = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0,
                      1512.0, 56.0, 1.0]
cdef double[10] _B9 = [17643225600.0, 8821612800.0, 2075673600.0,
                       302702400.0, 30270240.0, 2162160.0, 110880.0, 3960.0,
                       90.0, 1.0]
cdef double[14] _B13 = [64764752532480000.0, 32382376266240000.0,
                        7771770303897600.0, 1187353796428800.0,
                        129060195264000.0, 10559470521600.0, 670442572800.0,
                        33522128640.0, 1323241920.0, 40840800.0, 960960.0,
                        16380.0, 182.0, 1.0]


cdef inline void _matmul(const cplx* A, const cplx* B, cplx* C, int n) nogil:
    cdef int i, j, k
    cdef cplx aik
    memset(C, 0, n * n * sizeof(cplx))
    for i in range(n):
        for k in range(n):
            aik = A[i * n + k]
            if aik == 0:
                continue
            for j in range(n):
                C[i * n + j] += aik * B[k * n + j]


cdef inline void _matmul_rect(const cplx* A, const cplx* B, cplx* C,
                              int n, int m) nogil:
    # C (n x m) = A (n x n) @ B (n x m)
    cdef int i, j, k
    cdef cplx aik
    memset(C, 0, n * m * sizeof(cplx))
    for i in range(n):
        for k in range(n):
            aik = A[i * n + k]
            if aik == 0:
                continue
            for j in range(m):
                C[i * m + j] += aik * B[k * m + j]


cdef double _onenorm(const cplx* A, int n) nogil:
    cdef int i, j
    cdef double best = 0.0, col
    for j in range(n):
        col = 0.0
        for i in range(n):
            col += abs(A[i * n + j])
        if col > best:
            best = col
    return best


cdef void _pade_uv(const cplx* A, int n, int m, cplx* U, cplx* V,
                   cplx* w1, cplx* w2, cplx* w3, cplx* w4, cplx* w5) nogil:
    # w1..w5 are n*n scratch buffers
    cdef int nn = n * n, i, k, half
    cdef const double* b
    cdef cplx* A2 = w1
    cdef cplx* Pk = w2
    cdef cplx* Ui = w3
    cdef cplx* tmp = w4
    cdef cplx* A4
    cdef cplx* A6
    _matmul(A, A, A2, n)
    if m == 13:
        b = _B13
        A4 = w2
        A6 = w5
        _matmul(A2, A2, A4, n)
        _matmul(A4, A2, A6, n)
        for i in range(nn):
            tmp[i] = b[13] * A6[i] + b[11] * A4[i] + b[9] * A2[i]
        _matmul(A6, tmp, Ui, n)
        for i in range(nn):
            Ui[i] += b[7] * A6[i] + b[5] * A4[i] + b[3] * A2[i]
        for i in range(n):
            Ui[i * n + i] += b[1]
        _matmul(A, Ui, U, n)
        for i in range(nn):
            tmp[i] = b[12] * A6[i] + b[10] * A4[i] + b[8] * A2[i]
        _matmul(A6, tmp, V, n)
        for i in range(nn):
            V[i] += b[6] * A6[i] + b[4] * A4[i] + b[2] * A2[i]
        for i in range(n):
            V[i * n + i] += b[0]
        return
    if m == 3:
        b = _B3
    elif m == 5:
        b = _B5
    elif m == 7:
        b = _B7
    else:
        b = _B9
    half = m // 2
    memset(Ui, 0, nn * sizeof(cplx))
    memset(V, 0, nn * sizeof(cplx))
    memset(Pk, 0, nn * sizeof(cplx))
    for i in range(n):
        Pk[i * n + i] = 1.0
    for k in range(half + 1):
        if k > 0:
            _matmul(Pk, A2, tmp, n)
            memcpy(Pk, tmp, nn * sizeof(cplx))
        for i in range(nn):
            Ui[i] += b[2 * k + 1] * Pk[i]
            V[i] += b[2 * k] * Pk[i]
    _matmul(A, Ui, U, n)


def expm(A_in):
    """Scaling-and-squaring Pade exponential of a complex square matrix."""
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] A = np.array(A_in, dtype=np.complex128, order="C")
    cdef int n = A.shape[0]
    cdef int nn = n * n
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] R = np.empty((n, n), dtype=np.complex128)
    if n == 0:
        return R
    cdef cplx* a = &A[0, 0]
    cdef cplx* r = &R[0, 0]
    cdef double norm1 = _onenorm(a, n)
    cdef int m = 13, s = 0, i, k, info = 0
    for k in range(4):
        if norm1 <= _THETA[k]:
            m = _DEGREES[k]
            break
    if m == 13 and norm1 > _THETA[4]:
        s = <int>ceil(log2(norm1 / _THETA[4]))
        if s < 0:
            s = 0
    cdef double scale = 1.0
    for k in range(s):
        scale *= 0.5
    cdef cplx* buf = <cplx*>malloc(7 * nn * sizeof(cplx))
    cdef int* ipiv = <int*>malloc(n * sizeof(int))
    if buf == NULL or ipiv == NULL:
        free(buf)
        free(ipiv)
        raise MemoryError()
    cdef cplx* U = buf
    cdef cplx* V = buf + nn
    cdef cplx* w = buf + 2 * nn
    try:
        with nogil:
            for i in range(nn):
                a[i] = a[i] * scale
            _pade_uv(a, n, m, U, V, w, w + nn, w + 2 * nn, w + 3 * nn, w + 4 * nn)
            # Q = V - U (into w), P = V + U (into r)
            for i in range(nn):
                w[i] = V[i] - U[i]
                r[i] = V[i] + U[i]
            # Row-major buffers reach LAPACK transposed; P and Q are polynomials
            # in A and commute, so solving Q^T X = P^T still yields R = Q^-1 P.
            zgesv(&n, &n, w, &n, ipiv, r, &n, &info)
            for k in range(s):
                _matmul(r, r, U, n)
                memcpy(r, U, nn * sizeof(cplx))
    finally:
        free(buf)
        free(ipiv)
    if info != 0:
        raise np.linalg.LinAlgError(f"singular Pade denominator (info={info})")
    return R


def rk4_linear(G_in, Y0_in, times_in, steps_in):
    """Integrate dY/dt = G Y with classical RK4 and record Y at ``times``."""
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] G = np.array(G_in, dtype=np.complex128, order="C")
    Y0_arr = np.array(Y0_in, dtype=np.complex128, order="C")
    shape = Y0_arr.shape
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] Y = Y0_arr.reshape(shape[0], -1)
    cdef cnp.ndarray[double, ndim=1] times = np.asarray(times_in, dtype=np.float64)
    cdef cnp.ndarray[long, ndim=1] steps = np.asarray(steps_in, dtype=np.int_)
    cdef int n = G.shape[0]
    cdef int m = Y.shape[1]
    cdef int nm = n * m
    cdef Py_ssize_t nt = times.shape[0]
    cdef cnp.ndarray[cplx, ndim=3, mode="c"] out = np.empty((nt, n, m), dtype=np.complex128)
    if nm == 0:
        return out.reshape((nt,) + shape)
    cdef cplx* buf = <cplx*>malloc(6 * nm * sizeof(cplx))
    if buf == NULL:
        raise MemoryError()
    cdef cplx* y = buf
    cdef cplx* k1 = buf + nm
    cdef cplx* k2 = buf + 2 * nm
    cdef cplx* k3 = buf + 3 * nm
    cdef cplx* k4 = buf + 4 * nm
    cdef cplx* stage = buf + 5 * nm
    cdef cplx* g = &G[0, 0]
    cdef Py_ssize_t k
    cdef long step, nsteps
    cdef int i
    cdef double t_prev = 0.0, h, half
    try:
        memcpy(y, &Y[0, 0], nm * sizeof(cplx))
        with nogil:
            for k in range(nt):
                nsteps = steps[k]
                if nsteps > 0:
                    h = (times[k] - t_prev) / nsteps
                    half = 0.5 * h
                    for step in range(nsteps):
                        _matmul_rect(g, y, k1, n, m)
                        for i in range(nm):
                            stage[i] = y[i] + half * k1[i]
                        _matmul_rect(g, stage, k2, n, m)
                        for i in range(nm):
                            stage[i] = y[i] + half * k2[i]
                        _matmul_rect(g, stage, k3, n, m)
                        for i in range(nm):
                            stage[i] = y[i] + h * k3[i]
                        _matmul_rect(g, stage, k4, n, m)
                        for i in range(nm):
                            y[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
                memcpy(&out[k, 0, 0], y, nm * sizeof(cplx))
                t_prev = times[k]
    finally:
        free(buf)
    return out.reshape((nt,) + shape)
