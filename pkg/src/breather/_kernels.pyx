# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_kernels_py`` for the reference semantics."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def cos_mul_batch(a, b):
    cdef double[:, ::1] A = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[:, ::1] B = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t n = A.shape[0], P = A.shape[1], Q = B.shape[1]
    out_arr = np.zeros((n, P + Q - 1))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, p, q, d
    cdef double ap, prod
    cdef bint nz
    for p in range(P):
        nz = False
        for i in range(n):
            if A[i, p] != 0.0:
                nz = True
                break
        if not nz:
            continue
        for q in range(Q):
            d = p - q if p >= q else q - p
            for i in range(n):
                prod = 0.5 * A[i, p] * B[i, q]
                out[i, p + q] += prod
                out[i, d] += prod
    return out_arr


def scan_exp_forward(f, double decay, double w0, double w1, double init):
    cdef double[::1] F = np.ascontiguousarray(f, dtype=np.float64)
    cdef Py_ssize_t n = F.shape[0], k
    y_arr = np.empty(n)
    cdef double[::1] y = y_arr
    cdef double acc = init
    y[0] = acc
    for k in range(n - 1):
        acc = decay * acc + (w0 * F[k] + w1 * F[k + 1])
        y[k + 1] = acc
    return y_arr


def scan_exp_backward(f, double decay, double w0, double w1, double tail):
    cdef double[::1] F = np.ascontiguousarray(f, dtype=np.float64)
    cdef Py_ssize_t n = F.shape[0], k
    y_arr = np.empty(n)
    cdef double[::1] y = y_arr
    cdef double acc = tail
    y[n - 1] = acc
    for k in range(n - 2, -1, -1):
        acc = decay * acc - (w0 * F[k] + w1 * F[k + 1])
        y[k] = acc
    return y_arr


def scan_rot_backward(f, R, p0, p1, tail):
    cdef double[:, ::1] F = np.ascontiguousarray(f, dtype=np.float64)
    cdef double[:, :, ::1] Rm = np.ascontiguousarray(R, dtype=np.float64)
    cdef double[:, ::1] P0 = np.ascontiguousarray(p0, dtype=np.float64)
    cdef double[:, ::1] P1 = np.ascontiguousarray(p1, dtype=np.float64)
    cdef double[:, ::1] T = np.ascontiguousarray(tail, dtype=np.float64)
    cdef Py_ssize_t nb = F.shape[0], n = F.shape[1], b, k
    out_arr = np.empty((nb, n, 2))
    cdef double[:, :, ::1] out = out_arr
    cdef double r00, r01, r10, r11, a0, a1, c0, c1, x, y, nx, ny, fk, fk1
    for b in range(nb):
        r00 = Rm[b, 0, 0]; r01 = Rm[b, 0, 1]; r10 = Rm[b, 1, 0]; r11 = Rm[b, 1, 1]
        a0 = P0[b, 0]; a1 = P0[b, 1]; c0 = P1[b, 0]; c1 = P1[b, 1]
        x = T[b, 0]; y = T[b, 1]
        out[b, n - 1, 0] = x
        out[b, n - 1, 1] = y
        for k in range(n - 2, -1, -1):
            fk = F[b, k]; fk1 = F[b, k + 1]
            nx = r00 * x + r01 * y - (a0 * fk + c0 * fk1)
            ny = r10 * x + r11 * y - (a1 * fk + c1 * fk1)
            x = nx; y = ny
            out[b, k, 0] = x
            out[b, k, 1] = y
    return out_arr
