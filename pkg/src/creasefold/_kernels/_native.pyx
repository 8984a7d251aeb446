# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled transport kernels; mirrors pyfallback exactly."""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()

IMPLEMENTATION = "native"


def rk4_frame_2d(const double[::1] sp_n, const double[::1] sp_m,
                 const double[::1] cv_n, const double[::1] cv_m,
                 double h, x0, t0):
    cdef Py_ssize_t n = sp_n.shape[0]
    cdef cnp.ndarray[double, ndim=2] pts = np.empty((n, 2))
    cdef cnp.ndarray[double, ndim=2] tan = np.empty((n, 2))
    cdef cnp.ndarray[double, ndim=2] nrm = np.empty((n, 2))
    cdef double x = x0[0], y = x0[1], tx = t0[0], ty = t0[1]
    cdef double drift = 0.0, norm
    cdef double s1, s2, s3, k1c, k2c, k3c
    cdef double ax1, ay1, atx1, aty1
    cdef double ax2, ay2, atx2, aty2
    cdef double ax3, ay3, atx3, aty3
    cdef double ax4, ay4, atx4, aty4
    cdef double bx, by, btx, bty
    cdef Py_ssize_t j

    pts[0, 0] = x; pts[0, 1] = y
    tan[0, 0] = tx; tan[0, 1] = ty
    for j in range(n - 1):
        s1 = sp_n[j]; k1c = cv_n[j]
        s2 = sp_m[j]; k2c = cv_m[j]
        s3 = sp_n[j + 1]; k3c = cv_n[j + 1]

        ax1 = s1 * tx; ay1 = s1 * ty
        atx1 = -s1 * k1c * ty; aty1 = s1 * k1c * tx

        bx = x + 0.5 * h * ax1; by = y + 0.5 * h * ay1
        btx = tx + 0.5 * h * atx1; bty = ty + 0.5 * h * aty1
        ax2 = s2 * btx; ay2 = s2 * bty
        atx2 = -s2 * k2c * bty; aty2 = s2 * k2c * btx

        bx = x + 0.5 * h * ax2; by = y + 0.5 * h * ay2
        btx = tx + 0.5 * h * atx2; bty = ty + 0.5 * h * aty2
        ax3 = s2 * btx; ay3 = s2 * bty
        atx3 = -s2 * k2c * bty; aty3 = s2 * k2c * btx

        bx = x + h * ax3; by = y + h * ay3
        btx = tx + h * atx3; bty = ty + h * aty3
        ax4 = s3 * btx; ay4 = s3 * bty
        atx4 = -s3 * k3c * bty; aty4 = s3 * k3c * btx

        x += (h / 6.0) * (ax1 + 2.0 * ax2 + 2.0 * ax3 + ax4)
        y += (h / 6.0) * (ay1 + 2.0 * ay2 + 2.0 * ay3 + ay4)
        tx += (h / 6.0) * (atx1 + 2.0 * atx2 + 2.0 * atx3 + atx4)
        ty += (h / 6.0) * (aty1 + 2.0 * aty2 + 2.0 * aty3 + aty4)

        norm = sqrt(tx * tx + ty * ty)
        if fabs(norm - 1.0) > drift:
            drift = fabs(norm - 1.0)
        tx /= norm
        ty /= norm

        pts[j + 1, 0] = x; pts[j + 1, 1] = y
        tan[j + 1, 0] = tx; tan[j + 1, 1] = ty

    for j in range(n):
        nrm[j, 0] = -tan[j, 1]
        nrm[j, 1] = tan[j, 0]
    return pts, tan, nrm, drift


cdef inline void _rhs3(double s, double K, double tau, double* st, double* out) noexcept:
    # st = (X, T, N, B) flattened; out = derivative
    cdef Py_ssize_t i
    for i in range(3):
        out[i] = s * st[3 + i]
        out[3 + i] = s * K * st[6 + i]
        out[6 + i] = s * (-K * st[3 + i] + tau * st[9 + i])
        out[9 + i] = -s * tau * st[6 + i]


def rk4_frame_3d(const double[::1] sp_n, const double[::1] sp_m,
                 const double[::1] K_n, const double[::1] K_m,
                 const double[::1] tau_n, const double[::1] tau_m,
                 double h, X0, T0, N0, B0):
    cdef Py_ssize_t n = sp_n.shape[0]
    cdef cnp.ndarray[double, ndim=2] X = np.empty((n, 3))
    cdef cnp.ndarray[double, ndim=2] T = np.empty((n, 3))
    cdef cnp.ndarray[double, ndim=2] N = np.empty((n, 3))
    cdef cnp.ndarray[double, ndim=2] B = np.empty((n, 3))
    cdef double st[12]
    cdef double tmp[12]
    cdef double k1[12]
    cdef double k2[12]
    cdef double k3[12]
    cdef double k4[12]
    cdef double drift = 0.0, defect, tn, dot, nn_norm
    cdef double bx, by, bz
    cdef Py_ssize_t i, j

    for i in range(3):
        st[i] = X0[i]; st[3 + i] = T0[i]; st[6 + i] = N0[i]; st[9 + i] = B0[i]
        X[0, i] = st[i]; T[0, i] = st[3 + i]; N[0, i] = st[6 + i]; B[0, i] = st[9 + i]

    for j in range(n - 1):
        _rhs3(sp_n[j], K_n[j], tau_n[j], st, k1)
        for i in range(12):
            tmp[i] = st[i] + 0.5 * h * k1[i]
        _rhs3(sp_m[j], K_m[j], tau_m[j], tmp, k2)
        for i in range(12):
            tmp[i] = st[i] + 0.5 * h * k2[i]
        _rhs3(sp_m[j], K_m[j], tau_m[j], tmp, k3)
        for i in range(12):
            tmp[i] = st[i] + h * k3[i]
        _rhs3(sp_n[j + 1], K_n[j + 1], tau_n[j + 1], tmp, k4)
        for i in range(12):
            st[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])

        tn = sqrt(st[3] * st[3] + st[4] * st[4] + st[5] * st[5])
        dot = (st[3] * st[6] + st[4] * st[7] + st[5] * st[8]) / tn
        defect = fabs(tn - 1.0)
        if fabs(dot) > defect:
            defect = fabs(dot)
        nn_norm = sqrt(st[6] * st[6] + st[7] * st[7] + st[8] * st[8])
        if fabs(nn_norm - 1.0) > defect:
            defect = fabs(nn_norm - 1.0)
        for i in range(3):
            st[3 + i] /= tn
        dot = st[3] * st[6] + st[4] * st[7] + st[5] * st[8]
        for i in range(3):
            st[6 + i] -= dot * st[3 + i]
        nn_norm = sqrt(st[6] * st[6] + st[7] * st[7] + st[8] * st[8])
        for i in range(3):
            st[6 + i] /= nn_norm
        bx = st[4] * st[8] - st[5] * st[7]
        by = st[5] * st[6] - st[3] * st[8]
        bz = st[3] * st[7] - st[4] * st[6]
        dot = sqrt((st[9] - bx) ** 2 + (st[10] - by) ** 2 + (st[11] - bz) ** 2)
        if dot > defect:
            defect = dot
        if defect > drift:
            drift = defect
        st[9] = bx; st[10] = by; st[11] = bz

        for i in range(3):
            X[j + 1, i] = st[i]
            T[j + 1, i] = st[3 + i]
            N[j + 1, i] = st[6 + i]
            B[j + 1, i] = st[9 + i]

    return X, T, N, B, drift


def rk4_linear(const double[::1] a_n, const double[::1] a_m,
               const double[::1] b_n, const double[::1] b_m,
               double h, double y0):
    cdef Py_ssize_t n = a_n.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n)
    cdef double y = y0, k1, k2, k3, k4
    cdef Py_ssize_t j
    out[0] = y
    for j in range(n - 1):
        k1 = a_n[j] * y + b_n[j]
        k2 = a_m[j] * (y + 0.5 * h * k1) + b_m[j]
        k3 = a_m[j] * (y + 0.5 * h * k2) + b_m[j]
        k4 = a_n[j + 1] * (y + h * k3) + b_n[j + 1]
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[j + 1] = y
    return out
