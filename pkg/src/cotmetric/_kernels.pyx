# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-face kernels in u-coordinates (u = d**2 / 2).

Mirrors :mod:`cotmetric._kernels_py` exactly; see there for the formulas.
Inputs are ``(F, 3)`` C-contiguous float64 arrays whose columns hold the
u-values of the three edges opposite the three corners of each face.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


cdef inline double _kahan_area(double ux, double uy, double uz) noexcept nogil:
    cdef double a = sqrt(2.0 * ux)
    cdef double b = sqrt(2.0 * uy)
    cdef double c = sqrt(2.0 * uz)
    cdef double t
    # sort a >= b >= c
    if a < b:
        t = a; a = b; b = t
    if b < c:
        t = b; b = c; c = t
    if a < b:
        t = a; a = b; b = t
    t = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
    if t <= 0.0:
        return 0.0
    return 0.25 * sqrt(t)


def face_areas(const double[:, ::1] uf):
    cdef Py_ssize_t n = uf.shape[0], f
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for f in range(n):
            o[f] = _kahan_area(uf[f, 0], uf[f, 1], uf[f, 2])
    return out


def face_cotangents(const double[:, ::1] uf):
    cdef Py_ssize_t n = uf.shape[0], f
    cdef double u0, u1, u2, inv2a
    out = np.empty((n, 3), dtype=np.float64)
    cdef double[:, ::1] o = out
    with nogil:
        for f in range(n):
            u0 = uf[f, 0]; u1 = uf[f, 1]; u2 = uf[f, 2]
            inv2a = 0.5 / _kahan_area(u0, u1, u2)
            o[f, 0] = (u1 + u2 - u0) * inv2a
            o[f, 1] = (u0 + u2 - u1) * inv2a
            o[f, 2] = (u0 + u1 - u2) * inv2a
    return out


def face_hessians(const double[:, ::1] uf):
    cdef Py_ssize_t n = uf.shape[0], f
    cdef double u0, u1, u2, a, s
    out = np.empty((n, 3, 3), dtype=np.float64)
    cdef double[:, :, ::1] o = out
    with nogil:
        for f in range(n):
            u0 = uf[f, 0]; u1 = uf[f, 1]; u2 = uf[f, 2]
            a = _kahan_area(u0, u1, u2)
            s = 0.25 / (a * a * a)
            o[f, 0, 0] = -2.0 * s * u1 * u2
            o[f, 1, 1] = -2.0 * s * u0 * u2
            o[f, 2, 2] = -2.0 * s * u0 * u1
            o[f, 0, 1] = s * u2 * (u0 + u1 - u2)
            o[f, 1, 0] = o[f, 0, 1]
            o[f, 0, 2] = s * u1 * (u0 + u2 - u1)
            o[f, 2, 0] = o[f, 0, 2]
            o[f, 1, 2] = s * u0 * (u1 + u2 - u0)
            o[f, 2, 1] = o[f, 1, 2]
    return out
