# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; numerically matches ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, sin, cos, exp, fabs, fmod, M_PI, M_E

cnp.import_array()

cdef double SCHWEFEL_PEAK = 418.9828872724338


cdef double _row(int code, const double[::1] z, Py_ssize_t d) noexcept nogil:
    cdef Py_ssize_t k
    cdef double s = 0.0, s2 = 0.0, p = 1.0, a, b, w, r
    if code == 0:
        for k in range(d):
            s += z[k] * z[k]
        return s
    if code == 1:
        for k in range(1, d):
            s += z[k] * z[k]
        return z[0] * z[0] + 1e6 * s
    if code == 2:
        for k in range(d):
            s += z[k] * z[k]
            s2 += 0.5 * (k + 1) * z[k]
        return s + s2 * s2 + s2 * s2 * s2 * s2
    if code == 3:
        if d == 1:
            return z[0] * z[0]
        for k in range(d):
            s += (1e6 ** (<double>k / (d - 1))) * z[k] * z[k]
        return s
    if code == 4:
        for k in range(d - 1):
            a = z[k] * z[k] - z[k + 1]
            b = z[k] - 1.0
            s += 100.0 * a * a + b * b
        return s
    if code == 5:
        for k in range(d):
            s += z[k] * z[k] - 10.0 * cos(2.0 * M_PI * z[k]) + 10.0
        return s
    if code == 6:
        for k in range(d):
            s += z[k] * z[k]
            s2 += cos(2.0 * M_PI * z[k])
        return -20.0 * exp(-0.2 * sqrt(s / d)) - exp(s2 / d) + 20.0 + M_E
    if code == 7:
        for k in range(d):
            s += z[k] * z[k]
            p *= cos(z[k] / sqrt(k + 1.0))
        return 1.0 + s / 4000.0 - p
    if code == 8:
        for k in range(d):
            a = z[k]
            if a > 500.0:
                r = 500.0 - fmod(a, 500.0)
                s += r * sin(sqrt(r)) - ((a - 500.0) / 100.0) ** 2 / d
            elif a < -500.0:
                r = fmod(fabs(a), 500.0)
                s += (r - 500.0) * sin(sqrt(500.0 - r)) - ((a + 500.0) / 100.0) ** 2 / d
            else:
                s += a * sin(sqrt(fabs(a)))
        return SCHWEFEL_PEAK * d - s
    # levy
    w = 1.0 + (z[0] - 1.0) / 4.0
    s = sin(M_PI * w) ** 2
    for k in range(d - 1):
        w = 1.0 + (z[k] - 1.0) / 4.0
        s += (w - 1.0) ** 2 * (1.0 + 10.0 * sin(M_PI * w + 1.0) ** 2)
    w = 1.0 + (z[d - 1] - 1.0) / 4.0
    return s + (w - 1.0) ** 2 * (1.0 + sin(2.0 * M_PI * w) ** 2)


def eval_base(int code, Z):
    if code < 0 or code > 9:
        raise ValueError(f"unknown base function code {code}")
    cdef double[:, ::1] zv = np.ascontiguousarray(Z, dtype=np.float64)
    cdef Py_ssize_t n = zv.shape[0], d = zv.shape[1], i
    out = np.empty(n)
    cdef double[::1] ov = out
    with nogil:
        for i in range(n):
            ov[i] = _row(code, zv[i], d)
    return out


def social_force(X, double f=0.5, double l=1.5):
    cdef double[:, ::1] xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], d = xv.shape[1], i, j, k
    out = np.zeros((n, d))
    cdef double[:, ::1] ov = out
    cdef double dist, t, r
    with nogil:
        for i in range(n):
            for j in range(n):
                if j == i:
                    continue
                dist = 0.0
                for k in range(d):
                    t = xv[j, k] - xv[i, k]
                    dist += t * t
                if dist <= 0.0:
                    continue
                dist = sqrt(dist)
                for k in range(d):
                    t = xv[j, k] - xv[i, k]
                    r = 2.0 + fmod(fabs(t), 2.0)
                    ov[i, k] += (f * exp(-r / l) - exp(-r)) * t / dist
    return out


def gravity(X, mass, active, weights, double G, double eps=2.220446049250313e-16):
    cdef double[:, ::1] xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef double[::1] mv = np.ascontiguousarray(mass, dtype=np.float64)
    cdef cnp.uint8_t[::1] av = np.ascontiguousarray(active, dtype=np.uint8)
    cdef double[:, ::1] wv = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], d = xv.shape[1], i, j, k
    out = np.zeros((n, d))
    cdef double[:, ::1] ov = out
    cdef double R, t, c
    with nogil:
        for i in range(n):
            for j in range(n):
                if j == i or not av[j]:
                    continue
                R = 0.0
                for k in range(d):
                    t = xv[j, k] - xv[i, k]
                    R += t * t
                c = wv[i, j] * G * mv[j] / (sqrt(R) + eps)
                for k in range(d):
                    ov[i, k] += c * (xv[j, k] - xv[i, k])
    return out


def signed_rank_counts(int n):
    cdef Py_ssize_t top = n * (n + 1) // 2, r, w
    out = np.zeros(top + 1)
    cdef double[::1] c = out
    c[0] = 1.0
    for r in range(1, n + 1):
        for w in range(top, r - 1, -1):
            c[w] += c[w - r]
    return out
