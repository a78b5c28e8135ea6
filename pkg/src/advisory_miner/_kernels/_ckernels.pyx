# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Same contracts as ``_pykernels``."""

from libc.math cimport fabs, log2, INFINITY, NAN
import numpy as np

cdef double _TINY = 1e-300


cpdef double betacf(double a, double b, double x, double eps=1e-16, int max_iter=10000) except? -1.0:
    cdef double qab = a + b
    cdef double qap = a + 1.0
    cdef double qam = a - 1.0
    cdef double c = 1.0
    cdef double d = 1.0 - qab * x / qap
    cdef double h, aa, delta
    cdef int m, m2
    if fabs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if fabs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if fabs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if fabs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if fabs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < eps:
            return h
    raise ArithmeticError(f"betacf did not converge for a={a}, b={b}, x={x}")


def sq_distances(const double[:] query, const double[:, :] train,
                 const unsigned char[:] nominal, const double[:] scale):
    cdef Py_ssize_t n = train.shape[0], p = train.shape[1], r, j
    cdef double s, diff
    out = np.empty(n)
    cdef double[:] o = out
    for r in range(n):
        s = 0.0
        for j in range(p):
            if nominal[j]:
                if train[r, j] != query[j]:
                    s += 1.0
            else:
                diff = (train[r, j] - query[j]) * scale[j]
                s += diff * diff
        o[r] = s
    return out


cdef inline double _xlog2x(double v) nogil:
    return v * log2(v) if v > 0 else 0.0


def best_numeric_split(const double[:] values, const Py_ssize_t[:] labels, int n_classes, int min_leaf):
    cdef Py_ssize_t n = values.shape[0], i, nl
    cdef Py_ssize_t c
    right_arr = np.zeros(n_classes, dtype=np.float64)
    left_arr = np.zeros(n_classes, dtype=np.float64)
    cdef double[:] right = right_arr
    cdef double[:] left = left_arr
    cdef double sum_right = 0.0, sum_left = 0.0, total_term, w
    cdef double best = INFINITY
    cdef Py_ssize_t best_i = -1
    for i in range(n):
        right[labels[i]] += 1
    for c in range(n_classes):
        sum_right += _xlog2x(right[c])
    total_term = _xlog2x(<double>n) - sum_right
    for i in range(n - 1):
        c = labels[i]
        sum_left -= _xlog2x(left[c])
        sum_right -= _xlog2x(right[c])
        left[c] += 1
        right[c] -= 1
        sum_left += _xlog2x(left[c])
        sum_right += _xlog2x(right[c])
        nl = i + 1
        if values[i] >= values[i + 1] or nl < min_leaf or n - nl < min_leaf:
            continue
        w = _xlog2x(<double>nl) - sum_left + _xlog2x(<double>(n - nl)) - sum_right
        if w < best - 1e-12:
            best = w
            best_i = i
    if best_i < 0:
        return -1.0, NAN, 0.0, 0
    nl = best_i + 1
    cdef double gain = (total_term - best) / n
    cdef double pl = <double>nl / n
    cdef double pr = 1.0 - pl
    cdef double split_info = -(pl * log2(pl) + pr * log2(pr))
    return gain, (values[best_i] + values[best_i + 1]) / 2.0, split_info, nl
