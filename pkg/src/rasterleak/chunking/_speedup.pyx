# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled chunking hot kernels: sliding-correlation master scan and
multi-offset Pearson evaluation.  Rolling window sums make the scan O(1)
per position; on clean signals it exits after a handful of positions."""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt
from libc.stdlib cimport free, malloc

cnp.import_array()


def scan_master(double[::1] env, long[::1] sizes, long L, double T):
    cdef long n = env.shape[0]
    cdef long ns = sizes.shape[0]
    cdef long max_j = 0
    cdef long k, j, i, p, p_last
    for k in range(ns):
        if sizes[k] > max_j:
            max_j = sizes[k]
    p_last = n - max_j - L
    if p_last < 0:
        return -1, -1

    cdef double *sy = <double *> malloc(ns * sizeof(double))
    cdef double *syy = <double *> malloc(ns * sizeof(double))
    cdef double *cross = <double *> malloc(ns * sizeof(double))
    if sy == NULL or syy == NULL or cross == NULL:
        free(sy); free(syy); free(cross)
        raise MemoryError()

    cdef double sx = 0.0, sxx = 0.0
    cdef double vx, vy, num, denom, c, best
    cdef long best_k
    cdef double e_new, e_old
    try:
        for i in range(L):
            sx += env[i]
            sxx += env[i] * env[i]
        for k in range(ns):
            j = sizes[k]
            sy[k] = 0.0
            syy[k] = 0.0
            cross[k] = 0.0
            for i in range(L):
                sy[k] += env[j + i]
                syy[k] += env[j + i] * env[j + i]
                cross[k] += env[i] * env[j + i]

        for p in range(p_last + 1):
            vx = sxx - sx * sx / L
            best = -2.0
            best_k = -1
            for k in range(ns):
                vy = syy[k] - sy[k] * sy[k] / L
                if vx > 0 and vy > 0:
                    num = cross[k] - sx * sy[k] / L
                    c = num / sqrt(vx * vy)
                else:
                    c = 0.0
                if c > best:
                    best = c
                    best_k = k
            if best > T:
                return p, int(sizes[best_k])
            if p == p_last:
                break
            e_new = env[p + L]
            e_old = env[p]
            sx += e_new - e_old
            sxx += e_new * e_new - e_old * e_old
            for k in range(ns):
                j = sizes[k]
                sy[k] += env[p + j + L] - env[p + j]
                syy[k] += env[p + j + L] * env[p + j + L] - env[p + j] * env[p + j]
                cross[k] += e_new * env[p + j + L] - e_old * env[p + j]
        return -1, -1
    finally:
        free(sy)
        free(syy)
        free(cross)


def range_corr(double[::1] env, long off0, long count, long L, double[::1] ref_z):
    cdef cnp.ndarray[double, ndim=1] out = np.zeros(count, dtype=np.float64)
    cdef double[::1] out_v = out
    cdef long i, m, off
    cdef double sx = 0.0, sxx = 0.0, cross, vx, c
    cdef double e_new, e_old

    for i in range(L):
        sx += env[off0 + i]
        sxx += env[off0 + i] * env[off0 + i]
    for m in range(count):
        off = off0 + m
        cross = 0.0
        for i in range(L):
            cross += ref_z[i] * env[off + i]
        vx = sxx - sx * sx / L
        if vx > 0:
            c = cross / sqrt(vx)
            if c > 1.0:
                c = 1.0
            elif c < -1.0:
                c = -1.0
            out_v[m] = c
        if m < count - 1:
            e_new = env[off + L]
            e_old = env[off]
            sx += e_new - e_old
            sxx += e_new * e_new - e_old * e_old
    return out
