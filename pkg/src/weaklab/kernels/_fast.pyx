# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: hot per-cube reductions and sorted-scan suprema.

Semantics match ``weaklab.kernels.pure`` exactly; see there for the
segment layout contract.  Per-cube sums use Kahan compensation so that
characteristic ratios stay stable on large families.
"""

from libc.stdlib cimport malloc, free, qsort
from libc.math cimport pow, INFINITY

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "fast"

ctypedef struct FPair:
    double f
    double m


cdef int _cmp_pair_desc(const void* a, const void* b) noexcept nogil:
    cdef double fa = (<const FPair*> a).f
    cdef double fb = (<const FPair*> b).f
    if fa < fb:
        return 1
    if fa > fb:
        return -1
    return 0


cdef int _cmp_double_desc(const void* a, const void* b) noexcept nogil:
    cdef double fa = (<const double*> a)[0]
    cdef double fb = (<const double*> b)[0]
    if fa < fb:
        return 1
    if fa > fb:
        return -1
    return 0


def cube_sums(const double[::1] values, const cnp.intp_t[::1] seg_starts,
              const cnp.intp_t[::1] seg_ends, const cnp.intp_t[::1] cube_offsets):
    cdef Py_ssize_t ncubes = cube_offsets.shape[0] - 1
    out_arr = np.empty(ncubes)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, j, i
    cdef double s, c, y, t
    with nogil:
        for k in range(ncubes):
            s = 0.0
            c = 0.0
            for j in range(cube_offsets[k], cube_offsets[k + 1]):
                for i in range(seg_starts[j], seg_ends[j]):
                    y = values[i] - c
                    t = s + y
                    c = (t - s) - y
                    s = t
            out[k] = s
    return out_arr


def cube_mins(const double[::1] values, const cnp.intp_t[::1] seg_starts,
              const cnp.intp_t[::1] seg_ends, const cnp.intp_t[::1] cube_offsets):
    cdef Py_ssize_t ncubes = cube_offsets.shape[0] - 1
    out_arr = np.empty(ncubes)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, j, i
    cdef double lo
    with nogil:
        for k in range(ncubes):
            lo = INFINITY
            for j in range(cube_offsets[k], cube_offsets[k + 1]):
                for i in range(seg_starts[j], seg_ends[j]):
                    if values[i] < lo:
                        lo = values[i]
            out[k] = lo
    return out_arr


def cube_maxs(const double[::1] values, const cnp.intp_t[::1] seg_starts,
              const cnp.intp_t[::1] seg_ends, const cnp.intp_t[::1] cube_offsets):
    cdef Py_ssize_t ncubes = cube_offsets.shape[0] - 1
    out_arr = np.empty(ncubes)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, j, i
    cdef double hi
    with nogil:
        for k in range(ncubes):
            hi = -INFINITY
            for j in range(cube_offsets[k], cube_offsets[k + 1]):
                for i in range(seg_starts[j], seg_ends[j]):
                    if values[i] > hi:
                        hi = values[i]
            out[k] = hi
    return out_arr


def cube_weak_norms(const double[::1] fvals, const double[::1] masses,
                    const cnp.intp_t[::1] seg_starts, const cnp.intp_t[::1] seg_ends,
                    const cnp.intp_t[::1] cube_offsets, double invp):
    cdef Py_ssize_t ncubes = cube_offsets.shape[0] - 1
    out_arr = np.zeros(ncubes)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, j, i, n, maxn = 0
    cdef double cm, cand, best
    cdef FPair* buf
    for k in range(ncubes):
        n = 0
        for j in range(cube_offsets[k], cube_offsets[k + 1]):
            n += seg_ends[j] - seg_starts[j]
        if n > maxn:
            maxn = n
    if maxn == 0:
        return out_arr
    buf = <FPair*> malloc(maxn * sizeof(FPair))
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            for k in range(ncubes):
                n = 0
                for j in range(cube_offsets[k], cube_offsets[k + 1]):
                    for i in range(seg_starts[j], seg_ends[j]):
                        buf[n].f = fvals[i]
                        buf[n].m = masses[i]
                        n += 1
                qsort(buf, n, sizeof(FPair), _cmp_pair_desc)
                cm = 0.0
                best = 0.0
                for i in range(n):
                    cm += buf[i].m
                    if buf[i].f > 0.0:
                        cand = buf[i].f * pow(cm, invp)
                        if cand > best:
                            best = cand
                out[k] = best
    finally:
        free(buf)
    return out_arr


def paint_max(double[::1] out, const cnp.intp_t[::1] seg_starts,
              const cnp.intp_t[::1] seg_ends, const cnp.intp_t[::1] cube_offsets,
              const double[::1] cube_values):
    cdef Py_ssize_t ncubes = cube_offsets.shape[0] - 1
    cdef Py_ssize_t k, j, i
    cdef double v
    with nogil:
        for k in range(ncubes):
            v = cube_values[k]
            for j in range(cube_offsets[k], cube_offsets[k + 1]):
                for i in range(seg_starts[j], seg_ends[j]):
                    if v > out[i]:
                        out[i] = v
    return np.asarray(out)


def sup_scan_rows(h, double delta, double power):
    h_arr = np.ascontiguousarray(h, dtype=np.float64)
    cdef double[:, ::1] hv = h_arr
    cdef Py_ssize_t nrows = hv.shape[0]
    cdef Py_ssize_t ncols = hv.shape[1]
    out_arr = np.zeros(nrows)
    cdef double[::1] out = out_arr
    cdef double* buf
    cdef Py_ssize_t r, i
    cdef double cand, best
    if ncols == 0:
        return out_arr
    buf = <double*> malloc(ncols * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            for r in range(nrows):
                for i in range(ncols):
                    buf[i] = hv[r, i]
                qsort(buf, ncols, sizeof(double), _cmp_double_desc)
                best = 0.0
                for i in range(ncols):
                    if buf[i] <= 0.0:
                        break
                    cand = buf[i] * pow((i + 1) * delta, power)
                    if cand > best:
                        best = cand
                out[r] = best
    finally:
        free(buf)
    return out_arr
