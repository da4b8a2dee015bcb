# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled group-ring kernels; same contracts as taut._pykernels."""
import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64


def axis_transform(const i64[:, :, :, ::1] data, const i64[:, ::1] E, Py_ssize_t step):
    cdef Py_ssize_t pre = data.shape[0], q = data.shape[1]
    cdef Py_ssize_t post = data.shape[2], m = data.shape[3]
    out_arr = np.zeros((pre, q, post, m), dtype=np.int64)
    cdef i64[:, :, :, ::1] out = out_arr
    cdef Py_ssize_t a, x, xi, b, k, s, t
    cdef i64 c
    for x in range(q):
        for xi in range(q):
            s = (step * E[x, xi]) % m
            if s < 0:
                s += m
            for a in range(pre):
                for b in range(post):
                    t = s
                    for k in range(m):
                        c = data[a, x, b, k]
                        if c != 0:
                            out[a, xi, b, t] += c
                        t += 1
                        if t == m:
                            t = 0
    return out_arr


def pair_transform(const i64[:, ::1] data, const i64[:, ::1] P, Py_ssize_t step):
    cdef Py_ssize_t n = data.shape[0], m = data.shape[1], nout = P.shape[1]
    out_arr = np.zeros((nout, m), dtype=np.int64)
    cdef i64[:, ::1] out = out_arr
    cdef Py_ssize_t x, xi, k, s, t
    cdef i64 c
    cdef bint nonzero
    for x in range(n):
        nonzero = False
        for k in range(m):
            if data[x, k] != 0:
                nonzero = True
                break
        if not nonzero:
            continue
        for xi in range(nout):
            s = (step * P[x, xi]) % m
            if s < 0:
                s += m
            t = s
            for k in range(m):
                c = data[x, k]
                if c != 0:
                    out[xi, t] += c
                t += 1
                if t == m:
                    t = 0
    return out_arr


def cyclic_outer(const i64[:, ::1] f, const i64[:, ::1] g):
    cdef Py_ssize_t a = f.shape[0], b = g.shape[0], m = f.shape[1]
    out_arr = np.zeros((a, b, m), dtype=np.int64)
    cdef i64[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j, k, l, t
    cdef i64 c
    for i in range(a):
        for k in range(m):
            c = f[i, k]
            if c == 0:
                continue
            for j in range(b):
                t = k
                for l in range(m):
                    out[i, j, t] += c * g[j, l]
                    t += 1
                    if t == m:
                        t = 0
    return out_arr


def cyclic_rowmul(const i64[:, ::1] f, const i64[:, ::1] g):
    cdef Py_ssize_t a = f.shape[0], m = f.shape[1]
    out_arr = np.zeros((a, m), dtype=np.int64)
    cdef i64[:, ::1] out = out_arr
    cdef Py_ssize_t i, k, l, t
    cdef i64 c
    for i in range(a):
        for k in range(m):
            c = f[i, k]
            if c == 0:
                continue
            t = k
            for l in range(m):
                out[i, t] += c * g[i, l]
                t += 1
                if t == m:
                    t = 0
    return out_arr
