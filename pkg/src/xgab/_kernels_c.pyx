# cython: boundscheck=False, wraparound=False, cdivision=True
"""Dense GF(q) matrix kernels, compiled implementation.

Mirrors xgab._kernels_pure exactly: same pivot rule (leftmost nonzero column,
first nonzero row scanning downward), same normalization, bit-identical
outputs. Only the inner loops differ.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


cdef long long _inv_mod(long long a, long long q):
    # extended Euclid; q prime, a in (0, q)
    cdef long long t = 0, new_t = 1, r = q, new_r = a, quot, tmp
    while new_r != 0:
        quot = r / new_r
        tmp = t - quot * new_t
        t = new_t
        new_t = tmp
        tmp = r - quot * new_r
        r = new_r
        new_r = tmp
    if t < 0:
        t += q
    return t


def rref_mod(a, long long q):
    """Reduced row echelon form of `a` modulo prime q.

    Returns (r, rank, pivots); see the pure backend for the contract.
    """
    arr = np.array(a, dtype=np.int64, order="C") % q
    if arr.ndim != 2:
        raise ValueError("rref_mod expects a 2-D array")
    cdef cnp.int64_t[:, ::1] r = arr
    cdef Py_ssize_t rows = arr.shape[0], cols = arr.shape[1]
    cdef Py_ssize_t piv_row = 0, col, i, j, sel
    cdef long long inv, factor, tmp
    pivots = []
    for col in range(cols):
        if piv_row == rows:
            break
        sel = -1
        for i in range(piv_row, rows):
            if r[i, col] != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != piv_row:
            for j in range(col, cols):
                tmp = r[piv_row, j]
                r[piv_row, j] = r[sel, j]
                r[sel, j] = tmp
        inv = _inv_mod(r[piv_row, col], q)
        if inv != 1:
            for j in range(col, cols):
                r[piv_row, j] = (r[piv_row, j] * inv) % q
        for i in range(rows):
            if i == piv_row:
                continue
            factor = r[i, col]
            if factor == 0:
                continue
            for j in range(col, cols):
                tmp = r[i, j] - factor * r[piv_row, j]
                tmp %= q
                if tmp < 0:
                    tmp += q
                r[i, j] = tmp
        pivots.append(col)
        piv_row += 1
    return arr, int(piv_row), pivots


def matmul_mod(a, b, long long q):
    """(a @ b) mod q for int matrices."""
    am = np.ascontiguousarray(np.asarray(a, dtype=np.int64) % q)
    bm = np.ascontiguousarray(np.asarray(b, dtype=np.int64) % q)
    if am.ndim != 2 or bm.ndim != 2 or am.shape[1] != bm.shape[0]:
        # delegate shape handling (vectors, broadcasting) to numpy
        return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % q
    cdef cnp.int64_t[:, ::1] av = am
    cdef cnp.int64_t[:, ::1] bv = bm
    out = np.zeros((am.shape[0], bm.shape[1]), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] cv = out
    cdef Py_ssize_t n = am.shape[0], k = am.shape[1], p = bm.shape[1]
    cdef Py_ssize_t i, j, l
    cdef long long aval
    for i in range(n):
        for l in range(k):
            aval = av[i, l]
            if aval == 0:
                continue
            for j in range(p):
                cv[i, j] += aval * bv[l, j]
        for j in range(p):
            cv[i, j] %= q
    return out


def rank_mod(a, long long q):
    return rref_mod(a, q)[1]
