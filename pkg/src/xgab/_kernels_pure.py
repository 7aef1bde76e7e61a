"""Dense GF(q) matrix kernels, numpy implementation.

Fallback backend when the compiled extension is unavailable. Both backends
implement the same deterministic algorithms and return bit-identical results:
row reduction pivots on the leftmost nonzero column and, within a column, the
first nonzero row scanning downward, with no randomization.
"""

import numpy as np

BACKEND = "pure"


def rref_mod(a, q):
    """Reduced row echelon form of `a` modulo prime q.

    Returns (r, rank, pivots) where pivots is the list of pivot column
    indices. Pivot entries are normalized to 1 and their columns cleared.
    """
    r = np.array(a, dtype=np.int64, order="C") % q
    if r.ndim != 2:
        raise ValueError("rref_mod expects a 2-D array")
    rows, cols = r.shape
    piv_row = 0
    pivots = []
    for col in range(cols):
        if piv_row == rows:
            break
        nz = np.nonzero(r[piv_row:, col])[0]
        if nz.size == 0:
            continue
        sel = piv_row + int(nz[0])
        if sel != piv_row:
            r[[piv_row, sel]] = r[[sel, piv_row]]
        inv = pow(int(r[piv_row, col]), -1, q)
        if inv != 1:
            r[piv_row, col:] = (r[piv_row, col:] * inv) % q
        # rows below previous pivots are zero left of `col`, so only the
        # tail of each row changes
        factors = r[:, col].copy()
        factors[piv_row] = 0
        mask = factors != 0
        if mask.any():
            r[mask, col:] = (
                r[mask, col:] - np.outer(factors[mask], r[piv_row, col:])
            ) % q
        pivots.append(col)
        piv_row += 1
    return r, piv_row, pivots


def matmul_mod(a, b, q):
    """(a @ b) mod q for int matrices; int64 accumulation never overflows
    for q < 2^16 and inner dimensions below ~2^30/q."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    return (a @ b) % q


def rank_mod(a, q):
    return rref_mod(a, q)[1]
