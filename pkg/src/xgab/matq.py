"""Matrix utilities over GF(q) and GF(q^m), plus subspace counting.

Matrices over GF(q) are plain int64 numpy arrays with entries in [0, q); the
modulus is passed explicitly. Matrices over an extension field are numpy
object arrays of gf.ExtElem, which carry their field themselves, so the same
entry points dispatch on dtype. Row reduction is deterministic everywhere:
leftmost nonzero column, first nonzero row scanning downward.
"""

from __future__ import annotations

import math

import numpy as np

from .backend import matmul_mod, rank_mod, rref_mod
from .errors import NotSystematic

__all__ = [
    "matmul",
    "rref",
    "rank",
    "right_kernel",
    "solve",
    "inv",
    "systematic_form",
    "random_matrix",
    "random_invertible",
    "random_rank_t",
    "kron_identity",
    "gaussian_binomial",
    "subspace_prob_log2",
    "log2_int",
]


def _is_ext(M):
    return isinstance(M, np.ndarray) and M.dtype == object


def matmul(A, B, q=None):
    """A @ B over GF(q) (int arrays, q required) or GF(q^m) (object arrays).

    Both operands must be 2-D; mixed int/object operands are not supported.
    """
    if _is_ext(A) or _is_ext(B):
        A = np.asarray(A, dtype=object)
        B = np.asarray(B, dtype=object)
        r, s = A.shape
        s2, c = B.shape
        if s != s2:
            raise ValueError("shape mismatch")
        field = A[0, 0].field if A.size else B[0, 0].field
        out = np.empty((r, c), dtype=object)
        for i in range(r):
            for j in range(c):
                acc = field.zero()
                for l in range(s):
                    a = A[i, l]
                    if a:
                        acc = acc + a * B[l, j]
                out[i, j] = acc
        return out
    return matmul_mod(np.asarray(A), np.asarray(B), q)


def _rref_ext(M):
    R = np.array(M, dtype=object)
    rows, cols = R.shape
    piv_row = 0
    pivots = []
    for col in range(cols):
        if piv_row == rows:
            break
        sel = -1
        for i in range(piv_row, rows):
            if R[i, col]:
                sel = i
                break
        if sel < 0:
            continue
        if sel != piv_row:
            R[[piv_row, sel]] = R[[sel, piv_row]]
        pivinv = R[piv_row, col].inv()
        R[piv_row, col:] = R[piv_row, col:] * pivinv
        for i in range(rows):
            if i != piv_row and R[i, col]:
                R[i, col:] = R[i, col:] - R[piv_row, col:] * R[i, col]
        pivots.append(col)
        piv_row += 1
    return R, piv_row, pivots


def rref(M, q=None):
    """(R, rank, pivots) for a GF(q) int matrix or a GF(q^m) object matrix."""
    if _is_ext(M):
        return _rref_ext(M)
    if q is None:
        raise ValueError("q is required for base-field matrices")
    return rref_mod(np.asarray(M), q)


def rank(M, q=None):
    if _is_ext(M):
        return _rref_ext(M)[1]
    return rank_mod(np.asarray(M), q)


def right_kernel(M, q=None):
    """Rows spanning {x : M x^T = 0}; (cols - rank) rows, rref-derived so the
    basis is deterministic. Over GF(q^m) the input must be nonempty."""
    if _is_ext(M):
        R, rk, pivots = _rref_ext(M)
        rows, cols = M.shape
        if rows == 0:
            raise ValueError("cannot infer the field from an empty matrix")
        field = M[0, 0].field
        free = [c for c in range(cols) if c not in pivots]
        out = np.empty((len(free), cols), dtype=object)
        for idx, f in enumerate(free):
            for c in range(cols):
                out[idx, c] = field.zero()
            out[idx, f] = field.one()
            for i, p in enumerate(pivots):
                out[idx, p] = -R[i, f]
        return out
    R, rk, pivots = rref(M, q)
    cols = R.shape[1]
    pivset = set(pivots)
    free = [c for c in range(cols) if c not in pivset]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for idx, f in enumerate(free):
        out[idx, f] = 1
        for i, p in enumerate(pivots):
            out[idx, p] = (-R[i, f]) % q
    return out


def solve(A, B, q=None):
    """A particular solution X of A @ X = B (free variables set to zero).

    B may be a vector or a matrix; raises ValueError when inconsistent.
    """
    vec = np.asarray(B).ndim == 1
    if _is_ext(A):
        Bm = B.reshape(-1, 1) if vec else B
        aug = np.concatenate([A, Bm], axis=1)
        R, rk, pivots = _rref_ext(aug)
        n = A.shape[1]
        field = A[0, 0].field if A.size else Bm[0, 0].field
        if any(p >= n for p in pivots):
            raise ValueError("inconsistent linear system")
        X = np.empty((n, Bm.shape[1]), dtype=object)
        for i in range(n):
            for j in range(Bm.shape[1]):
                X[i, j] = field.zero()
        for i, p in enumerate(pivots):
            X[p, :] = R[i, n:]
        return X[:, 0] if vec else X
    A = np.asarray(A, dtype=np.int64)
    Bm = np.asarray(B, dtype=np.int64)
    if vec:
        Bm = Bm.reshape(-1, 1)
    aug = np.hstack([A, Bm])
    R, rk, pivots = rref(aug, q)
    n = A.shape[1]
    if any(p >= n for p in pivots):
        raise ValueError("inconsistent linear system")
    X = np.zeros((n, Bm.shape[1]), dtype=np.int64)
    for i, p in enumerate(pivots):
        X[p, :] = R[i, n:]
    return X[:, 0] if vec else X


def inv(M, q=None):
    """Inverse matrix; ValueError when singular."""
    if _is_ext(M):
        n = M.shape[0]
        field = M[0, 0].field
        eye = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                eye[i, j] = field.one() if i == j else field.zero()
        aug = np.concatenate([M, eye], axis=1)
        # the augmented matrix always has rank n; M is invertible exactly
        # when every pivot lands in the left half
        R, _, pivots = _rref_ext(aug)
        if list(pivots) != list(range(n)):
            raise ValueError("matrix is singular")
        return R[:, n:]
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    aug = np.hstack([M, np.eye(n, dtype=np.int64)])
    R, _, pivots = rref(aug, q)
    if list(pivots) != list(range(n)):
        raise ValueError("matrix is singular")
    return R[:, n:]


def systematic_form(G, q):
    """(M, G_sys) with M @ G = [I_K | *]; M is the inverse of the first K
    columns. Raises NotSystematic when those columns are singular and
    ValueError when G is not full row rank."""
    G = np.asarray(G, dtype=np.int64)
    K = G.shape[0]
    aug = np.hstack([G, np.eye(K, dtype=np.int64)])
    R, _, pivots = rref(aug, q)
    lead = [p for p in pivots if p < G.shape[1]]
    if len(lead) < K:
        raise ValueError("generator matrix is rank-deficient")
    if lead != list(range(K)):
        raise NotSystematic("leading K x K block is singular")
    return R[:, G.shape[1] :], R[:, : G.shape[1]]


def random_matrix(rows, cols, q, rng):
    return rng.integers(0, q, size=(rows, cols)).astype(np.int64)


def random_invertible(n, q, rng):
    """Uniform element of GL_n(F_q) by rejection."""
    if n < 1:
        raise ValueError("n must be positive")
    while True:
        M = random_matrix(n, n, q, rng)
        if rank(M, q) == n:
            return M


def random_rank_t(rows, cols, t, q, rng):
    """Uniform-ish matrix of rank exactly t, as U @ V with both factors
    resampled until they have rank t (then the product has rank t too)."""
    if t > min(rows, cols) or t < 0:
        raise ValueError("t must be in [0, min(rows, cols)]")
    if t == 0:
        return np.zeros((rows, cols), dtype=np.int64)
    while True:
        U = random_matrix(rows, t, q, rng)
        if rank(U, q) == t:
            break
    while True:
        V = random_matrix(t, cols, q, rng)
        if rank(V, q) == t:
            break
    return matmul_mod(U, V, q)


def kron_identity(n, A, q):
    """Block diagonal I_n (x) A."""
    return np.kron(np.eye(n, dtype=np.int64), np.asarray(A, dtype=np.int64)) % q


def gaussian_binomial(u, v, q):
    """Number of v-dimensional subspaces of F_q^u, exact."""
    if v < 0 or v > u:
        return 0
    num = 1
    den = 1
    for i in range(1, v + 1):
        num *= q ** (u - v + i) - 1
        den *= q**i - 1
    assert num % den == 0
    return num // den


def log2_int(n):
    """log2 of a positive big integer without float overflow."""
    if n <= 0:
        raise ValueError("n must be positive")
    b = n.bit_length()
    if b <= 512:
        return math.log2(n)
    return math.log2(n >> (b - 512)) + (b - 512)


def subspace_prob_log2(u, v, w, q):
    """log2 of the probability that a fixed w-dim subspace of F_q^u lies in a
    uniformly random v-dim subspace: gauss(u-w, v-w) / gauss(u, v).

    Asymptotically -w(u-v) log2 q; computed exactly.
    """
    if not (0 <= w <= v <= u):
        raise ValueError("need 0 <= w <= v <= u")
    num = gaussian_binomial(u - w, v - w, q)
    den = gaussian_binomial(u, v, q)
    return log2_int(num) - log2_int(den)
